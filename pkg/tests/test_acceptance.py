"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from analog_ecc import abft
from analog_ecc import constructions as cons
from analog_ecc import experiments as ex
from analog_ecc import heights as ht
from analog_ecc import numerics as nx
from analog_ecc import zonotope as zt

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(capsys, number, title, budget):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget
        with capsys.disabled():
            verdict = "PASS" if ok and within else "FAIL"
            print(f"\n[criterion {number}] {verdict}: {title} ({elapsed:.2f}s, budget {budget}s)")
    assert within, f"criterion {number} took {elapsed:.1f}s, budget {budget}s"


def constructed_codes(mode=nx.RATIONAL):
    codes = [cons.problem_b_code(n, mode) for n in range(4, 17, 2)]
    codes += [cons.block_code(n, k, mode) for n, k in cons.divisible_pairs(16)]
    return codes


def test_1_problem_b_tightness(capsys):
    with criterion(capsys, 1, "problem B codes have h1 = n/2 - 1 exactly for n = 4..16", 10):
        for n in range(4, 17, 2):
            assert ht.code_h1(cons.problem_b_code(n)).h1 == Fraction(n // 2 - 1)


def test_2_block_code_tightness(capsys):
    with criterion(capsys, 2, "block codes have h1 = k/(n-k) with the extremal witness", 30):
        pairs = cons.divisible_pairs(16)
        assert pairs
        for n, k in pairs:
            rep = ht.code_h1(cons.block_code(n, k))
            assert rep.h1 == Fraction(k, n - k), (n, k)
            assert ex.matches_extremal(rep.witness, n, k), (n, k, rep.witness)


def test_3_random_lower_bound(capsys):
    with criterion(capsys, 3, "100 random codes per size meet h1 >= k/(n-k) - 1e-7", 120):
        for n, k in [(6, 4), (8, 6), (9, 6), (10, 8)]:
            rep = ex.lower_bound_campaign(n, k, 100, seed=1000 + n)
            assert rep.trials == 100
            assert rep.passed, rep.failures
            assert rep.stats()["min"] >= k / (n - k) - 1e-7


def test_4_oracle_equivalence(capsys):
    with criterion(capsys, 4, "lp, primal and exact2d agree (exact in rational, 1e-7 in float)", 120):
        for code in constructed_codes():
            out = ex.oracle_agreement(code)
            assert out["agree"], (code.name, out["values"])
        for seed in range(200):
            n = 3 + seed % 8
            exact = cons.random_code(n, n - 2, seed, mode=nx.RATIONAL, denominator=64)
            out = ex.oracle_agreement(exact)
            assert len(out["values"]) == 3 and out["agree"], (seed, out["values"])
            floats = ht.CodeSpec(nx.as_array(nx.to_float(exact.parity_check), nx.FLOAT))
            out_f = ex.oracle_agreement(floats, rel_tol=1e-7)
            assert out_f["agree"], (seed, out_f["values"])
            ref = out["values"]["lp"]
            if ref != float("inf"):
                assert abs(out_f["values"]["lp"] - float(ref)) <= 1e-7 * max(1.0, float(ref))


def test_5_trace_lemma(capsys):
    with criterion(capsys, 5, "normalized rank-r products have trace <= r; oracle agrees for n <= 6", 60):
        for n, r in [(4, 2), (6, 2), (6, 3), (8, 4)]:
            rep = ex.trace_lemma_campaign(n, r, 1000, seed=7 * n + r)
            assert rep.trials == 1000
            assert rep.passed, rep.failures[:3]
            assert rep.stats()["max"] <= r + 1e-9
            if n <= 6:
                assert all(abs(row["oracle"] - row["trace"]) <= 1e-8 for row in rep.rows)


def test_6_decoder_guarantee_and_sharpness(capsys):
    with criterion(capsys, 6, "problem_b(8), delta 1: no false alarm, no miss above 8, masking below 8", 120):
        rep = ex.decoder_campaign(cons.problem_b_code(8, nx.FLOAT), 1.0, 10_000, seed=2024)
        assert rep.notes["gamma"] == pytest.approx(8)
        assert rep.passed, rep.failures[:3]
        no_error = [r for r in rep.rows if r["position"] == -1]
        assert len(no_error) == 10_000 and all(r["verdict"] == "empty" for r in no_error)
        above = [r for r in rep.rows if r["position"] >= 0 and abs(r["magnitude"]) >= 8 * (1 + 1e-6)]
        assert len(above) == 10_000 and all(r["verdict"] == "detect" for r in above)
        assert rep.notes["masked_positions"]


def test_7_separation_certificates(capsys):
    with criterion(capsys, 7, "certificates separate (h1 + 1e-3) m_i for every constructed code", 10):
        for code in constructed_codes():
            h1 = ht.code_h1(code, refine_witness=False).h1
            H = code.parity_check
            scale = h1 + Fraction(1, 1000)
            for i in range(code.n):
                col = [H[r, i] for r in range(code.redundancy)]
                p = [scale * v for v in col]
                u = zt.separation_certificate(zt.Zonotope(H).without(i), p)
                assert u is not None, (code.name, i)
                # independent re-evaluation with plain Fractions
                u = [Fraction(v) for v in u]
                value = sum(a * b for a, b in zip(u, p))
                support = sum(abs(sum(u[r] * Fraction(H[r, j]) for r in range(code.redundancy)))
                              for j in range(code.n) if j != i)
                assert value > support, (code.name, i)


def test_8_abft(capsys):
    layout = abft.AbftLayout(8, 8, 8, 2, 2)
    tol = 1e-9 * 8  # default tolerance for entries in [-1, 1]
    magnitude = 1.01e3 * tol
    with criterion(capsys, 8, "ABFT 8x8x8, 2x2 parts: 1000 faults all found and located, 1000 clean", 60):
        rep = ex.abft_campaign(layout, 1000, magnitude, seed=8)
        assert rep.passed, rep.failures[:3]
        assert rep.notes["detected"] == 1000 and rep.notes["located"] == 1000
        assert rep.notes["fault_free_trials"] == 1000 and rep.notes["false_alarms"] == 0
