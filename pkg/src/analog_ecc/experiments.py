"""Seeded campaigns that check the 1-height bounds, the trace lemma, tightness and the decoder."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import abft
from . import channel as ch
from . import constructions as cons
from . import heights as ht
from . import numerics as nx

BOUND_SLACK = 1e-7
TRACE_SLACK = 1e-9
ORACLE_TOL = 1e-8
ORACLE_MAX_N = 6
THRESHOLD_MARGIN = 1e-6


@dataclass
class CampaignReport:
    name: str
    parameters: dict
    trials: int = 0
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    stat_key: str | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def stats(self) -> dict:
        vals = [r[self.stat_key] for r in self.rows if self.stat_key and r.get(self.stat_key) is not None]
        vals = [float(v) for v in vals if float(v) != math.inf]
        if not vals:
            return {}
        return {"min": min(vals), "max": max(vals), "mean": sum(vals) / len(vals)}

    def to_json(self) -> dict:
        return _jsonable({
            "name": self.name,
            "parameters": self.parameters,
            "trials": self.trials,
            "statistic": self.stat_key,
            "stats": self.stats(),
            "notes": self.notes,
            "failures": self.failures,
            "pass": self.passed,
        })

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            columns = list(self.rows[0])
            writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _jsonable(v) for k, v in row.items()})
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (Fraction, float, np.floating)):
        return nx.format_scalar(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(obj, str):
        return obj.value
    return obj


def trial_seeds(seed: int, trials: int) -> list[int]:
    """Independent per-trial seeds derived from one campaign seed."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint32)]


def _map(fn, args, workers: int):
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * workers))))
    return [fn(a) for a in args]


# ---------------------------------------------------------------- lower bound

def _bound_trial(args):
    n, k, s = args
    report = ht.code_h1(cons.random_code(n, k, s), refine_witness=False)
    return {"seed": s, "n": n, "k": k, "h1": report.h1, "coordinate": report.coordinate}


def lower_bound_campaign(n: int, k: int, trials: int, seed: int, workers: int = 1) -> CampaignReport:
    bound = ht.h1_lower_bound(n, k)
    report = CampaignReport("bounds", {"n": n, "k": k, "trials": trials, "seed": seed},
                            stat_key="h1")
    report.notes = {"bound": bound, "ceiling_bound": ht.h1_ceiling_bound(n, k),
                    "ceiling_tight_known": (n - k) >= 1 and k % (n - k) == 0}
    for row in _map(_bound_trial, [(n, k, s) for s in trial_seeds(seed, trials)], workers):
        row["bound"] = bound
        report.rows.append(row)
        if row["h1"] < bound - BOUND_SLACK:
            report.failures.append({"seed": row["seed"], "h1": row["h1"], "bound": bound})
    report.trials = len(report.rows)
    return report


# ---------------------------------------------------------------- trace lemma

def _det(a: np.ndarray) -> float:
    """Determinant by cofactor expansion memoized over column subsets."""
    n = a.shape[0]
    memo = {}

    def minor(row, cols):
        if row == n:
            return 1.0
        key = (row, cols)
        if key in memo:
            return memo[key]
        total, sign = 0.0, 1.0
        for j in range(n):
            if cols >> j & 1:
                continue
            if a[row, j] != 0:
                total += sign * a[row, j] * minor(row + 1, cols | 1 << j)
            sign = -sign
        memo[key] = total
        return total

    return minor(0, 0)


def eigenvalue_sum_oracle(a) -> float:
    """Sum of eigenvalues read from the characteristic polynomial.

    ``det(t I - A)`` is sampled at Chebyshev nodes and interpolated; the sum
    is minus the coefficient of ``t^(n-1)``. The diagonal is never summed.
    """
    a = np.asarray(a, float)
    n = a.shape[0]
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle restricted to n <= {ORACLE_MAX_N}")
    nodes = 2.0 * np.cos(np.pi * (np.arange(n + 1) + 0.5) / (n + 1))
    values = [_det(t * np.eye(n) - a) for t in nodes]
    coeffs = np.polyfit(nodes, values, n)
    return -coeffs[1] / coeffs[0]


def normalized_product(n: int, r: int, rng) -> np.ndarray:
    """``U M^T`` for Gaussian ``n x r`` factors, scaled to unit infinity norm."""
    U = rng.standard_normal((n, r))
    M = rng.standard_normal((n, r))
    A = U @ M.T
    return A / nx.inf_norm_matrix(A)


def _trace_trial(args):
    n, r, s = args
    A = normalized_product(n, r, np.random.default_rng(s))
    row = {"seed": s, "n": n, "r": r, "trace": float(nx.trace(A)),
           "norm": float(nx.inf_norm_matrix(A)), "rank": nx.rank(A)}
    row["oracle"] = float(eigenvalue_sum_oracle(A)) if n <= ORACLE_MAX_N else None
    return row


def trace_lemma_campaign(n: int, r: int, trials: int, seed: int, workers: int = 1) -> CampaignReport:
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got n={n}, r={r}")
    report = CampaignReport("trace", {"n": n, "r": r, "trials": trials, "seed": seed},
                            stat_key="trace")
    for row in _map(_trace_trial, [(n, r, s) for s in trial_seeds(seed, trials)], workers):
        report.rows.append(row)
        problems = []
        if row["trace"] > r + TRACE_SLACK:
            problems.append("trace exceeds rank")
        if row["rank"] > r:
            problems.append("rank exceeds r")
        if row["oracle"] is not None and abs(row["oracle"] - row["trace"]) > ORACLE_TOL:
            problems.append("oracle disagrees")
        if problems:
            report.failures.append({"seed": row["seed"], "trace": row["trace"], "why": problems})
    report.trials = len(report.rows)
    return report


# ---------------------------------------------------------------- tightness

def matches_extremal(witness, n: int, k: int) -> bool:
    """Whether ``witness`` is ``extremal_vector(n, k)`` up to block symmetry, scaling and sign."""
    layout = cons.BlockLayout(n, k)
    w = list(witness)
    top = max(range(n), key=lambda j: abs(w[j]))
    lead = w[top]
    if lead == 0:
        return False
    scaled = [v / lead * (layout.block_size - 1) for v in w]
    block = layout.locate(top)[0]
    if any(v != 0 for j, v in enumerate(scaled) if layout.locate(j)[0] != block):
        return False
    inside = sorted(v for j, v in enumerate(scaled) if layout.locate(j)[0] == block)
    return inside == sorted(cons.extremal_vector(n, k)[:layout.block_size])


def _problem_b_pattern(n):
    c = n // 2 - 1
    return [Fraction(c)] + [Fraction(-1)] * c + [Fraction(0)] * (n // 2)


def tightness_suite(max_n: int) -> CampaignReport:
    """Exact 1-heights of the tight constructions for every admissible size up to ``max_n``."""
    if max_n < 4:
        raise ValueError("max_n must be at least 4")
    report = CampaignReport("tightness", {"max_n": max_n}, stat_key="h1")
    cases = [("problem_b", n, n - 2) for n in range(4, max_n + 1, 2)]
    cases += [("block", n, k) for n, k in cons.divisible_pairs(max_n)]
    for kind, n, k in cases:
        if kind == "problem_b":
            code = cons.problem_b_code(n)
            expected = Fraction(n // 2 - 1)
            extremal = nx.as_array(_problem_b_pattern(n), nx.RATIONAL)
        else:
            code = cons.block_code(n, k)
            expected = Fraction(k, n - k)
            extremal = cons.extremal_vector(n, k)
        rep = ht.code_h1(code)
        problems = []
        if rep.h1 != expected:
            problems.append(f"h1 {rep.h1} != {expected}")
        if ht.vector_m_height(extremal, 1) != expected or not code.is_codeword(extremal):
            problems.append("extremal vector does not attain the bound")
        if rep.witness is None or not code.is_codeword(rep.witness) or ht.vector_m_height(rep.witness, 1) != rep.h1:
            problems.append("invalid witness")
        elif kind == "block" and not matches_extremal(rep.witness, n, k):
            problems.append("witness is not the extremal pattern")
        elif kind == "problem_b" and n >= 6 and not matches_extremal(rep.witness, n, n - 2):
            problems.append("witness is not the extremal pattern")
        report.rows.append({"construction": kind, "n": n, "k": k, "h1": rep.h1, "expected": expected,
                            "coordinate": rep.coordinate, "ok": not problems})
        if problems:
            report.failures.append({"construction": kind, "n": n, "k": k, "why": problems})
    report.trials = len(report.rows)
    return report


# ---------------------------------------------------------------- decoder

def decoder_campaign(code: ht.CodeSpec, delta, trials: int, seed: int) -> CampaignReport:
    """Check the single-error detection guarantee and its sharpness on ``code``.

    Three parts: error-free words must never be flagged; a lone outlier just
    above ``(2 h1 + 2) delta`` must always be flagged; and just below that
    magnitude an adversarial noise vector must exist that hides the outlier.
    ``delta = 0`` degenerates to exact syndrome checking.
    """
    rep_h = ht.code_h1(code)
    if not rep_h.finite:
        raise ValueError("decoder campaign needs a code with finite 1-height")
    h1 = rep_h.h1
    n, k = code.n, code.k
    report = CampaignReport("decoder", {"n": n, "k": k, "delta": delta, "trials": trials, "seed": seed,
                                        "code": code.name}, stat_key="magnitude")
    seeds = trial_seeds(seed, trials)

    if delta == 0:
        for t, s in enumerate(seeds):
            rng = np.random.default_rng(s)
            c = ch.encode(code, rng.standard_normal(k))
            mag = float(rng.uniform(0.5, 2.0))
            e = ch.InjectionSpec.single(t % n, mag).vector(n, code.mode)
            v = ch.detect(code, c + e, 0)
            clean = ch.detect(code, c, 0)
            report.rows.append(_decoder_row(s, code, h1, 0, mag, t % n, v, "PASS" if v == ch.Verdict.DETECT else "FAIL(D2)"))
            if v != ch.Verdict.DETECT or clean != ch.Verdict.EMPTY:
                report.failures.append({"seed": s, "part": "exact", "position": t % n})
        report.trials = len(report.rows)
        return report

    gamma = ht.gamma_threshold(h1, delta)
    params = ch.ChannelParams(delta, gamma)
    above = gamma * (1 + THRESHOLD_MARGIN)
    below = gamma * (1 - THRESHOLD_MARGIN)
    report.notes = {"h1": h1, "gamma": gamma, "coordinate": rep_h.coordinate}

    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        msg = rng.standard_normal(k)
        trace = ch.transmit(code, msg, params, ch.InjectionSpec(), s)
        verdict = ch.compliance_check(trace, params)
        report.rows.append(_decoder_row(s, code, h1, delta, 0, -1, trace.verdict, verdict))
        if not verdict.passed:
            report.failures.append({"seed": s, "part": "no-error", "clause": verdict.clause})

    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        msg = rng.standard_normal(k)
        pos = t % n
        sign = -1 if t % 2 else 1
        mag = above if t % 4 < 2 else above * (1 + float(rng.exponential(1.0)))
        trace = ch.transmit(code, msg, params, ch.InjectionSpec.single(pos, sign * mag), s + 1)
        verdict = ch.compliance_check(trace, params)
        report.rows.append(_decoder_row(s, code, h1, delta, sign * mag, pos, trace.verdict, verdict))
        if not verdict.passed or trace.verdict != ch.Verdict.DETECT:
            report.failures.append({"seed": s, "part": "above-threshold", "position": pos, "magnitude": mag})

    masked = []
    for pos in range(n):
        w = ch.masking_witness(code, pos, below, delta)
        if w is not None:
            eps, e = w
            trace = ch.transmit(code, [0] * k, params, ch.InjectionSpec.single(pos, below), seed, noise=eps)
            verdict = ch.compliance_check(trace, params)
            if trace.verdict == ch.Verdict.EMPTY and verdict.passed:
                masked.append(pos)
            report.rows.append(_decoder_row(seed, code, h1, delta, below, pos, trace.verdict, verdict))
        if ch.masking_witness(code, pos, above, delta) is not None:
            report.failures.append({"part": "sharpness", "position": pos, "why": "masked above threshold"})
    report.notes["masked_positions"] = masked
    if not masked:
        report.failures.append({"part": "sharpness", "why": "no masking witness below threshold"})
    report.trials = len(report.rows)
    return report


def _decoder_row(seed, code, h1, delta, magnitude, position, verdict, compliance):
    return {"seed": seed, "n": code.n, "k": code.k, "h1": h1, "delta": delta, "magnitude": magnitude,
            "position": position, "verdict": ch.Verdict(verdict).value, "compliance": str(compliance)}


# ---------------------------------------------------------------- abft

def abft_campaign(layout: abft.AbftLayout, trials: int, magnitude, seed: int,
                  fault_free: int | None = None) -> CampaignReport:
    """Inject one fault per trial into a random protected product and check detection."""
    report = CampaignReport("abft", {"layout": vars(layout), "trials": trials, "magnitude": magnitude,
                                     "seed": seed}, stat_key="violations")
    rows, cols = layout.encoded_shape
    for t, s in enumerate(trial_seeds(seed, trials)):
        rng = np.random.default_rng(s)
        A = rng.uniform(-1, 1, (layout.m, layout.ell))
        B = rng.uniform(-1, 1, (layout.ell, layout.n))
        tol = abft.default_tolerance(A, B)
        Cp = abft.protected_gemm(abft.encode_left(A, layout), abft.encode_right(B, layout))
        r, c = int(rng.integers(layout.m)), int(rng.integers(layout.n))
        pos = (layout.encoded_row(r), layout.encoded_col(c))
        sign = 1 if rng.random() < 0.5 else -1
        violations = abft.verify(abft.inject_fault(Cp, pos, sign * magnitude), tol)
        located = abft.localize(violations)
        detected = bool(violations)
        report.rows.append({"trial": t, "position": f"{r}:{c}", "magnitude": magnitude,
                            "detected": detected, "violations": len(violations),
                            "located": located == (r, c), "seed": s})
        if magnitude > 2 * tol and (not detected or located != (r, c)):
            report.failures.append({"seed": s, "row": r, "col": c, "violations": len(violations)})
        if magnitude == 0 and detected:
            report.failures.append({"seed": s, "why": "violation without a fault"})
    clean = trials if fault_free is None else fault_free
    false_alarms = 0
    for s in trial_seeds(seed + 1, clean):
        rng = np.random.default_rng(s)
        A = rng.uniform(-1, 1, (layout.m, layout.ell))
        B = rng.uniform(-1, 1, (layout.ell, layout.n))
        Cp = abft.protected_gemm(abft.encode_left(A, layout), abft.encode_right(B, layout))
        if abft.verify(Cp, abft.default_tolerance(A, B)):
            false_alarms += 1
            report.failures.append({"seed": s, "why": "fault-free product flagged"})
    report.notes = {"fault_free_trials": clean, "false_alarms": false_alarms,
                    "detected": sum(r["detected"] for r in report.rows),
                    "located": sum(r["located"] for r in report.rows)}
    report.trials = len(report.rows)
    return report


# ---------------------------------------------------------------- oracle agreement

def oracle_agreement(code: ht.CodeSpec, rel_tol: float = 1e-7) -> dict:
    """h1 from every applicable method and whether they agree (exactly in rational mode)."""
    values = {m: ht.code_h1(code, m).h1 for m in ht.applicable_methods(code)}
    ref = values["lp"]
    if code.mode == nx.RATIONAL or ref == math.inf:
        agree = all(v == ref for v in values.values())
    else:
        agree = all(abs(v - ref) <= rel_tol * max(1.0, abs(ref)) for v in values.values())
    return {"values": values, "agree": agree}


def all_pairs_upto(max_n: int):
    return list(itertools.chain(((n, n - 2) for n in range(4, max_n + 1, 2)), cons.divisible_pairs(max_n)))
