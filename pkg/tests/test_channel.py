import numpy as np
import pytest

from analog_ecc import channel as ch
from analog_ecc import constructions as cons
from analog_ecc import heights as ht
from analog_ecc import numerics as nx
from analog_ecc import zonotope as zt

PB8 = cons.problem_b_code(8, nx.FLOAT)


def test_params_validation():
    with pytest.raises(ValueError):
        ch.ChannelParams(0, 1)
    with pytest.raises(ValueError):
        ch.ChannelParams(1, -1)
    with pytest.raises(ValueError):
        ch.InjectionSpec(((1, 2.0), (1, 3.0)))
    with pytest.raises(ValueError):
        ch.InjectionSpec.single(9, 1.0).vector(8)


def test_zero_message_tiny_delta():
    trace = ch.transmit(PB8, [0] * 6, ch.ChannelParams(1e-300, 8), ch.InjectionSpec(), 0)
    assert np.max(np.abs(trace.received)) <= 1e-300
    assert trace.verdict == ch.Verdict.EMPTY


def test_trace_invariants_10k_noise_samples():
    params = ch.ChannelParams(0.5, 4)
    worst = 0.0
    for seed in range(200):
        trace = ch.transmit(PB8, np.ones(6), params, ch.InjectionSpec.single(2, 1.0), seed)
        np.testing.assert_allclose(trace.received, trace.codeword + trace.noise + trace.outliers, atol=1e-12)
        worst = max(worst, np.max(np.abs(trace.noise)))
    noise = np.concatenate([ch.transmit(PB8, np.zeros(6), params, ch.InjectionSpec(), s).noise
                            for s in range(1250)])
    assert noise.size == 10_000 and np.max(np.abs(noise)) <= 0.5 and worst <= 0.5


def test_transmit_is_deterministic():
    params = ch.ChannelParams(1, 8)
    a = ch.transmit(PB8, np.arange(6.0), params, ch.InjectionSpec(), 42)
    b = ch.transmit(PB8, np.arange(6.0), params, ch.InjectionSpec(), 42)
    assert (a.received == b.received).all()
    with pytest.raises(ValueError):
        ch.transmit(PB8, np.arange(5.0), params, ch.InjectionSpec(), 42)


def test_codeword_not_flagged(rng):
    for _ in range(50):
        c = ch.encode(PB8, rng.standard_normal(6))
        assert ch.detect(PB8, c, 1) == ch.Verdict.EMPTY
        assert ch.detect(PB8, c, 0) == ch.Verdict.EMPTY
    with pytest.raises(ValueError):
        ch.detect(PB8, np.zeros(7), 1)


def test_above_threshold_flagged_everywhere():
    gamma = ht.gamma_threshold(ht.code_h1(PB8).h1, 1)
    assert gamma == pytest.approx(8)
    params = ch.ChannelParams(1, gamma)
    for pos in range(8):
        trace = ch.transmit(PB8, np.ones(6), params, ch.InjectionSpec.single(pos, 8.1), pos)
        assert trace.verdict == ch.Verdict.DETECT
    trace = ch.transmit(PB8, np.ones(6), params, ch.InjectionSpec.single(3, gamma + 1), 7)
    assert trace.verdict == ch.Verdict.DETECT


def test_masking_below_threshold():
    params = ch.ChannelParams(1, 8)
    for pos in range(8):
        eps, e = ch.masking_witness(PB8, pos, 7.9, 1)
        assert np.max(np.abs(eps)) <= 1
        trace = ch.transmit(PB8, np.zeros(6), params, ch.InjectionSpec.single(pos, 7.9), 0, noise=eps)
        assert trace.verdict == ch.Verdict.EMPTY
        assert ch.compliance_check(trace, params).passed
        assert ch.masking_witness(PB8, pos, 8.1, 1) is None


def test_masking_exact_rational():
    code = cons.problem_b_code(8)
    eps, e = ch.masking_witness(code, 0, 8, 1)  # boundary: exactly Gamma delta is still maskable
    assert max(abs(v) for v in eps) <= 1
    y = eps + e
    assert zt.contains(zt.Zonotope(code.parity_check), code.syndrome(y), 1)
    assert ch.detect(code, y, 1) == ch.Verdict.EMPTY


def test_compliance_examples():
    params = ch.ChannelParams(1, 8)
    z = np.zeros(8)

    def trace(e, verdict):
        return ch.TransmissionTrace(z, z, np.asarray(e, float), z + e, verdict)

    e_big = np.eye(8)[2] * 9
    e_small = np.eye(8)[2] * 3
    assert ch.compliance_check(trace(z, ch.Verdict.EMPTY), params).passed
    assert str(ch.compliance_check(trace(z, ch.Verdict.DETECT), params)) == "FAIL(D1)"
    assert str(ch.compliance_check(trace(e_big, ch.Verdict.EMPTY), params)) == "FAIL(D2)"
    assert str(ch.compliance_check(trace(e_small, ch.Verdict.EMPTY), params)) == "PASS"
    assert ch.compliance_check(trace(e_big, ch.Verdict.DETECT), params).passed


@pytest.mark.parametrize("code", [cons.block_code(9, 6, nx.FLOAT), cons.block_code(12, 8, nx.FLOAT),
                                  cons.problem_b_code(6, nx.FLOAT)], ids=lambda c: c.name)
def test_guarantee_on_constructions(code, rng):
    h1 = ht.code_h1(code).h1
    gamma = ht.gamma_threshold(h1, 0.7)
    params = ch.ChannelParams(0.7, gamma)
    for t in range(300):
        pos = t % code.n
        sign = 1 if t % 2 else -1
        trace = ch.transmit(code, rng.standard_normal(code.k), params,
                            ch.InjectionSpec.single(pos, sign * gamma * (1 + 1e-6)), t)
        assert trace.verdict == ch.Verdict.DETECT
        clean = ch.transmit(code, rng.standard_normal(code.k), params, ch.InjectionSpec(), t)
        assert ch.compliance_check(clean, params).passed
