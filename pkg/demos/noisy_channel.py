"""
Detecting one outlier in a noisy channel
========================================

Every entry of the received word carries bounded noise |eps| <= delta. A
single outlier larger than (2 h1 + 2) delta is always flagged. Just below
that level, a worst-case noise vector can hide it.
"""

import numpy as np

import analog_ecc as ae
from analog_ecc import channel as ch
from analog_ecc import numerics as nx

code = ae.problem_b_code(8, nx.FLOAT)
h1 = ae.code_h1(code).h1
delta = 1.0
gamma = ae.gamma_threshold(h1, delta)
print(f"h1 = {h1:g}, guaranteed detection above {gamma:g}")

params = ch.ChannelParams(delta, gamma)
msg = np.random.default_rng(0).standard_normal(code.k)

# Clean transmission.
trace = ch.transmit(code, msg, params, ch.InjectionSpec(), seed=1)
print("no outlier      ->", trace.verdict.value, ch.compliance_check(trace, params))

# Outlier just above the threshold.
trace = ch.transmit(code, msg, params, ch.InjectionSpec.single(3, 8.1), seed=2)
print("outlier 8.1     ->", trace.verdict.value, ch.compliance_check(trace, params))

# Just below: ask the LP for noise that masks it.
eps, e = ch.masking_witness(code, 3, 7.9, delta)
trace = ch.transmit(code, msg, params, ch.InjectionSpec.single(3, 7.9), seed=3, noise=eps)
print("outlier 7.9     ->", trace.verdict.value, "with noise", np.round(eps, 3))
