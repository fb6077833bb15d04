"""
Trace of a low-rank matrix and random codes
===========================================

A rank-r matrix normalized to unit infinity norm has trace at most r. This
inequality drives the lower bound on the 1-height, and both are checked
here by sampling.
"""

import numpy as np

from analog_ecc import experiments as ex

rng = np.random.default_rng(11)
A = ex.normalized_product(6, 2, rng)
print("trace           =", np.trace(A))
print("eigenvalue sum  =", ex.eigenvalue_sum_oracle(A))

rep = ex.trace_lemma_campaign(6, 3, trials=500, seed=1)
print("trace campaign (n=6, r=3): max trace", round(rep.stats()["max"], 4), "pass" if rep.passed else "FAIL")

rep = ex.lower_bound_campaign(9, 6, trials=50, seed=1)
print("random [9,6] codes: smallest h1", round(rep.stats()["min"], 4), "bound", rep.notes["bound"])
