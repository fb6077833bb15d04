"""
Computing the 1-height of a real code
=====================================

The 1-height of a code says how far one coordinate of a codeword can stick
out above the others. It fixes the threshold above which a single outlier is
guaranteed to be detected.
"""

from fractions import Fraction

import numpy as np

import analog_ecc as ae
from analog_ecc import numerics as nx

# A tiny parity check: two pairs that must each sum to zero.
H = nx.as_array([[1, 1, 0, 0], [0, 0, 1, 1]], nx.RATIONAL)
code = ae.CodeSpec(H, name="pairs")
report = ae.code_h1(code)
print("h1 =", report.h1, " threshold factor =", report.gamma1)
print("witness codeword:", [str(v) for v in report.witness])

# The same number from three independent computations.
for method in ae.applicable_methods(code):
    print(f"  {method:8s}", ae.code_h1(code, method).h1)

# The m-height of any single vector: ratio of its largest entry to the (m+1)-th largest.
x = np.array([4.0, -2.0, 1.0])
print("height_2 of", x, "=", ae.vector_m_height(x, 2))

# Random codes never beat k/(n-k).
for seed in range(5):
    c = ae.random_code(8, 6, seed)
    print(f"seed {seed}: h1 = {ae.code_h1(c).h1:.4f} (bound {Fraction(6, 2)})")
