"""
Codes that meet the lower bound
===============================

Block-indicator parity checks reach h1 = k/(n-k) exactly. The extremal
codeword puts k/(n-k) on one coordinate and -1 on the rest of its block.
"""

import analog_ecc as ae
from analog_ecc import experiments as ex

for n in range(4, 13, 2):
    code = ae.problem_b_code(n)
    print(f"pairs-of-blocks n={n:2d}: h1 = {ae.code_h1(code).h1}")

print()
for n, k in ae.divisible_pairs(16):
    rep = ae.code_h1(ae.block_code(n, k))
    print(f"block [{n},{k}]: h1 = {str(rep.h1):>3s}  witness = {[str(v) for v in rep.witness]}")

# The full check, as one report.
suite = ex.tightness_suite(16)
print("\ntightness suite:", "pass" if suite.passed else suite.failures)
