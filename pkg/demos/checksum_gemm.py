"""
Checksum-protected matrix multiplication
========================================

Each operand gets a sum row (or sum column) per block. The product then
carries checksums that a single corrupted entry cannot satisfy, so the
fault shows up as one bad row identity and one bad column identity.
"""

import numpy as np

from analog_ecc import abft
from analog_ecc import numerics as nx

layout = abft.AbftLayout(m=4, ell=4, n=4, row_parts=2, col_parts=2)
rng = np.random.default_rng(5)
A = nx.as_array(rng.integers(-4, 5, (4, 4)), nx.RATIONAL)
B = nx.as_array(rng.integers(-4, 5, (4, 4)), nx.RATIONAL)

C = abft.protected_gemm(abft.encode_left(A, layout), abft.encode_right(B, layout))
print(abft.render(C, width=5))
print("violations on the clean product:", abft.verify(C))

# Corrupt payload entry (2, 1) and find it again.
cell = (layout.encoded_row(2), layout.encoded_col(1))
bad = abft.inject_fault(C, cell, 1)
found = abft.verify(bad)
for v in found:
    print(" ", v.kind, "checksum broken in block", (v.block_row, v.block_col), "residual", v.residual)
print("located payload cell:", abft.localize(found))

# Each product column is a codeword of a block code whose 1-height is the block size.
from analog_ecc import heights

print("column code h1:", heights.code_h1(abft.column_code(layout)).h1)
