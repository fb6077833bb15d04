"""Partitioned checksum protection for ``C = A @ B``.

``A`` (m x ell) is cut into ``row_parts`` row blocks; after each block comes
one row holding its column sums. ``B`` (ell x n) is cut into ``col_parts``
column blocks; after each block comes one column holding its row sums. The
product of the two encoded operands then carries, for every block of ``C``,
a checksum row, a checksum column and a corner cell::

    C11      C11 p2      C12      C12 p2
    p1' C11  p1' C11 p2  p1' C12  p1' C12 p2
    ...

Each column of the product is a codeword of an ``[m + R, m]`` code with one
sum-to-zero constraint per block, the tight construction for single-error
detection, and likewise for rows.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .heights import CodeSpec


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    PRODUCT = "product"


@dataclass(frozen=True)
class AbftLayout:
    m: int
    ell: int
    n: int
    row_parts: int = 2
    col_parts: int = 2

    def __post_init__(self):
        for name, dim, parts in (("m", self.m, self.row_parts), ("n", self.n, self.col_parts)):
            if parts < 1 or dim < 1 or dim % parts:
                raise ValueError(f"{name}={dim} is not divisible into {parts} parts")
        if self.ell < 1:
            raise ValueError("inner dimension must be positive")

    @property
    def row_block(self) -> int:
        return self.m // self.row_parts

    @property
    def col_block(self) -> int:
        return self.n // self.col_parts

    @property
    def p1(self) -> np.ndarray:
        return np.ones(self.row_block)

    @property
    def p2(self) -> np.ndarray:
        return np.ones(self.col_block)

    @property
    def encoded_shape(self) -> tuple[int, int]:
        return self.m + self.row_parts, self.n + self.col_parts

    # encoded-coordinate bookkeeping; the same formulas serve rows and columns
    @staticmethod
    def _enc(i: int, block: int) -> int:
        return i + i // block

    @staticmethod
    def _checksum_line(b: int, block: int) -> int:
        return (b + 1) * (block + 1) - 1

    def encoded_row(self, r: int) -> int:
        return self._enc(r, self.row_block)

    def encoded_col(self, c: int) -> int:
        return self._enc(c, self.col_block)

    def checksum_row(self, bi: int) -> int:
        return self._checksum_line(bi, self.row_block)

    def checksum_col(self, bj: int) -> int:
        return self._checksum_line(bj, self.col_block)

    def classify(self, row: int, col: int) -> tuple[str, int, int]:
        """``(kind, block_row, block_col)`` of an encoded cell; kind in payload/row/col/corner."""
        bi, ri = divmod(row, self.row_block + 1)
        bj, cj = divmod(col, self.col_block + 1)
        on_row = ri == self.row_block
        on_col = cj == self.col_block
        kind = {(False, False): "payload", (True, False): "row",
                (False, True): "col", (True, True): "corner"}[(on_row, on_col)]
        return kind, bi, bj

    def payload_rows(self, bi: int) -> list[int]:
        return [self.encoded_row(r) for r in range(bi * self.row_block, (bi + 1) * self.row_block)]

    def payload_cols(self, bj: int) -> list[int]:
        return [self.encoded_col(c) for c in range(bj * self.col_block, (bj + 1) * self.col_block)]


@dataclass(frozen=True)
class ProtectedMatrix:
    data: np.ndarray
    layout: AbftLayout
    side: Side

    def payload(self) -> np.ndarray:
        """The matrix with checksum lines removed."""
        L = self.layout
        rows = range(self.data.shape[0])
        cols = range(self.data.shape[1])
        if self.side in (Side.LEFT, Side.PRODUCT):
            rows = [L.encoded_row(r) for r in range(L.m)]
        if self.side in (Side.RIGHT, Side.PRODUCT):
            cols = [L.encoded_col(c) for c in range(L.n)]
        return self.data[np.ix_(list(rows), list(cols))]


@dataclass(frozen=True)
class Violation:
    kind: str  # "row": a checksum row disagrees; "col": a checksum column disagrees
    block_row: int
    block_col: int
    residual: float
    line: int  # payload column (row kind) or payload row (col kind) with the worst residual


def _frozen(a):
    a.setflags(write=False)
    return a


def encode_left(A, layout: AbftLayout) -> ProtectedMatrix:
    A = np.asarray(A)
    if A.shape != (layout.m, layout.ell):
        raise ValueError(f"A has shape {A.shape}, layout expects {(layout.m, layout.ell)}")
    mode = nx.mode_of(A)
    b = layout.row_block
    parts = []
    for i in range(layout.row_parts):
        block = A[i * b:(i + 1) * b]
        parts.append(block)
        parts.append(block.sum(axis=0, keepdims=True))
    out = np.vstack(parts).astype(object if mode == nx.RATIONAL else float)
    return ProtectedMatrix(_frozen(out), layout, Side.LEFT)


def encode_right(B, layout: AbftLayout) -> ProtectedMatrix:
    B = np.asarray(B)
    if B.shape != (layout.ell, layout.n):
        raise ValueError(f"B has shape {B.shape}, layout expects {(layout.ell, layout.n)}")
    mode = nx.mode_of(B)
    b = layout.col_block
    parts = []
    for j in range(layout.col_parts):
        block = B[:, j * b:(j + 1) * b]
        parts.append(block)
        parts.append(block.sum(axis=1, keepdims=True))
    out = np.hstack(parts).astype(object if mode == nx.RATIONAL else float)
    return ProtectedMatrix(_frozen(out), layout, Side.RIGHT)


def protected_gemm(Ap: ProtectedMatrix, Bp: ProtectedMatrix) -> ProtectedMatrix:
    if Ap.side != Side.LEFT or Bp.side != Side.RIGHT:
        raise ValueError("protected_gemm needs a left-encoded and a right-encoded operand")
    if Ap.layout != Bp.layout:
        raise ValueError(f"layout mismatch: {Ap.layout} vs {Bp.layout}")
    C = nx.matmul(Ap.data, Bp.data)
    return ProtectedMatrix(_frozen(np.array(C)), Ap.layout, Side.PRODUCT)


def default_tolerance(A, B) -> float:
    """``1e-9 * ell * max|A| * max|B|``; zero in rational mode."""
    if nx.same_mode(A, B) == nx.RATIONAL:
        return 0.0
    A, B = np.asarray(A, float), np.asarray(B, float)
    scale = max(np.max(np.abs(A), initial=0.0) * np.max(np.abs(B), initial=0.0), 1.0)
    return 1e-9 * A.shape[1] * scale


def verify(Cp: ProtectedMatrix, tolerance=0.0) -> list[Violation]:
    """Recheck every block's checksum row and checksum column.

    Only identities over payload lines are checked; the corner cell is a
    checksum of checksums and guards no payload value.
    """
    if Cp.side != Side.PRODUCT:
        raise ValueError("verify needs a product matrix")
    L = Cp.layout
    C = Cp.data
    out = []
    for bi in range(L.row_parts):
        rows = L.payload_rows(bi)
        ck_row = L.checksum_row(bi)
        for bj in range(L.col_parts):
            cols = L.payload_cols(bj)
            ck_col = L.checksum_col(bj)
            block = C[np.ix_(rows, cols)]
            col_res = [abs(v) for v in C[ck_row, cols] - block.sum(axis=0)]
            row_res = [abs(v) for v in C[rows, ck_col] - block.sum(axis=1)]
            worst = max(range(len(cols)), key=col_res.__getitem__)
            if col_res[worst] > tolerance:
                out.append(Violation("row", bi, bj, col_res[worst], bj * L.col_block + worst))
            worst = max(range(len(rows)), key=row_res.__getitem__)
            if row_res[worst] > tolerance:
                out.append(Violation("col", bi, bj, row_res[worst], bi * L.row_block + worst))
    return out


def inject_fault(Cp: ProtectedMatrix, position: tuple[int, int], magnitude) -> ProtectedMatrix:
    """Copy of ``Cp`` with ``magnitude`` added at one encoded cell."""
    r, c = position
    rows, cols = Cp.data.shape
    if not (0 <= r < rows and 0 <= c < cols):
        raise IndexError(f"position {position} outside {rows}x{cols}")
    data = np.array(Cp.data, copy=True)
    data[r, c] = data[r, c] + nx.scalar(magnitude, nx.mode_of(data))
    return ProtectedMatrix(_frozen(data), Cp.layout, Cp.side)


def localize(violations: list[Violation]) -> tuple[int, int] | None:
    """Payload cell ``(row, col)`` implied by exactly one row and one column violation."""
    rows = [v for v in violations if v.kind == "row"]
    cols = [v for v in violations if v.kind == "col"]
    if len(rows) != 1 or len(cols) != 1:
        return None
    r, c = rows[0], cols[0]
    if (r.block_row, r.block_col) != (c.block_row, c.block_col):
        return None
    return c.line, r.line


def column_code(layout: AbftLayout, mode: str = nx.RATIONAL) -> CodeSpec:
    """``[m + R, m]`` code of one product column: each block minus its checksum sums to zero."""
    size = layout.m + layout.row_parts
    H = [[0] * size for _ in range(layout.row_parts)]
    for bi in range(layout.row_parts):
        for r in layout.payload_rows(bi):
            H[bi][r] = 1
        H[bi][layout.checksum_row(bi)] = -1
    return CodeSpec(nx.as_array(H, mode), name=f"abft-column(m={layout.m},parts={layout.row_parts})")


def row_code(layout: AbftLayout, mode: str = nx.RATIONAL) -> CodeSpec:
    """``[n + R, n]`` code of one product row."""
    size = layout.n + layout.col_parts
    H = [[0] * size for _ in range(layout.col_parts)]
    for bj in range(layout.col_parts):
        for c in layout.payload_cols(bj):
            H[bj][c] = 1
        H[bj][layout.checksum_col(bj)] = -1
    return CodeSpec(nx.as_array(H, mode), name=f"abft-row(n={layout.n},parts={layout.col_parts})")


_MARKS = {"payload": " ", "row": "r", "col": "c", "corner": "*"}


def render(Cp: ProtectedMatrix, width: int = 9) -> str:
    """Text grid with checksum-row cells tagged ``r``, checksum columns ``c``, corners ``*``."""
    L = Cp.layout
    lines = []
    for i in range(Cp.data.shape[0]):
        cells = []
        for j in range(Cp.data.shape[1]):
            kind, _, _ = L.classify(i, j) if Cp.side == Side.PRODUCT else _classify_side(Cp, i, j)
            v = Cp.data[i, j]
            text = str(v) if nx.mode_of(Cp.data) == nx.RATIONAL else f"{float(v):.4g}"
            cells.append(f"{text:>{width}}{_MARKS[kind]}")
        lines.append(" ".join(cells))
    return "\n".join(lines)


def _classify_side(Cp, i, j):
    L = Cp.layout
    if Cp.side == Side.LEFT:
        return ("row" if i % (L.row_block + 1) == L.row_block else "payload"), 0, 0
    return ("col" if j % (L.col_block + 1) == L.col_block else "payload"), 0, 0
