"""Codes that attain the 1-height lower bound, their extremal codewords, and random codes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import numerics as nx
from .heights import CodeSpec

MAX_RESAMPLES = 100


@dataclass(frozen=True)
class BlockLayout:
    """``n`` coordinates split into ``n - k`` consecutive blocks of ``n / (n - k)``."""

    n: int
    k: int

    def __post_init__(self):
        r = self.n - self.k
        if not (self.k > r >= 2):
            raise ValueError(f"need k > n-k >= 2, got n={self.n}, k={self.k}")
        if self.k % r:
            raise ValueError(f"n-k={r} does not divide k={self.k}")

    @property
    def block_count(self) -> int:
        return self.n - self.k

    @property
    def block_size(self) -> int:
        return self.n // self.block_count

    def locate(self, j: int) -> tuple[int, int]:
        """``(block, offset)`` of coordinate ``j``."""
        return divmod(j, self.block_size)

    def index(self, block: int, offset: int) -> int:
        return block * self.block_size + offset


def _indicator_rows(n: int, blocks: int, mode: str) -> np.ndarray:
    size = n // blocks
    H = [[1 if j // size == i else 0 for j in range(n)] for i in range(blocks)]
    return nx.as_array(H, mode)


def problem_b_code(n: int, mode: str = nx.RATIONAL) -> CodeSpec:
    """Redundancy-2 code: each half of the coordinates sums to zero."""
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and >= 4, got {n}")
    return CodeSpec(_indicator_rows(n, 2, mode), name=f"problem_b(n={n})")


def block_code(n: int, k: int, mode: str = nx.RATIONAL) -> CodeSpec:
    """One sum-to-zero constraint per block of :class:`BlockLayout`; 1-height ``k/(n-k)``."""
    layout = BlockLayout(n, k)
    return CodeSpec(_indicator_rows(n, layout.block_count, mode), name=f"block(n={n},k={k})")


def extremal_vector(n: int, k: int, mode: str = nx.RATIONAL) -> np.ndarray:
    """``(k/(n-k), -1, ..., -1, 0, ..., 0)`` with ``k/(n-k)`` entries equal to -1."""
    layout = BlockLayout(n, k)
    c = layout.block_size - 1
    x = [c] + [-1] * c + [0] * (n - c - 1)
    return nx.as_array(x, mode)


def divisible_pairs(max_n: int):
    """All ``(n, k)`` with ``k > n-k >= 2``, ``(n-k) | k`` and ``n <= max_n``."""
    out = []
    for n in range(4, max_n + 1):
        for k in range(1, n):
            r = n - k
            if k > r >= 2 and k % r == 0:
                out.append((n, k))
    return out


def random_code(n: int, k: int, seed: int, mode: str = nx.FLOAT, denominator: int | None = None) -> CodeSpec:
    """Gaussian parity check, resampled until full row rank; deterministic per seed.

    With ``denominator`` set, entries are rounded to that grid before use, which
    keeps rational-mode arithmetic small; the rank is then checked exactly.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESAMPLES):
        raw = rng.standard_normal((n - k, n))
        if denominator is not None:
            data = [[Fraction(round(v * denominator), denominator) for v in row] for row in raw]
            H = nx.as_array(data, mode)
        else:
            H = nx.as_array(raw, mode)
        if nx.rank(H) == n - k:
            return CodeSpec(H, name=f"random(n={n},k={k},seed={seed})")
    raise RuntimeError(f"no full-rank parity check after {MAX_RESAMPLES} draws")


def from_json(obj: dict, mode: str = nx.RATIONAL) -> CodeSpec:
    """Build a code from ``{"construction": "problem_b"|"block"|"random", "n", "k", "seed"}``."""
    kind = obj["construction"].replace("-", "_")
    n = int(obj["n"])
    if kind == "problem_b":
        return problem_b_code(n, mode)
    if kind == "block":
        return block_code(n, int(obj["k"]), mode)
    if kind == "random":
        return random_code(n, int(obj["k"]), int(obj.get("seed", 0)), mode)
    raise ValueError(f"unknown construction {obj['construction']!r}")


def to_json(kind: str, n: int, k: int | None = None, seed: int | None = None) -> dict:
    out = {"construction": kind, "n": n}
    if kind == "problem_b":
        out["k"] = n - 2
    elif k is not None:
        out["k"] = k
    if seed is not None:
        out["seed"] = seed
    return out
