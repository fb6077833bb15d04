"""m-heights of vectors and the 1-height of real linear codes.

The 1-height of a code with parity-check columns ``m_0 .. m_{n-1}`` is::

    h1 = max_i  sup { c >= 0 : c m_i in Z_i },   Z_i = zonotope of {m_j : j != i}

because ``c m_i = sum_{j != i} a_j m_j`` with ``|a_j| <= 1`` is the same as the
codeword ``x_i = c, x_j = -a_j``. Three independent routes compute it:

* ``lp``      -- the zonotope scaling LP in syndrome space,
* ``primal``  -- maximize ``x_i`` over codewords with ``|x_j| <= 1`` for ``j != i``,
* ``exact2d`` -- edge normals of the planar zonogon (redundancy 2 only).

Infinite heights (a zero column, i.e. a weight-1 codeword) are returned as
``math.inf`` rather than raised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import lp
from . import numerics as nx
from . import zonotope as zt

METHODS = ("auto", "lp", "primal", "exact2d")

# float-mode slack when breaking ties between coordinates
TIE_TOL = 1e-9


@dataclass(frozen=True)
class CodeSpec:
    """An ``[n, k]`` real code given by a full-row-rank ``(n-k) x n`` parity check."""

    parity_check: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        H = np.asarray(self.parity_check)
        if H.ndim != 2:
            raise ValueError("parity_check must be a matrix")
        r, n = H.shape
        if not 1 <= r < n:
            raise ValueError(f"need 1 <= n-k < n, got a {r}x{n} parity check")
        if nx.rank(H) != r:
            raise ValueError("parity_check is rank deficient")

    @classmethod
    def from_matrix(cls, H, mode: str = nx.FLOAT, name: str = "") -> "CodeSpec":
        return cls(nx.as_array(H, mode), name)

    @property
    def n(self) -> int:
        return self.parity_check.shape[1]

    @property
    def k(self) -> int:
        return self.n - self.parity_check.shape[0]

    @property
    def redundancy(self) -> int:
        return self.parity_check.shape[0]

    @property
    def mode(self) -> str:
        return nx.mode_of(self.parity_check)

    def column(self, j: int) -> np.ndarray:
        return self.parity_check[:, j]

    def generator(self) -> np.ndarray:
        """``n x k`` matrix whose columns span the code."""
        return nx.kernel_basis(self.parity_check)

    def syndrome(self, y) -> np.ndarray:
        return nx.matmul(self.parity_check, nx.as_array(y, self.mode))

    def is_codeword(self, x, tol: float = 1e-8) -> bool:
        s = self.syndrome(x)
        if self.mode == nx.RATIONAL:
            return all(v == 0 for v in s)
        return bool(np.max(np.abs(s)) <= tol)

    def with_mode(self, mode: str) -> "CodeSpec":
        return CodeSpec(nx.as_array(self.parity_check, mode), self.name)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "parity_check": nx.matrix_to_json(self.parity_check)}


@dataclass(frozen=True)
class HeightReport:
    h1: object
    gamma1: object
    coordinate: int
    witness: np.ndarray | None
    method: str
    per_coordinate: tuple = field(default=(), repr=False)

    @property
    def finite(self) -> bool:
        return self.h1 != math.inf

    def to_json(self) -> dict:
        return {
            "h1": nx.format_scalar(self.h1),
            "gamma1": nx.format_scalar(self.gamma1),
            "coordinate": self.coordinate,
            "witness": None if self.witness is None else [nx.format_scalar(v) for v in self.witness],
            "method": self.method,
        }


def vector_m_height(x, m: int):
    """``|x_(0)| / |x_(m)|`` over magnitudes sorted in decreasing order.

    Infinite when ``m >= n`` or the ``m``-th largest magnitude is zero.
    """
    mags = sorted((abs(v) for v in np.asarray(x).ravel()), reverse=True)
    if not mags or mags[0] == 0:
        raise ValueError("m-height of the zero vector is undefined")
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m >= len(mags) or mags[m] == 0:
        return math.inf
    return mags[0] / mags[m]


def gamma_threshold(h1, delta):
    """Smallest outlier threshold admitting single-error detection at noise ``delta``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if h1 == math.inf:
        return math.inf
    return (2 * h1 + 2) * delta


def h1_lower_bound(n: int, k: int) -> Fraction:
    """Proven lower bound ``max(1, k/(n-k))`` on the 1-height of any ``[n, k]`` code."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    return max(Fraction(1), Fraction(k, n - k))


def h1_ceiling_bound(n: int, k: int) -> int:
    """``max(1, ceil(k/(n-k)))``; attained when ``(n-k) | k``, open otherwise."""
    return math.ceil(h1_lower_bound(n, k))


def _pick(values, mode):
    """Index of the max; smallest index wins ties (with float slack)."""
    best = max(values)
    if best == math.inf:
        return values.index(math.inf)
    if mode == nx.RATIONAL:
        return values.index(best)
    cut = best - TIE_TOL * (1 + abs(best))
    return next(i for i, v in enumerate(values) if v >= cut)


def _report(code, values, witnesses, method):
    mode = code.mode
    i = _pick(values, mode)
    h1 = values[i]
    if h1 == math.inf:
        return HeightReport(math.inf, math.inf, i, None, method, tuple(values))
    gamma = 2 * (h1 + 1)
    witness = nx.as_array(witnesses[i], mode)
    return HeightReport(h1, gamma, i, witness, method, tuple(values))


def _is_zero(col) -> bool:
    return all(v == 0 for v in col)


def sparsest_witness(code: CodeSpec, i: int, c):
    """Codeword with ``x_i = c`` and ``|x_j| <= 1`` elsewhere minimizing ``sum_{j != i} |x_j|``.

    ``x_j = p_j - q_j`` with ``p, q`` in ``[0, 1]``; at a vertex ``p_j q_j = 0``.
    Returns None if ``c m_i`` is not reachable (only possible through float slack).
    """
    mode = code.mode
    n, r = code.n, code.redundancy
    others = [j for j in range(n) if j != i]
    A = nx.zeros((r, 2 * len(others)), mode)
    for t, j in enumerate(others):
        A[:, t] = code.column(j)
        A[:, len(others) + t] = -code.column(j)
    rhs = [-c * v for v in code.column(i)]
    problem = lp.LpProblem.build([-1] * (2 * len(others)), A, rhs,
                                 lower=[0] * (2 * len(others)), upper=[1] * (2 * len(others)), mode=mode)
    sol = lp.solve(problem)
    if not sol.optimal:
        return None
    pq = sol.point
    x = [pq[t] - pq[len(others) + t] for t in range(len(others))]
    x.insert(i, c)
    return x


def _h1_zonotope_lp(code: CodeSpec, refine: bool = True) -> HeightReport:
    Z = zt.Zonotope(code.parity_check)
    values, witnesses = [], []
    for i in range(code.n):
        m_i = code.column(i)
        if _is_zero(m_i):
            values.append(math.inf)
            witnesses.append(None)
            continue
        c, alpha = zt.scaling_solution(Z.without(i), m_i)
        values.append(c)
        if c == math.inf:
            witnesses.append(None)
            continue
        x = list(-alpha)
        x.insert(i, c)
        witnesses.append(x)
    report = _report(code, values, witnesses, "lp")
    if refine and report.finite and report.h1 > 0:
        x = sparsest_witness(code, report.coordinate, report.h1)
        if x is not None:
            report = HeightReport(report.h1, report.gamma1, report.coordinate,
                                  nx.as_array(x, code.mode), "lp", report.per_coordinate)
    return report


def code_h1_primal(code: CodeSpec) -> HeightReport:
    """Codeword-space oracle: ``max_i max { x_i : H x = 0, |x_j| <= 1 (j != i) }``.

    Only ``+x_i`` is maximized. The code is symmetric (``x`` in the code implies
    ``-x`` is), so the ``-x_i`` problem has the same optimum.
    """
    mode = code.mode
    n, r = code.n, code.redundancy
    values, witnesses = [], []
    for i in range(n):
        objective = [0] * n
        objective[i] = 1
        lower = [-1] * n
        upper = [1] * n
        lower[i], upper[i] = -math.inf, math.inf
        problem = lp.LpProblem.build(objective, code.parity_check, [0] * r, lower, upper, mode=mode)
        sol = lp.solve(problem)
        if sol.status == lp.UNBOUNDED:
            values.append(math.inf)
            witnesses.append(None)
        elif sol.status == lp.OPTIMAL:
            values.append(sol.objective_value)
            witnesses.append(list(sol.point))
        else:
            raise lp.LpError(f"primal height LP for coordinate {i} is {sol.status}")
    return _report(code, values, witnesses, "primal")


def _planar_witness(Z: zt.Zonotope, d, c):
    """Coefficients ``a`` with ``c d = G a``, ``|a| <= 1``, read off the binding edge."""
    G = Z.generators
    mode = Z.mode
    target = (c * d[0], c * d[1])
    best_u, best_val = None, None
    for g in zt._distinct_directions(Z):
        for u in ((-g[1], g[0]), (g[1], -g[0]), g, (-g[0], -g[1])):
            ud = u[0] * d[0] + u[1] * d[1]
            if ud > 0:
                val = zt.support(Z, u) / ud
                if best_val is None or val < best_val:
                    best_u, best_val = u, val
    u = best_u
    alpha = [nx.zero(mode)] * Z.count
    rest = [target[0], target[1]]
    parallel = []
    for j in range(Z.count):
        g = G[:, j]
        s = u[0] * g[0] + u[1] * g[1]
        if mode == nx.FLOAT and abs(s) <= nx.PIVOT_TOL * (1 + abs(g[0]) + abs(g[1])):
            s = 0
        if s == 0:
            if g[0] != 0 or g[1] != 0:
                parallel.append(j)
            continue
        alpha[j] = nx.one(mode) if s > 0 else -nx.one(mode)
        rest[0] -= alpha[j] * g[0]
        rest[1] -= alpha[j] * g[1]
    if parallel:
        e = (-u[1], u[0])
        ee = e[0] * e[0] + e[1] * e[1]
        t = (rest[0] * e[0] + rest[1] * e[1]) / ee
        lams = [(G[0, j] * e[0] + G[1, j] * e[1]) / ee for j in parallel]
        total = sum(abs(v) for v in lams)
        for j, lam in zip(parallel, lams):
            share = t / total
            alpha[j] = share if lam > 0 else -share
    return alpha


def _h1_exact2d(code: CodeSpec) -> HeightReport:
    if code.redundancy != 2:
        raise ValueError(f"exact2d needs n-k = 2, got {code.redundancy}")
    Z = zt.Zonotope(code.parity_check)
    values, witnesses = [], []
    for i in range(code.n):
        m_i = code.column(i)
        if _is_zero(m_i):
            values.append(math.inf)
            witnesses.append(None)
            continue
        Zi = Z.without(i)
        c = zt.max_scaling_2d(Zi, m_i)
        values.append(c)
        alpha = _planar_witness(Zi, m_i, c) if c != 0 else [nx.zero(code.mode)] * Zi.count
        x = [-a for a in alpha]
        x.insert(i, c)
        witnesses.append(x)
    return _report(code, values, witnesses, "exact2d")


def code_h1(code: CodeSpec, method: str = "auto", refine_witness: bool = True) -> HeightReport:
    """1-height, threshold and witness codeword of ``code``.

    ``auto`` uses the zonotope LP. With ``refine_witness`` the LP witness is
    replaced by the sparsest codeword of the same height (one extra LP).
    Raises ValueError for unknown methods or ``exact2d`` on codes whose
    redundancy is not 2.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method in ("auto", "lp"):
        return _h1_zonotope_lp(code, refine_witness)
    if method == "primal":
        return code_h1_primal(code)
    return _h1_exact2d(code)


def applicable_methods(code: CodeSpec) -> list:
    methods = ["lp", "primal"]
    if code.redundancy == 2:
        methods.append("exact2d")
    return methods
