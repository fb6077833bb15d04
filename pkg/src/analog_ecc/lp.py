"""Dense bounded-variable primal simplex.

Problems have the form::

    maximize    c . x
    subject to  A x = b,   lower <= x <= upper

where bounds may be infinite (``-math.inf`` / ``math.inf``) so free variables
are handled natively. Pivoting follows Bland's rule, which guarantees
termination on the degenerate instances produced by zonotopes with repeated
generators. The same code runs in float and rational mode; in rational mode
every comparison is exact and optimal answers are certified by a
complementary-slackness check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import numerics as nx

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# float-mode tolerances; rational mode uses exact comparisons
FEAS_TOL = 1e-9
COST_TOL = 1e-9


class LpError(RuntimeError):
    """Solver failure that is not a property of the problem (cap breach, bad certificate)."""


class IterationLimitError(LpError):
    pass


def _bound_vector(values, n, default, mode):
    if values is None:
        return [default] * n
    out = []
    for v in values:
        if isinstance(v, float) and math.isinf(v):
            out.append(v)
        elif isinstance(v, str) and v.strip().lstrip("+-") in ("inf", "infinity"):
            out.append(-math.inf if v.strip().startswith("-") else math.inf)
        else:
            out.append(nx.scalar(v, mode))
    if len(out) != n:
        raise ValueError(f"bound vector has length {len(out)}, expected {n}")
    return out


@dataclass(frozen=True)
class LpProblem:
    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    lower: list
    upper: list

    @classmethod
    def build(cls, objective, eq_matrix, eq_rhs, lower=None, upper=None, mode=nx.FLOAT):
        """Normalize inputs into one numeric mode and validate shapes.

        Missing bounds default to ``x >= 0``.
        """
        c = nx.as_array(objective, mode)
        A = nx.as_array(eq_matrix, mode)
        b = nx.as_array(eq_rhs, mode)
        if c.ndim != 1:
            raise ValueError("objective must be a vector")
        n = c.shape[0]
        if A.size == 0:
            A = nx.as_array(np.zeros((0, n)), mode) if mode == nx.FLOAT else nx.zeros((0, n), mode)
        if A.ndim != 2 or A.shape[1] != n:
            raise ValueError(f"eq_matrix shape {A.shape} incompatible with {n} variables")
        if b.shape != (A.shape[0],):
            raise ValueError(f"eq_rhs shape {b.shape} incompatible with {A.shape[0]} rows")
        lo = _bound_vector(lower, n, nx.zero(mode), mode)
        up = _bound_vector(upper, n, math.inf, mode)
        for j, (l, u) in enumerate(zip(lo, up)):
            if l == math.inf or u == -math.inf:
                raise ValueError(f"variable {j} has an empty bound range")
            if l > u:
                raise ValueError(f"variable {j}: lower bound {l} exceeds upper bound {u}")
        return cls(c, A, b, lo, up)

    @property
    def mode(self) -> str:
        return nx.same_mode(self.objective, self.eq_matrix, self.eq_rhs) if self.eq_matrix.size else nx.mode_of(self.objective)

    @property
    def shape(self):
        return self.eq_matrix.shape


@dataclass(frozen=True)
class LpSolution:
    status: str
    point: np.ndarray | None = None
    objective_value: object = None
    duals: np.ndarray | None = None
    # for infeasible problems: y with y.b + sum_j max over the box of (-y.A_j x_j) < 0
    farkas: np.ndarray | None = None
    iterations: int = 0
    basis: tuple = field(default=(), repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Working state for one solve: tableau ``B^-1 [A | D]`` plus variable values."""

    def __init__(self, p: LpProblem, max_iter: int):
        self.mode = p.mode
        self.exact = self.mode == nx.RATIONAL
        A, b = p.eq_matrix, p.eq_rhs
        m, n = A.shape
        self.m, self.n = m, n
        self.lo = list(p.lower) + [nx.zero(self.mode)] * m
        self.up = list(p.upper) + [math.inf] * m
        x = []
        for l, u in zip(p.lower, p.upper):
            if l != -math.inf:
                x.append(l)
            elif u != math.inf:
                x.append(u)
            else:
                x.append(nx.zero(self.mode))
        residual = [b[i] - sum((A[i, j] * x[j] for j in range(n)), nx.zero(self.mode)) for i in range(m)]
        self.sign = [1 if r >= 0 else -1 for r in residual]
        T = nx.zeros((m, n + m), self.mode)
        T[:, :n] = A
        for i in range(m):
            T[i] = T[i] * self.sign[i]
            T[i, n + i] = nx.one(self.mode)
        self.T = T
        self.x = x + [abs(r) for r in residual]
        self.basis = [n + i for i in range(m)]
        self.iterations = 0
        self.max_iter = max_iter

    def _gt(self, a, b=0) -> bool:
        return a > b if self.exact else a > b + COST_TOL

    def _lt(self, a, b=0) -> bool:
        return a < b if self.exact else a < b - COST_TOL

    def duals(self, cost) -> list:
        """``y = c_B B^-1`` recovered from the artificial columns."""
        cB = [cost[j] for j in self.basis]
        y = []
        for i in range(self.m):
            col = self.T[:, self.n + i]
            y.append(self.sign[i] * sum((cb * t for cb, t in zip(cB, col)), nx.zero(self.mode)))
        return y

    def reduced_costs(self, cost) -> list:
        cB = [cost[j] for j in self.basis]
        total = len(cost)
        if self.m:
            proj = [sum((cB[i] * self.T[i, j] for i in range(self.m)), nx.zero(self.mode)) for j in range(total)]
        else:
            proj = [nx.zero(self.mode)] * total
        return [cost[j] - proj[j] for j in range(total)]

    def run(self, cost) -> str:
        """Iterate to optimality; returns OPTIMAL or UNBOUNDED."""
        inbasis = set(self.basis)
        while True:
            d = self.reduced_costs(cost)
            entering = None
            for j, dj in enumerate(d):
                if j in inbasis:
                    continue
                if self._gt(dj) and self.x[j] < self.up[j]:
                    entering, direction = j, 1
                    break
                if self._lt(dj) and self.x[j] > self.lo[j]:
                    entering, direction = j, -1
                    break
            if entering is None:
                return OPTIMAL
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise IterationLimitError(f"simplex exceeded {self.max_iter} iterations")

            j = entering
            step = math.inf
            leave_row = None
            if self.lo[j] != -math.inf and self.up[j] != math.inf:
                step = self.up[j] - self.lo[j]
            pivot_tol = 0 if self.exact else nx.PIVOT_TOL
            for i in range(self.m):
                alpha = direction * self.T[i, j]
                if abs(alpha) <= pivot_tol:
                    continue
                bv = self.basis[i]
                if alpha > 0:
                    if self.lo[bv] == -math.inf:
                        continue
                    room = self.x[bv] - self.lo[bv]
                    limit = (room if room > 0 else 0 * room) / alpha
                else:
                    if self.up[bv] == math.inf:
                        continue
                    room = self.up[bv] - self.x[bv]
                    limit = (room if room > 0 else 0 * room) / -alpha
                if limit < step or (limit == step and leave_row is not None and bv < self.basis[leave_row]):
                    step, leave_row = limit, i
            if step == math.inf:
                return UNBOUNDED

            delta = direction * step
            for i in range(self.m):
                if self.T[i, j] != 0:
                    self.x[self.basis[i]] -= delta * self.T[i, j]
            self.x[j] += delta
            if leave_row is None:
                # bound flip; basis unchanged
                self.x[j] = self.up[j] if direction > 0 else self.lo[j]
                continue
            leaving = self.basis[leave_row]
            alpha = direction * self.T[leave_row, j]
            self.x[leaving] = self.lo[leaving] if alpha > 0 else self.up[leaving]
            self._pivot(leave_row, j)
            inbasis.discard(leaving)
            inbasis.add(j)

    def _pivot(self, r: int, j: int):
        T = self.T
        T[r] = T[r] / T[r, j]
        for i in range(self.m):
            if i != r and T[i, j] != 0:
                T[i] = T[i] - T[i, j] * T[r]
        if not self.exact:
            T[:, j] = 0.0
            T[r, j] = 1.0
        self.basis[r] = j

    def refresh(self, A, b):
        """Recompute basic values as ``B^-1 (b - N x_N)`` to shed accumulated float error."""
        n = self.n
        rhs = [b[i] - sum((A[i, j] * self.x[j] for j in range(n) if j not in self.basis), 0.0)
               for i in range(self.m)]
        for r, bv in enumerate(self.basis):
            if bv >= n:
                continue
            self.x[bv] = sum(self.sign[i] * self.T[r, n + i] * rhs[i] for i in range(self.m))

    def retire_artificials(self):
        """Pin artificials to zero and pivot basic ones out where possible."""
        n = self.n
        for a in range(n, n + self.m):
            self.up[a] = nx.zero(self.mode)
            self.x[a] = nx.zero(self.mode)
        pivot_tol = 0 if self.exact else nx.PIVOT_TOL
        for r in range(self.m):
            if self.basis[r] < n:
                continue
            for j in range(n):
                if j not in self.basis and abs(self.T[r, j]) > pivot_tol:
                    self._pivot(r, j)
                    break
            # otherwise the row is redundant; the artificial stays basic at 0


def _phase_one(p: LpProblem, max_iter: int | None):
    m, n = p.shape
    cap = max_iter if max_iter is not None else 10 * (n + m)
    tab = _Tableau(p, cap)
    cost = [nx.zero(tab.mode)] * n + [-nx.one(tab.mode)] * m
    tab.run(cost)
    infeas = sum((tab.x[a] for a in range(n, n + m)), nx.zero(tab.mode))
    scale = 1 + max((abs(v) for v in p.eq_rhs), default=0)
    feasible = infeas == 0 if tab.exact else infeas <= FEAS_TOL * scale
    return tab, cost, feasible


def feasible(p: LpProblem, max_iter: int | None = None) -> bool:
    """Phase-1 feasibility of the equality-plus-box system."""
    return _phase_one(p, max_iter)[2]


def solve(p: LpProblem, max_iter: int | None = None) -> LpSolution:
    """Maximize ``p.objective`` over the feasible set.

    ``max_iter`` defaults to ``10 * (variables + constraints)``; exceeding it
    raises :class:`IterationLimitError`.
    """
    tab, cost1, ok = _phase_one(p, max_iter)
    if not ok:
        y = tab.duals(cost1)
        return LpSolution(INFEASIBLE, farkas=np.array(y, dtype=object if tab.exact else float),
                          iterations=tab.iterations)
    tab.retire_artificials()
    n, m = tab.n, tab.m
    cost = list(p.objective) + [nx.zero(tab.mode)] * m
    status = tab.run(cost)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, iterations=tab.iterations)
    dtype = object if tab.exact else float
    if not tab.exact:
        tab.refresh(p.eq_matrix, p.eq_rhs)
    point = np.array(tab.x[:n], dtype=dtype)
    value = sum((cj * xj for cj, xj in zip(p.objective, point)), nx.zero(tab.mode))
    y = tab.duals(cost)
    if tab.exact:
        _certify(p, point, y)
    return LpSolution(OPTIMAL, point=point, objective_value=value,
                      duals=np.array(y, dtype=dtype), iterations=tab.iterations,
                      basis=tuple(tab.basis))


def _certify(p: LpProblem, x, y):
    """Exact primal feasibility plus complementary slackness of reduced costs."""
    A, b, c = p.eq_matrix, p.eq_rhs, p.objective
    m, n = A.shape
    for i in range(m):
        if sum((A[i, j] * x[j] for j in range(n)), Fraction(0)) != b[i]:
            raise LpError(f"certificate: equality row {i} violated")
    for j in range(n):
        if x[j] < p.lower[j] or x[j] > p.upper[j]:
            raise LpError(f"certificate: variable {j} outside its bounds")
        dj = c[j] - sum((y[i] * A[i, j] for i in range(m)), Fraction(0))
        if dj > 0 and x[j] != p.upper[j]:
            raise LpError(f"certificate: variable {j} could still increase")
        if dj < 0 and x[j] != p.lower[j]:
            raise LpError(f"certificate: variable {j} could still decrease")
