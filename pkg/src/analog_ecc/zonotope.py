"""Centrally symmetric zonotopes ``{G a : |a_j| <= 1}``.

Generators are the columns of ``G``. Zero and repeated columns are legal.
General-dimension queries go through the LP solver; the planar case also has
an exact vertex/edge-normal backend that shares no code with the LP path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from . import lp
from . import numerics as nx

# float slack for strict separation: <u, p> - support(u) >= CERT_MARGIN * (1 + |<u, p>|)
CERT_MARGIN = 1e-9


@dataclass(frozen=True)
class Zonotope:
    generators: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.generators)
        if g.ndim != 2 or g.shape[0] < 1:
            raise ValueError(f"generators must be a (dim, count) matrix, got shape {g.shape}")
        nx.mode_of(g)

    @classmethod
    def from_columns(cls, matrix, mode: str | None = None) -> "Zonotope":
        m = np.asarray(matrix)
        if mode is not None:
            m = nx.as_array(m, mode)
        return cls(m)

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    @property
    def count(self) -> int:
        return self.generators.shape[1]

    @property
    def mode(self) -> str:
        return nx.mode_of(self.generators)

    def without(self, j: int) -> "Zonotope":
        """Zonotope of every generator except column ``j``."""
        keep = [i for i in range(self.count) if i != j]
        g = self.generators[:, keep]
        g.setflags(write=False)
        return Zonotope(g)

    def to_json(self) -> dict:
        return nx.matrix_to_json(self.generators)

    @classmethod
    def from_json(cls, obj, mode: str | None = None) -> "Zonotope":
        return cls(nx.matrix_from_json(obj, mode))


def _vector(z: Zonotope, v, name: str) -> np.ndarray:
    v = nx.as_array(v, z.mode)
    if v.shape != (z.dim,):
        raise ValueError(f"{name} has shape {v.shape}, zonotope dimension is {z.dim}")
    return v


def support(z: Zonotope, u):
    """``max_{p in z} <u, p> = sum_j |<u, g_j>|``."""
    u = _vector(z, u, "direction")
    return sum((abs(v) for v in u @ z.generators), nx.zero(z.mode)) if z.count else nx.zero(z.mode)


def _membership_problem(z: Zonotope, p, scale) -> lp.LpProblem:
    count = z.count
    G = z.generators * scale
    return lp.LpProblem.build(
        [0] * count, G, p,
        lower=[-1] * count, upper=[1] * count, mode=z.mode,
    )


def contains(z: Zonotope, p, scale=1) -> bool:
    """Whether ``p`` lies in ``scale * z``, decided by LP feasibility."""
    p = _vector(z, p, "point")
    scale = nx.scalar(scale, z.mode)
    if scale <= 0:
        raise ValueError("scale must be positive")
    if z.count == 0:
        return all(v == 0 for v in p)
    return lp.feasible(_membership_problem(z, p, scale))


def decompose(z: Zonotope, p, scale=1):
    """Coefficients ``a`` with ``p = scale * G a`` and ``|a| <= 1``, or None."""
    p = _vector(z, p, "point")
    scale = nx.scalar(scale, z.mode)
    if scale <= 0:
        raise ValueError("scale must be positive")
    if z.count == 0:
        return np.array([], dtype=p.dtype) if all(v == 0 for v in p) else None
    sol = lp.solve(_membership_problem(z, p, scale))
    return sol.point if sol.optimal else None


def scaling_solution(z: Zonotope, d):
    """Solve ``max c  s.t.  c d = G a, c >= 0, |a| <= 1``.

    Returns ``(c, a)``; ``c`` is ``math.inf`` (and ``a`` is None) when unbounded.
    """
    d = _vector(z, d, "direction")
    mode = z.mode
    count = z.count
    A = nx.zeros((z.dim, 1 + count), mode)
    A[:, 0] = d
    if count:
        A[:, 1:] = -z.generators
    problem = lp.LpProblem.build(
        [1] + [0] * count, A, [0] * z.dim,
        lower=[0] + [-1] * count, upper=[math.inf] + [1] * count, mode=mode,
    )
    sol = lp.solve(problem)
    if sol.status == lp.UNBOUNDED:
        return math.inf, None
    if sol.status != lp.OPTIMAL:
        raise lp.LpError(f"scaling LP unexpectedly {sol.status}")
    return sol.point[0], sol.point[1:]


def max_scaling(z: Zonotope, d):
    """``sup {c >= 0 : c d in z}``; ``math.inf`` when unbounded (e.g. ``d = 0``)."""
    return scaling_solution(z, d)[0]


def separation_certificate(z: Zonotope, p):
    """Direction ``u`` with ``<u, p> > support(z, u)``, or None if ``p`` is in ``z``.

    The direction comes from the phase-1 duals of the membership LP and is
    scaled to unit max-norm.
    """
    p = _vector(z, p, "point")
    mode = z.mode
    if z.count == 0:
        if all(v == 0 for v in p):
            return None
        u = np.array(p, copy=True)
    else:
        sol = lp.solve(_membership_problem(z, p, nx.one(mode)))
        if sol.status != lp.INFEASIBLE:
            return None
        u = -np.asarray(sol.farkas)
    big = max(abs(v) for v in u)
    if big == 0:
        return None
    u = nx.as_array([v / big for v in u], mode)
    lhs = sum((a * b for a, b in zip(u, p)), nx.zero(mode))
    gap = lhs - support(z, u)
    if mode == nx.RATIONAL:
        ok = gap > 0
    else:
        ok = gap >= CERT_MARGIN * (1 + abs(lhs))
    return u if ok else None


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _upper_half(g):
    """Representative of ``+-g`` with angle in ``[0, pi)``."""
    if g[1] < 0 or (g[1] == 0 and g[0] < 0):
        return (-g[0], -g[1])
    return (g[0], g[1])


def _distinct_directions(z: Zonotope):
    """Nonzero generators folded into ``[0, pi)``, collinear ones summed, sorted by angle."""
    gens = [_upper_half(z.generators[:, j]) for j in range(z.count)]
    gens = [g for g in gens if g[0] != 0 or g[1] != 0]
    gens.sort(key=cmp_to_key(lambda a, b: -1 if _cross(a, b) > 0 else (1 if _cross(a, b) < 0 else 0)))
    merged = []
    for g in gens:
        if merged and _cross(merged[-1], g) == 0:
            merged[-1] = (merged[-1][0] + g[0], merged[-1][1] + g[1])
        else:
            merged.append(g)
    return merged


def _require_planar(z: Zonotope):
    if z.dim != 2:
        raise ValueError(f"planar backend needs dim 2, got {z.dim}")


def vertices_2d(z: Zonotope) -> list:
    """Zonogon vertices in counterclockwise order, starting from ``-sum(g)``."""
    _require_planar(z)
    dirs = _distinct_directions(z)
    mode = z.mode
    zero = nx.zero(mode)
    start = (-sum((g[0] for g in dirs), zero), -sum((g[1] for g in dirs), zero))
    if not dirs:
        return [nx.as_array([zero, zero], mode)]
    verts = [start]
    for sgn in (2, -2):
        for g in dirs:
            x, y = verts[-1]
            verts.append((x + sgn * g[0], y + sgn * g[1]))
    verts.pop()
    return [nx.as_array(v, mode) for v in verts]


def polygon_area(vertices) -> object:
    """Shoelace area of a simple polygon given in order."""
    total = 0
    k = len(vertices)
    for i in range(k):
        total += _cross(vertices[i], vertices[(i + 1) % k])
    return abs(total) / 2


def max_scaling_2d(z: Zonotope, d):
    """Exact planar ``max_scaling`` via edge normals.

    Every ``u`` with ``<u, d> > 0`` bounds the scaling by ``support(u) / <u, d>``;
    the minimum over edge normals (perpendiculars of the generators) is attained.
    Generator directions are added as candidates so that degenerate, segment-shaped
    zonogons along ``d`` are measured by their endpoints.
    """
    _require_planar(z)
    d = _vector(z, d, "direction")
    if d[0] == 0 and d[1] == 0:
        raise ValueError("direction must be nonzero")
    dirs = _distinct_directions(z)
    if not dirs:
        return nx.zero(z.mode)
    best = math.inf
    for g in dirs:
        for u in ((-g[1], g[0]), (g[1], -g[0]), g, (-g[0], -g[1])):
            ud = u[0] * d[0] + u[1] * d[1]
            if ud > 0:
                best = min(best, support(z, u) / ud)
    return best
