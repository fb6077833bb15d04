import math

import numpy as np
import pytest

from analog_ecc import lp
from analog_ecc import numerics as nx

MODES = [nx.FLOAT, nx.RATIONAL]


@pytest.mark.parametrize("mode", MODES)
def test_box_maximum(mode):
    sol = lp.solve(lp.LpProblem.build([1], [], [], [0], [1], mode=mode))
    assert sol.status == lp.OPTIMAL and sol.objective_value == 1


@pytest.mark.parametrize("mode", MODES)
def test_infeasible_equality(mode):
    sol = lp.solve(lp.LpProblem.build([1], [[1]], [2], [0], [1], mode=mode))
    assert sol.status == lp.INFEASIBLE


@pytest.mark.parametrize("mode", MODES)
def test_zonotope_extent(mode):
    # maximize c with c (1,0) = a1 (1,0) + a2 (1,0) + a3 (0,1): hand value 2
    A = [[1, -1, -1, 0], [0, 0, 0, -1]]
    p = lp.LpProblem.build([1, 0, 0, 0], A, [0, 0], [-math.inf, -1, -1, -1], [math.inf, 1, 1, 1], mode=mode)
    sol = lp.solve(p)
    assert sol.status == lp.OPTIMAL and sol.objective_value == 2


@pytest.mark.parametrize("mode", MODES)
def test_unbounded_free_variable(mode):
    p = lp.LpProblem.build([1, 0], [[0, 1]], [0], [-math.inf, -1], [math.inf, 1], mode=mode)
    assert lp.solve(p).status == lp.UNBOUNDED


@pytest.mark.parametrize("mode", MODES)
def test_feasible_examples(mode):
    assert lp.feasible(lp.LpProblem.build([0], [[1]], [0], [-1], [1], mode=mode))
    assert not lp.feasible(lp.LpProblem.build([0], [[1]], [3], [-1], [1], mode=mode))
    H = [[1, 2, 0, -1], [0, 1, 1, 3]]
    assert lp.feasible(lp.LpProblem.build([0] * 4, H, [0, 0], [-1] * 4, [1] * 4, mode=mode))


def test_malformed_rejected():
    with pytest.raises(ValueError):
        lp.LpProblem.build([1, 2], [[1, 2, 3]], [1])
    with pytest.raises(ValueError):
        lp.LpProblem.build([1], [[1]], [1, 2])
    with pytest.raises(ValueError):
        lp.LpProblem.build([1], [[1]], [1], [2], [1])


def _random_lp(rng):
    m = int(rng.integers(1, 7))
    n = int(rng.integers(m, 15))
    A = rng.integers(-4, 5, (m, n)).astype(float)
    x0 = rng.uniform(-2, 2, n)
    b = A @ x0 if rng.random() < 0.8 else rng.uniform(-5, 5, m)
    b = np.round(b, 3)
    lower, upper = [], []
    for _ in range(n):
        kind = rng.integers(4)
        lower.append(-math.inf if kind == 0 else float(rng.integers(-3, 1)))
        upper.append(math.inf if kind == 1 else float(rng.integers(1, 4)))
    c = rng.integers(-3, 4, n).astype(float)
    return c, A, b, lower, upper


def test_float_and_rational_agree_on_500_random_lps(rng):
    seen = set()
    for _ in range(500):
        c, A, b, lo, up = _random_lp(rng)
        f = lp.solve(lp.LpProblem.build(c, A, b, lo, up, mode=nx.FLOAT))
        q = lp.solve(lp.LpProblem.build(c, A, b, lo, up, mode=nx.RATIONAL))
        assert f.status == q.status
        seen.add(q.status)
        if q.optimal:
            assert float(q.objective_value) == pytest.approx(f.objective_value, abs=1e-7, rel=1e-7)
            assert np.max(np.abs(A @ f.point - b)) <= 1e-8
            assert all(l - 1e-9 <= v <= u + 1e-9 for v, l, u in zip(f.point, lo, up))
    assert seen == {lp.OPTIMAL, lp.INFEASIBLE, lp.UNBOUNDED}


@pytest.mark.parametrize("mode", MODES)
def test_degenerate_duplicated_generators_terminate(mode):
    # five copies of each generator: heavily degenerate membership / scaling LPs
    gens = [[1, 0], [0, 1], [1, 1], [1, -2]] * 5
    count = len(gens)
    G = np.array(gens, dtype=float).T
    A = np.hstack([np.array([[1.0], [0.0]]), -G])
    p = lp.LpProblem.build([1] + [0] * count, A, [0, 0], [0] + [-1] * count, [math.inf] + [1] * count,
                           mode=mode)
    sol = lp.solve(p)
    assert sol.optimal and sol.iterations <= 10 * (count + 1 + 2)
    # edge normal (1,0): support 5*(1+0+1+1) = 15; normal (2,1): 30/2 = 15; (1,-1): 25
    assert sol.objective_value == 15


def test_iteration_cap_is_an_error():
    A = [[1, -1, -1, 0], [0, 0, 0, -1]]
    p = lp.LpProblem.build([1, 0, 0, 0], A, [0, 0], [-math.inf, -1, -1, -1], [math.inf, 1, 1, 1])
    with pytest.raises(lp.IterationLimitError):
        lp.solve(p, max_iter=1)


def test_rational_optimum_is_certified():
    A = [[2, 1, 1, 0], [1, 3, 0, 1]]
    p = lp.LpProblem.build([3, 2, 0, 0], A, [8, 9], mode=nx.RATIONAL)
    sol = lp.solve(p)
    assert sol.optimal
    y = sol.duals
    # dual objective equals primal objective for this nonnegative-variable LP
    assert sum(yi * bi for yi, bi in zip(y, [8, 9])) == sol.objective_value
