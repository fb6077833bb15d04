import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from analog_ecc import constructions as cons
from analog_ecc import numerics as nx
from analog_ecc import zonotope as zt

AXIS = [[1, 1, 0], [0, 0, 1]]  # generators (1,0), (1,0), (0,1)


def Z(cols, mode=nx.RATIONAL):
    return zt.Zonotope(nx.as_array(cols, mode))


def test_support_examples():
    assert zt.support(Z([[1, 0], [0, 1]]), [1, 0]) == 1
    assert zt.support(Z(AXIS), [1, 1]) == 3
    assert zt.support(Z(AXIS), [0, 0]) == 0
    with pytest.raises(ValueError):
        zt.support(Z(AXIS), [1, 0, 0])


@pytest.mark.parametrize("mode", [nx.FLOAT, nx.RATIONAL])
def test_contains_examples(mode):
    assert zt.contains(Z(AXIS, mode), [0, 0])
    assert not zt.contains(Z(AXIS, mode), [3, 0])
    assert zt.contains(Z(AXIS, mode), [3, 0], 2)
    with pytest.raises(ValueError):
        zt.contains(Z(AXIS, mode), [0, 0], 0)


@pytest.mark.parametrize("mode", [nx.FLOAT, nx.RATIONAL])
def test_max_scaling_examples(mode):
    assert zt.max_scaling(Z(AXIS, mode), [1, 0]) == 2
    assert zt.max_scaling(Z(AXIS, mode), [0, 0]) == math.inf
    H = cons.problem_b_code(4, mode).parity_check
    assert zt.max_scaling(zt.Zonotope(H).without(0), H[:, 0]) == 1


def test_max_scaling_all_zero_generators():
    z = Z([[0, 0], [0, 0]])
    assert zt.max_scaling(z, [1, 0]) == 0
    assert zt.max_scaling(z, [0, 0]) == math.inf
    assert zt.max_scaling_2d(z, [1, 0]) == 0


def test_separation_certificate_examples():
    u = zt.separation_certificate(Z([[1, 0], [0, 1]]), [3, 0])
    assert u is not None and u[0] * 3 > zt.support(Z([[1, 0], [0, 1]]), u)
    assert max(abs(v) for v in u) == 1
    assert zt.separation_certificate(Z([[1, 0], [0, 1]]), [0, 0]) is None

    H = cons.problem_b_code(6, nx.FLOAT).parity_check
    Z0 = zt.Zonotope(H).without(0)
    p = (2 + 0.01) * H[:, 0]
    u = zt.separation_certificate(Z0, p)
    assert u is not None
    assert float(u @ p) > zt.support(Z0, u)
    assert zt.separation_certificate(Z0, (2 - 0.01) * H[:, 0]) is None


def test_vertices_2d_examples():
    sq = zt.vertices_2d(Z([[1, 0], [0, 1]]))
    assert [tuple(v) for v in sq] == [(-1, -1), (1, -1), (1, 1), (-1, 1)]
    seg = zt.vertices_2d(Z([[1, 1], [0, 0]]))
    assert sorted(tuple(v) for v in seg) == [(-2, 0), (2, 0)]
    hexagon = zt.vertices_2d(Z([[1, 0, 1], [0, 1, 1]]))
    assert len(hexagon) == 6
    with pytest.raises(ValueError):
        zt.vertices_2d(Z([[1], [0], [0]]))


def _pairwise_area(gens):
    # Minkowski sum of segments [-g, g]: area = sum_{i<j} |det(2 g_i, 2 g_j)|
    total = 0
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            a, b = gens[i], gens[j]
            total += abs(4 * (a[0] * b[1] - a[1] * b[0]))
    return total


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=8))
def test_zonogon_area_and_orientation(gens):
    z = Z(np.array(gens, dtype=object).T.tolist())
    verts = zt.vertices_2d(z)
    assert zt.polygon_area(verts) == _pairwise_area(gens)
    if len(verts) >= 3:
        signed = sum(verts[i][0] * verts[(i + 1) % len(verts)][1] - verts[i][1] * verts[(i + 1) % len(verts)][0]
                     for i in range(len(verts)))
        assert signed > 0  # counterclockwise
    for v in verts:
        assert all(zt.support(z, u) >= u[0] * v[0] + u[1] * v[1] for u in ([1, 0], [0, 1], [1, -3]))


def test_max_scaling_2d_examples():
    assert zt.max_scaling_2d(Z(AXIS), [1, 0]) == 2
    H = cons.problem_b_code(8).parity_check
    assert zt.max_scaling_2d(zt.Zonotope(H).without(0), H[:, 0]) == 3
    assert zt.max_scaling_2d(Z([[0], [1]]), [1, 0]) == 0
    with pytest.raises(ValueError):
        zt.max_scaling_2d(Z(AXIS), [0, 0])


def test_collinear_segment_along_direction():
    # segment-shaped zonogon along d: measured by its endpoints, not +inf
    assert zt.max_scaling_2d(Z([[1, 1], [0, 0]]), [1, 0]) == 2
    assert zt.max_scaling(Z([[1, 1], [0, 0]]), [1, 0]) == 2


def test_backend_agreement_300_random(rng):
    for _ in range(300):
        count = int(rng.integers(1, 13))
        gens = rng.integers(-5, 6, (2, count))
        d = rng.integers(-5, 6, 2)
        if not d.any():
            d[0] = 1
        zq = Z(gens.tolist())
        exact = zt.max_scaling_2d(zq, d.tolist())
        assert zt.max_scaling(zq, d.tolist()) == exact
        zf = Z(gens.tolist(), nx.FLOAT)
        assert zt.max_scaling(zf, d.astype(float)) == pytest.approx(float(exact), abs=1e-8)
        assert zt.max_scaling_2d(zf, d.astype(float)) == pytest.approx(float(exact), abs=1e-8)


vec3 = st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))


@given(st.lists(vec3, min_size=1, max_size=6), vec3, vec3)
def test_support_subadditive(gens, u, v):
    z = Z(np.array(gens, dtype=object).T.tolist())
    uv = [a + b for a, b in zip(u, v)]
    assert zt.support(z, uv) <= zt.support(z, u) + zt.support(z, v)


@given(st.lists(vec3, min_size=1, max_size=6), vec3)
def test_contains_symmetric(gens, p):
    z = Z(np.array(gens, dtype=object).T.tolist())
    neg = [-a for a in p]
    assert zt.contains(z, list(p)) == zt.contains(z, neg)


@given(st.lists(vec3, min_size=1, max_size=5), vec3, vec3)
def test_appending_generator_is_monotone(gens, extra, d):
    z = Z(np.array(gens, dtype=object).T.tolist())
    z2 = Z(np.array(gens + [extra], dtype=object).T.tolist())
    assert zt.max_scaling(z2, list(d)) >= zt.max_scaling(z, list(d))


@given(st.lists(vec3, min_size=1, max_size=6), vec3)
def test_certificates_are_sound(gens, p):
    z = Z(np.array(gens, dtype=object).T.tolist())
    u = zt.separation_certificate(z, list(p))
    if u is None:
        assert zt.contains(z, list(p))
    else:
        # re-evaluate independently of the solver
        value = sum(Fraction(a) * b for a, b in zip(u, p))
        support = sum(abs(sum(Fraction(a) * g for a, g in zip(u, col))) for col in gens)
        assert value > support
        assert not zt.contains(z, list(p))


def test_json_round_trip():
    z = Z(AXIS)
    assert (zt.Zonotope.from_json(z.to_json()).generators == z.generators).all()
