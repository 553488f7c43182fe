"""Region-of-convergence membership and the Sturm-chain root counting."""

from fractions import Fraction

import pytest

from coxl2.growth import WeightVector
from coxl2.region import (
    IN,
    OUT,
    RegionResult,
    UnsupportedWeightShape,
    _primitive_power,
    count_roots_open,
    region_membership,
    sturm_chain,
)
from coxl2.system import INF, CoxeterMatrix, build_system

F = Fraction


def _make(names, rows):
    return build_system(CoxeterMatrix.from_rows(tuple(names), rows))


I24 = _make(("s", "t"), [[1, 4], [4, 1]])
A3 = _make(("s", "t", "u"), [[1, 3, 2], [3, 1, 3], [2, 3, 1]])
DINF = _make(("s", "t"), [[1, INF], [INF, 1]])
T333 = _make(("a", "b", "c"), [[1, 3, 3], [3, 1, 3], [3, 3, 1]])
K43 = _make(
    "abcd",
    [[1, 3, 3, 3], [3, 1, 3, 3], [3, 3, 1, 3], [3, 3, 3, 1]],
)


def _cube_skeleton():
    verts = [(i, j, k) for i in range(2) for j in range(2) for k in range(2)]
    names = tuple("v%d%d%d" % v for v in verts)
    rows = [[0] * 8 for _ in range(8)]
    for i, u in enumerate(verts):
        for j, w in enumerate(verts):
            if i == j:
                rows[i][j] = 1
            elif sum(a != b for a, b in zip(u, w)) == 1:
                rows[i][j] = 2
            else:
                rows[i][j] = INF
    return _make(names, rows)


CUBE = _cube_skeleton()


class TestSturm:
    def test_chain_counts_roots(self):
        # (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        p = [F(-6), F(11), F(-6), F(1)]
        assert count_roots_open(p, F(0), F(4)) == 3
        assert count_roots_open(p, F(0), F(3, 2)) == 1
        assert count_roots_open(p, F(5, 2), F(4)) == 1

    def test_no_real_roots(self):
        p = [F(1), F(0), F(1)]  # x^2 + 1
        assert count_roots_open(p, F(-10), F(10)) == 0

    def test_repeated_roots_counted_once(self):
        # (x-1)^2 (x+2)
        p = [F(2), F(-3), F(0), F(1)]
        assert count_roots_open(p, F(0), F(5)) == 1
        assert count_roots_open(p, F(-3), F(5)) == 2

    def test_chain_ends_constant(self):
        chain = sturm_chain([F(-2), F(0), F(1)])
        assert len(chain[-1]) == 1


class TestPrimitivePower:
    def test_examples(self):
        assert _primitive_power(F(4, 9)) == (F(2, 3), 2)
        assert _primitive_power(F(8, 27)) == (F(2, 3), 3)
        assert _primitive_power(F(16, 81)) == (F(2, 3), 4)
        assert _primitive_power(F(1, 2)) == (F(1, 2), 1)
        assert _primitive_power(F(6, 35)) == (F(6, 35), 1)
        assert _primitive_power(F(4)) == (F(2), 2)


class TestMembership:
    def test_finite_any_weight(self):
        assert region_membership(A3, WeightVector.equal(A3, F(100))).membership == IN
        # finite groups accept any shape, even one that is not a ray
        w = WeightVector.from_map(I24, {"s": F(5), "t": F(7)})
        assert region_membership(I24, w).membership == IN

    def test_infinite_at_one(self):
        for sys in (DINF, T333, K43, CUBE):
            w = WeightVector.equal(sys, F(1))
            assert region_membership(sys, w).membership == OUT

    def test_dinf(self):
        assert region_membership(DINF, WeightVector.equal(DINF, F(1, 2)))
        assert not region_membership(DINF, WeightVector.equal(DINF, F(2)))

    def test_dinf_ray(self):
        w = WeightVector.from_map(DINF, {"s": F(1, 4), "t": F(1, 2)})
        r = region_membership(DINF, w)
        assert r.membership == IN

    def test_triangle_affine_radius_one(self):
        # polynomial growth: converges everywhere below 1
        for q in (F(1, 2), F(3, 4), F(99, 100)):
            assert region_membership(T333, WeightVector.equal(T333, q))
        assert not region_membership(T333, WeightVector.equal(T333, F(3, 2)))

    def test_k43_bracket(self):
        # reduced equal-parameter denominator is 1 - 2q - 2q^2 + 3q^3,
        # positive at 2/5 and negative at 1/2, so the radius lies between
        assert region_membership(K43, WeightVector.equal(K43, F(2, 5)))
        r = region_membership(K43, WeightVector.equal(K43, F(1, 2)))
        assert r.membership == OUT and not r.at_boundary

    def test_cube_inside_and_beyond(self):
        # equal-parameter growth (1+q)^2/((1-q)(1-5q)): radius 1/5
        assert region_membership(CUBE, WeightVector.equal(CUBE, F(1, 6)))
        r = region_membership(CUBE, WeightVector.equal(CUBE, F(1, 4)))
        assert r.membership == OUT and not r.at_boundary

    def test_cube_boundary_verified(self):
        w = WeightVector.equal(CUBE, F(1, 5))
        r = region_membership(CUBE, w, divergence_bound=100)
        assert r == RegionResult(OUT, at_boundary=True, note=None)

    def test_cube_boundary_convention(self):
        # partial sums grow like 9/5 per term, far below the default bound
        w = WeightVector.equal(CUBE, F(1, 5))
        r = region_membership(CUBE, w)
        assert r.membership == OUT
        assert r.at_boundary and r.note == "boundary-convention"

    def test_monotone_along_ray(self):
        qs = [F(1, 10), F(1, 5), F(1, 3), F(1, 2), F(2, 3), F(1), F(2)]
        flags = [
            region_membership(K43, WeightVector.equal(K43, q)).membership == IN
            for q in qs
        ]
        assert flags == sorted(flags, reverse=True)


class TestShapeErrors:
    def test_incommensurable(self):
        w = WeightVector.from_map(DINF, {"s": F(1, 2), "t": F(1, 3)})
        with pytest.raises(UnsupportedWeightShape):
            region_membership(DINF, w)

    def test_mixed_unit(self):
        w = WeightVector.from_map(DINF, {"s": F(1, 2), "t": F(1)})
        with pytest.raises(UnsupportedWeightShape):
            region_membership(DINF, w)

    def test_straddles_one(self):
        w = WeightVector.from_map(DINF, {"s": F(2), "t": F(1, 2)})
        with pytest.raises(UnsupportedWeightShape):
            region_membership(DINF, w)

    def test_arity(self):
        with pytest.raises(ValueError):
            region_membership(T333, WeightVector((F(1), F(1))))
