"""Growth series: finite polynomials, the spherical-subset recursion,
Taylor coefficients against ball counts, and Euler characteristic values."""

from fractions import Fraction

import pytest

from coxl2.poly import MultiPoly, PoleAtQ, RationalFn
from coxl2.system import INF, CoxeterMatrix, build_system
from coxl2.words import enumerate_ball
from coxl2.growth import (
    NotFinite,
    SingularAtZero,
    WeightVector,
    equal_parameter,
    euler_characteristic,
    finite_growth_poly,
    growth_series,
    spherical_subsets,
    taylor_coeffs,
)


def _make(names, rows):
    return build_system(CoxeterMatrix.from_rows(tuple(names), rows))


def _dihedral(m):
    return _make(("s", "t"), [[1, m], [m, 1]])


def _triangle(p, q, r):
    return _make(("a", "b", "c"), [[1, p, r], [p, 1, q], [r, q, 1]])


def _complete(n, m):
    rows = [[m] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    return _make("abcdefgh"[:n], rows)


def _cube_skeleton():
    # vertices of the 3-cube, label 2 across each edge, inf otherwise
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


A1 = _make(("s",), [[1]])
I23 = _dihedral(3)
I24 = _dihedral(4)
I25 = _dihedral(5)
DINF = _dihedral(INF)
A3 = _make(("s", "t", "u"), [[1, 3, 2], [3, 1, 3], [2, 3, 1]])
B3 = _make(("s", "t", "u"), [[1, 4, 2], [4, 1, 3], [2, 3, 1]])
T333 = _triangle(3, 3, 3)
T244 = _triangle(4, 4, 2)
K43 = _complete(4, 3)


def _uni(f):
    """Read a one-variable MultiPoly as a coefficient dict degree -> int."""
    return {e[0]: c for e, c in f.terms}


class TestWeightVector:
    def test_equal(self):
        w = WeightVector.equal(T333, Fraction(1, 2))
        assert w.values == (Fraction(1, 2),)

    def test_from_map_by_generator(self):
        w = WeightVector.from_map(I24, {"s": 2, "t": Fraction(1, 3)})
        assert w.value_for(I24, "s") == 2
        assert w.value_for(I24, "t") == Fraction(1, 3)

    def test_from_map_conflict(self):
        # s and t are conjugate in I2(3), so their weights must agree
        with pytest.raises(ValueError):
            WeightVector.from_map(I23, {"s": 1, "t": 2})

    def test_from_map_missing(self):
        with pytest.raises(ValueError):
            WeightVector.from_map(I24, {"s": 1})

    def test_positivity(self):
        with pytest.raises(ValueError):
            WeightVector((Fraction(0),))
        with pytest.raises(ValueError):
            WeightVector((Fraction(-1, 2), Fraction(1)))

    def test_inverse_and_order(self):
        w = WeightVector((Fraction(2), Fraction(1, 3)))
        assert w.inverse().values == (Fraction(1, 2), Fraction(3))
        assert not w.le_one and not w.ge_one
        assert WeightVector((Fraction(1), Fraction(1))).is_one


class TestFinitePoly:
    def test_a1(self):
        assert _uni(finite_growth_poly(A1)) == {0: 1, 1: 1}

    def test_i23_single_class(self):
        f = finite_growth_poly(I23)
        assert f.nvars == 1
        assert _uni(f) == {0: 1, 1: 2, 2: 2, 3: 1}

    def test_i24_two_classes(self):
        f = finite_growth_poly(I24)
        assert f.nvars == 2
        got = {e: c for e, c in f.terms}
        assert got == {
            (0, 0): 1,
            (1, 0): 1,
            (0, 1): 1,
            (1, 1): 2,
            (2, 1): 1,
            (1, 2): 1,
            (2, 2): 1,
        }

    def test_a3_total(self):
        f = finite_growth_poly(A3)
        assert sum(c for _, c in f.terms) == 24
        assert f.max_exponents() == (6,)

    def test_b3_at_one(self):
        f = finite_growth_poly(B3)
        assert sum(c for _, c in f.terms) == 48

    def test_product_over_components(self):
        # A1 x A1 with distinct classes
        sys2 = _make(("s", "t"), [[1, 2], [2, 1]])
        f = finite_growth_poly(sys2)
        assert {e: c for e, c in f.terms} == {
            (0, 0): 1,
            (1, 0): 1,
            (0, 1): 1,
            (1, 1): 1,
        }

    def test_not_finite(self):
        with pytest.raises(NotFinite):
            finite_growth_poly(DINF)
        with pytest.raises(NotFinite):
            finite_growth_poly(T333)


class TestSphericalSubsets:
    def test_dihedral_finite(self):
        assert list(spherical_subsets(I25)) == [(), ("s",), ("t",), ("s", "t")]

    def test_dinf_excludes_whole(self):
        assert list(spherical_subsets(DINF)) == [(), ("s",), ("t",)]

    def test_triangle(self):
        subs = spherical_subsets(T333)
        assert ("a", "b", "c") not in subs
        assert len(subs) == 7  # empty, 3 singles, 3 edges

    def test_counts_k43(self):
        # complete graph on 4 vertices, label 3: no spherical triple
        subs = spherical_subsets(K43)
        assert len(subs) == 1 + 4 + 6


class TestGrowthSeries:
    def test_finite_agrees_with_enumeration(self):
        for sys in (I23, I24, A3, B3):
            assert growth_series(sys) == RationalFn.from_poly(
                finite_growth_poly(sys)
            )

    def test_dinf_multivariate(self):
        w = growth_series(DINF)
        assert {e: c for e, c in w.num.terms} == {
            (0, 0): 1,
            (1, 0): 1,
            (0, 1): 1,
            (1, 1): 1,
        }
        assert {e: c for e, c in w.den.terms} == {(0, 0): 1, (1, 1): -1}

    def test_dinf_equal_parameter(self):
        f = equal_parameter(growth_series(DINF))
        assert _uni(f.num) == {0: 1, 1: 1}
        assert _uni(f.den) == {0: 1, 1: -1}

    def test_cube_skeleton_closed_form(self):
        f = equal_parameter(growth_series(_cube_skeleton()))
        q = MultiPoly.variable(1, 0)
        one = MultiPoly.const(1, 1)
        num = (one + q) * (one + q)
        den = (one - q) * (one - 5 * q)
        assert f == RationalFn.make(num, den)

    def test_k43_closed_form(self):
        # worked by hand from the alternating sum over spherical subsets:
        # 1/W = 1 - 4q/(1+q) + 6q^3/(1+2q+2q^2+q^3), and the common factor
        # (1+q) cancels, leaving (1+2q+2q^2+q^3)/(1-2q-2q^2+3q^3)
        f = equal_parameter(growth_series(K43))
        q = MultiPoly.variable(1, 0)
        one = MultiPoly.const(1, 1)
        num = one + 2 * q + 2 * q * q + q * q * q
        den = one - 2 * q - 2 * q * q + 3 * q * q * q
        assert f == RationalFn.make(num, den)

    def test_cached(self):
        assert growth_series(T333) is growth_series(T333)


class TestTaylor:
    def test_matches_ball_counts(self):
        for sys, L in ((DINF, 10), (T333, 8), (T244, 8), (I25, 10), (K43, 7)):
            coeffs = taylor_coeffs(growth_series(sys), L)
            ball = enumerate_ball(sys, L)
            assert coeffs == list(ball.counts)

    def test_finite_padding(self):
        # past the top degree the series is the polynomial itself
        coeffs = taylor_coeffs(growth_series(I23), 6)
        assert coeffs == [1, 2, 2, 1, 0, 0, 0]

    def test_nonnegative(self):
        for sys in (DINF, T333, K43):
            assert all(c >= 0 for c in taylor_coeffs(growth_series(sys), 9))

    def test_singular_at_zero(self):
        one = MultiPoly.const(1, 1)
        q = MultiPoly.variable(1, 0)
        with pytest.raises(SingularAtZero):
            taylor_coeffs(RationalFn.make(one, q), 3)


class TestEuler:
    def test_i23_at_one(self):
        assert euler_characteristic(I23, WeightVector.equal(I23, 1)) == (
            Fraction(1, 6)
        )

    def test_triangle_values(self):
        vals = {
            Fraction(1, 2): Fraction(1, 7),
            Fraction(1): Fraction(0),
            Fraction(3, 2): Fraction(1, 19),
        }
        for q, expect in vals.items():
            w = WeightVector.equal(T333, q)
            assert euler_characteristic(T333, w) == expect

    def test_k43_vanishes_at_one(self):
        w = WeightVector.equal(K43, 1)
        assert euler_characteristic(K43, w) == 0

    def test_dinf_at_one(self):
        w = WeightVector.equal(DINF, 1)
        assert euler_characteristic(DINF, w) == 0

    def test_pole(self):
        # equal-parameter growth of A1 is 1 + q, so 1/W has a pole at -1;
        # weights are positive so hit a pole of W instead: none exist for
        # finite groups, use D-infinity where W blows up at q_s q_t = 1
        with pytest.raises(PoleAtQ):
            growth_series(DINF).eval((Fraction(1), Fraction(1)))

    def test_arity_check(self):
        with pytest.raises(ValueError):
            euler_characteristic(T333, WeightVector((Fraction(1), Fraction(1))))
