"""Growth series, weighted Euler characteristic, weight vectors.

The multiparameter growth series W(t) lives in one variable per generator
conjugacy class.  For finite groups it is the honest sum of monomials t_w
over the group; in general it is assembled from the alternating recursion
over spherical subsets

    1/W(t) = sum over spherical T of (-1)^|T| / W_T(t^{-1}),

where the t -> 1/t substitution is cleared exactly: if P is the growth
polynomial of a finite W_T and D the exponent vector of its longest
element, then 1/P(1/t) = t^D / rev(P) with rev(P) = sum c_e t^(D-e).
The componentwise maximum D is attained by the longest element alone,
by the subword property, so rev(P) again has constant term 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .classify import classify_component, is_spherical
from .poly import MultiPoly, RationalFn
from .system import CoxeterError, CoxeterSystem, irreducible_components, restrict
from .words import CapExceeded, engine_for, enumerate_ball


class NotFinite(CoxeterError):
    pass


class SingularAtZero(ArithmeticError):
    pass


@dataclass(frozen=True)
class WeightVector:
    """One positive rational per generator conjugacy class."""

    values: tuple  # Fractions, aligned with system.classes

    def __post_init__(self):
        for v in self.values:
            if v <= 0:
                raise ValueError(f"weights must be positive, got {v}")

    @classmethod
    def equal(cls, system: CoxeterSystem, q) -> "WeightVector":
        return cls((Fraction(q),) * len(system.classes))

    @classmethod
    def from_map(cls, system: CoxeterSystem, mapping) -> "WeightVector":
        """Build from {generator or class-representative name: value}; every
        class must be covered exactly once and consistently."""
        vals = [None] * len(system.classes)
        for name, v in mapping.items():
            k = system.class_index(name)
            v = Fraction(v)
            if vals[k] is not None and vals[k] != v:
                raise ValueError(f"conflicting weights within class of {name!r}")
            vals[k] = v
        if any(v is None for v in vals):
            raise ValueError("weight map does not cover every class")
        return cls(tuple(vals))

    def inverse(self):
        return WeightVector(tuple(1 / v for v in self.values))

    @property
    def le_one(self):
        return all(v <= 1 for v in self.values)

    @property
    def ge_one(self):
        return all(v >= 1 for v in self.values)

    @property
    def is_one(self):
        return all(v == 1 for v in self.values)

    def value_for(self, system, name):
        return self.values[system.class_index(name)]


def nvars(system: CoxeterSystem) -> int:
    return len(system.classes)


def word_exponents(system: CoxeterSystem, word) -> tuple:
    """Exponent vector of t_w: letters of a reduced word counted per class.
    Well-defined on elements: braid moves preserve per-class letter counts."""
    out = [0] * len(system.classes)
    for g in word:
        out[system.class_index(g)] += 1
    return tuple(out)


def _class_embedding(ambient: CoxeterSystem, sub: CoxeterSystem):
    """Map from sub's class slots to ambient's class slots."""
    return [ambient.class_index(cls[0]) for cls in sub.classes]


def _embed_poly(p: MultiPoly, embedding, ambient_nvars) -> MultiPoly:
    d = {}
    for e, c in p.terms:
        out = [0] * ambient_nvars
        for k, v in enumerate(e):
            out[embedding[k]] += v
        key = tuple(out)
        d[key] = d.get(key, 0) + c
    return MultiPoly.from_dict(ambient_nvars, d)


def _finite_order(name: str) -> int:
    """Group order from a catalog type name."""
    import math

    if name.startswith("I2("):
        return 2 * int(name[3:-1])
    if name == "G2":
        return 12
    family, rank = name[0], int(name[1:])
    if family == "A":
        return math.factorial(rank + 1)
    if family == "B":
        return 2 ** rank * math.factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    if family == "E":
        return {6: 51_840, 7: 2_903_040, 8: 696_729_600}[rank]
    if family == "F":
        return 1152
    if family == "H":
        return {3: 120, 4: 14_400}[rank]
    raise NotFinite(f"no order known for type {name}")


def _system_order(system: CoxeterSystem) -> int:
    total = 1
    for comp in irreducible_components(system):
        tag = classify_component(restrict(system, comp))
        if not tag.finite:
            raise NotFinite("order of an infinite system")
        total *= _finite_order(tag.name)
    return total


def _word_exponent_poly(sub: CoxeterSystem, words) -> MultiPoly:
    """Sum of t^(class counts of w) over reduced index words of ``sub``."""
    nv = nvars(sub)
    gens = sub.generators
    d = {}
    for w in words:
        e = [0] * nv
        for i in w:
            e[sub.class_index(gens[i])] += 1
        key = tuple(e)
        d[key] = d.get(key, 0) + 1
    return MultiPoly.from_dict(nv, d)


def _coset_rep_words(sub: CoxeterSystem, dropped: str):
    """Index words of every minimal-length W/W_T coset representative,
    T = generators minus ``dropped``."""
    eng = engine_for(sub)
    tset = {sub.index(g) for g in sub.generators if g != dropped}
    reps = {()}
    frontier = [()]
    # left multiplication: the generator action on W/W_T is transitive
    while frontier:
        new = []
        for w in frontier:
            for s in range(sub.rank):
                v = eng.coset_minimal(eng.canonical((s,) + w), tset)
                if v not in reps:
                    reps.add(v)
                    new.append(v)
        frontier = new
    return reps


def _irreducible_finite_poly(sub: CoxeterSystem, cap) -> MultiPoly:
    """Growth polynomial of one irreducible finite component.

    Small ranks enumerate directly.  From rank 3 up, factor through a maximal
    proper parabolic: lengths are additive across W = X * W_T with X the
    minimal coset representatives, so the polynomial is X(t) * W_T(t).  The
    representatives stay far shorter than the longest element, which keeps
    the rewriting engine away from its deep-word blowup."""
    if sub.rank <= 2:
        ball = enumerate_ball(sub, 2 * _system_order(sub), cap=cap,
                              engine="words", want_elements=True)
        eng = engine_for(sub)
        words = [tuple(sub.index(g) for g in nf.word)
                 for sphere in ball.elements for nf in sphere]
        return _word_exponent_poly(sub, words)
    best = None
    for g in sub.generators:
        rest = tuple(x for x in sub.generators if x != g)
        order = _system_order(restrict(sub, rest))
        if best is None or order > best[0]:
            best = (order, g, rest)
    _, dropped, rest = best
    x_poly = _word_exponent_poly(sub, _coset_rep_words(sub, dropped))
    sub_t = restrict(sub, rest)
    wt = _embed_poly(
        finite_growth_poly(sub_t, cap), _class_embedding(sub, sub_t), nvars(sub)
    )
    poly = x_poly * wt
    # lengths add across the coset factorization, so this is exact
    assert poly.eval((1,) * nvars(sub)) == _system_order(sub)
    return poly


_finite_poly_cache = {}


def finite_growth_poly(system: CoxeterSystem, cap=2_000_000) -> MultiPoly:
    """Sum of t_w over all elements of a finite system, in the system's own
    class variables.  Products split over irreducible components."""
    cached = _finite_poly_cache.get(system)
    if cached is not None:
        return cached
    tags = [
        classify_component(restrict(system, comp))
        for comp in irreducible_components(system)
    ]
    if not all(t.finite for t in tags):
        raise NotFinite("growth polynomial requires a finite system")
    n = nvars(system)
    result = MultiPoly.const(n, 1)
    for comp in irreducible_components(system):
        sub = restrict(system, comp)
        poly = _irreducible_finite_poly(sub, cap)
        result = result * _embed_poly(poly, _class_embedding(system, sub), n)
    _finite_poly_cache[system] = result
    return result


def spherical_subsets(system: CoxeterSystem):
    """All spherical subsets, the empty set included, as sorted name tuples.
    Built level by level: supersets of non-spherical sets are never visited."""
    gens = system.generators
    level = [()]
    out = [()]
    while level:
        nxt = set()
        for T in level:
            start = gens.index(T[-1]) + 1 if T else 0
            for g in gens[start:]:
                cand = T + (g,)
                if is_spherical(system, cand):
                    nxt.add(cand)
        level = sorted(nxt)
        out.extend(level)
    return out


def _reverse_poly(p: MultiPoly) -> MultiPoly:
    """rev(P) = t^D P(1/t) with D the componentwise maximum exponent."""
    D = p.max_exponents()
    d = {}
    for e, c in p.terms:
        d[tuple(a - b for a, b in zip(D, e))] = c
    return MultiPoly.from_dict(p.nvars, d)


_growth_cache = {}


def growth_series(system: CoxeterSystem) -> RationalFn:
    """W(t) as a canonical rational function via the spherical recursion."""
    cached = _growth_cache.get(system)
    if cached is not None:
        return cached
    n = nvars(system)
    # accumulate 1/W = sum (-1)^|T| t^{D_T} / rev(P_T), grouping repeated
    # denominators before any gcd work
    groups = {}
    for T in spherical_subsets(system):
        sub = restrict(system, T)
        p = _embed_poly(
            finite_growth_poly(sub), _class_embedding(system, sub), n
        )
        revp = _reverse_poly(p)
        mono = MultiPoly.monomial(n, p.max_exponents())
        sign = -1 if len(T) % 2 else 1
        key = revp
        if key in groups:
            groups[key] = groups[key] + sign * mono
        else:
            groups[key] = sign * mono
    total = RationalFn.from_fraction(n, 0)
    for den, num in groups.items():
        total = total + RationalFn.make(num, den)
    if total.is_zero:
        raise CoxeterError("growth recursion degenerated to zero")
    result = total.inverse()
    _growth_cache[system] = result
    return result


def ray_parameter(f: RationalFn, powers) -> RationalFn:
    """Substitute t_c -> t^powers[c], giving a one-variable function."""
    powers = tuple(int(k) for k in powers)
    if len(powers) != f.nvars or any(k < 1 for k in powers):
        raise ValueError("one positive integer power per class")

    def collapse(p):
        d = {}
        for e, c in p.terms:
            key = (sum(k * x for k, x in zip(powers, e)),)
            d[key] = d.get(key, 0) + c
        return MultiPoly.from_dict(1, d)

    return RationalFn.make(collapse(f.num), collapse(f.den))


def equal_parameter(f: RationalFn) -> RationalFn:
    """Substitute one variable for all classes (t_c -> t)."""
    if f.nvars == 0:
        return RationalFn.make(
            MultiPoly.from_dict(1, {(0,): 1}) * f.num.constant_term(),
            MultiPoly.from_dict(1, {(0,): 1}) * f.den.constant_term(),
        )
    return ray_parameter(f, (1,) * f.nvars)


def taylor_coeffs(f: RationalFn, L: int):
    """Power-series coefficients of f summed per total degree, 0..L."""
    g = equal_parameter(f)
    den = {e[0]: c for e, c in g.den.terms}
    num = {e[0]: c for e, c in g.num.terms}
    c0 = den.get(0, 0)
    if c0 == 0:
        raise SingularAtZero("denominator vanishes at 0")
    coeffs = []
    for k in range(L + 1):
        acc = Fraction(num.get(k, 0))
        for j in range(1, k + 1):
            if j in den:
                acc -= den[j] * coeffs[k - j]
        coeffs.append(acc / c0)
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError(f"non-integer series coefficient {c}")
        out.append(int(c))
    return out


def euler_characteristic(system: CoxeterSystem, q: WeightVector) -> Fraction:
    """chi_q = 1/W(q), exact."""
    if len(q.values) != nvars(system):
        raise ValueError("weight vector does not match the class count")
    return growth_series(system).inverse().eval(q.values)
