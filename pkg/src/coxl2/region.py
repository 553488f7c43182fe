"""Membership in the region of convergence of a growth series.

Supported weight shapes are an equal parameter q (every class gets the same
value) or a monomial ray (every class value is an integer power of one
rational base).  Substituting the ray turns the growth series into a single
variable power series with non-negative integer coefficients, so it converges
exactly below the least positive real root of the reduced denominator and
diverges beyond it.  The root comparison is done exactly with Sturm chains;
no floating point enters the decision.

The radius itself is reported Out.  Divergence there is genuine whenever the
partial sums pass a configured bound; if they fail to within the term budget
the result still says Out but carries a "boundary-convention" note, since the
non-negative coefficients leave no third possibility that we could certify.
"""

from dataclasses import dataclass
from fractions import Fraction

from sympy import integer_nthroot

from .classify import classify_system
from .growth import WeightVector, growth_series, ray_parameter, taylor_coeffs
from .system import CoxeterSystem

IN = "In"
OUT = "Out"


class UnsupportedWeightShape(ValueError):
    """Weight vector is neither equal-parameter nor a monomial ray."""


@dataclass(frozen=True)
class RegionResult:
    membership: str  # IN or OUT
    at_boundary: bool = False
    note: str | None = None  # "boundary-convention" when divergence unverified

    def __bool__(self):
        return self.membership == IN


def _primitive_power(v: Fraction):
    """Write v != 1 as base**k with k maximal; the base is then not a
    perfect power, so it is the only candidate shared by a whole ray."""
    p, q = v.numerator, v.denominator
    top = max(p, q)
    for k in range(top.bit_length(), 1, -1):
        a, ok_a = integer_nthroot(p, k)
        c, ok_c = integer_nthroot(q, k)
        if ok_a and ok_c:
            return Fraction(int(a), int(c)), k
    return v, 1


def _ray_shape(values):
    """(base, powers) for a weight vector, or raise UnsupportedWeightShape."""
    if len(set(values)) == 1:
        return values[0], (1,) * len(values)
    if any(v == 1 for v in values):
        raise UnsupportedWeightShape(
            "unit weight mixed with non-unit weights is not a ray"
        )
    if any(v > 1 for v in values) and any(v < 1 for v in values):
        raise UnsupportedWeightShape(
            "weights on both sides of 1 share no ray"
        )
    decomposed = [_primitive_power(v) for v in values]
    base = decomposed[0][0]
    if any(b != base for b, _ in decomposed):
        raise UnsupportedWeightShape(
            "weights are not powers of a common base"
        )
    return base, tuple(k for _, k in decomposed)


# ---------------------------------------------------------------------------
# Sturm machinery on Fraction coefficient lists (ascending degree).


def _deg(p):
    return len(p) - 1


def _trim(p):
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _derivative(p):
    return [i * c for i, c in enumerate(p)][1:]


def _rem(a, b):
    """Remainder of a by b over the rationals."""
    a = list(a)
    while _deg(a) >= _deg(b) and _trim(a):
        a = _trim(a)
        if _deg(a) < _deg(b):
            break
        shift = _deg(a) - _deg(b)
        factor = a[-1] / b[-1]
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a = a[:-1]
    return _trim(a)


def _gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _rem(a, b)
    return a


def _exact_div(a, b):
    """Quotient of a by b when the division is exact."""
    a = list(a)
    out = [Fraction(0)] * (_deg(a) - _deg(b) + 1)
    while _trim(a) and _deg(_trim(a)) >= _deg(b):
        a = _trim(a)
        shift = _deg(a) - _deg(b)
        factor = a[-1] / b[-1]
        out[shift] = factor
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a = a[:-1]
    assert not _trim(a), "division was not exact"
    return out


def _squarefree(p):
    g = _gcd(p, _derivative(p))
    if _deg(g) < 1:
        return list(p)
    return _exact_div(p, g)


def _eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sturm_chain(p):
    """Sturm chain of the squarefree part of p."""
    p = _squarefree([Fraction(c) for c in p])
    chain = [p, _derivative(p)]
    while _deg(chain[-1]) > 0:
        r = _rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _variations(chain, x):
    signs = []
    for p in chain:
        v = _eval(p, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_open(p, a, b):
    """Distinct real roots of p in the open interval (a, b); the endpoints
    must not be roots."""
    chain = sturm_chain(p)
    assert _eval(chain[0], a) != 0 and _eval(chain[0], b) != 0
    return _variations(chain, a) - _variations(chain, b)


# ---------------------------------------------------------------------------


def region_membership(
    system: CoxeterSystem,
    q: WeightVector,
    *,
    divergence_bound: int = 10**6,
    max_boundary_terms: int = 500,
) -> RegionResult:
    """Decide whether the weighted growth series converges at q."""
    if len(q.values) != len(system.classes):
        raise ValueError("weight vector arity does not match class count")
    tags = classify_system(system)
    if all(t.finite for t in tags.values()):
        return RegionResult(IN)
    base, powers = _ray_shape(q.values)
    if base >= 1:
        # infinitely many elements each contributing a term >= 1
        return RegionResult(OUT)
    f = ray_parameter(growth_series(system), powers)
    den_full = [Fraction(0)] * (f.den.max_exponents()[0] + 1)
    for e, c in f.den.terms:
        den_full[e[0]] = Fraction(c)
    assert den_full[0] != 0
    sf = _squarefree(den_full)
    zero = Fraction(0)
    if _eval(sf, base) != 0:
        inside = count_roots_open(sf, zero, base) == 0
        return RegionResult(IN if inside else OUT)
    # base is a pole; deflate it so the smaller roots can be counted
    quotient = _exact_div(sf, [-base, Fraction(1)])
    if count_roots_open(quotient, zero, base) > 0:
        # a smaller root already stops convergence before base
        return RegionResult(OUT)
    # exactly at the radius: try to certify divergence by partial sums
    coeffs = taylor_coeffs(f, max_boundary_terms)
    total = Fraction(0)
    power = Fraction(1)
    for c in coeffs:
        total += c * power
        power *= base
        if total > divergence_bound:
            return RegionResult(OUT, at_boundary=True)
    return RegionResult(OUT, at_boundary=True, note="boundary-convention")
