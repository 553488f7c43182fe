"""Exact multivariate polynomials over Z and canonical rational functions.

Variables correspond to generator conjugacy classes; callers fix the
variable count and order.  MultiPoly is a thin dict of exponent tuple ->
integer coefficient.  RationalFn keeps a canonical form: numerator and
denominator coprime (multivariate gcd via sympy over ZZ), integer contents
coprime, and the denominator's graded-lex leading coefficient positive.
Equality of canonical forms is then plain structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class PolyError(ValueError):
    pass


class PoleAtQ(ArithmeticError):
    pass


def _gl_key(exps):
    # graded lex: total degree first, then the exponent tuple
    return (sum(exps), exps)


@dataclass(frozen=True)
class MultiPoly:
    nvars: int
    terms: tuple  # sorted ((exps, coeff), ...), graded-lex ascending, no zeros

    # -- construction ------------------------------------------------------

    @classmethod
    def from_dict(cls, nvars, mapping):
        clean = {}
        for exps, c in mapping.items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise PolyError(f"bad exponent vector {exps}")
            c = int(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
        items = tuple(sorted(((e, c) for e, c in clean.items() if c), key=lambda t: _gl_key(t[0])))
        return cls(nvars, items)

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, ())

    @classmethod
    def const(cls, nvars, c):
        return cls.from_dict(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, ((exps, 1),))

    @classmethod
    def monomial(cls, nvars, exps, c=1):
        return cls.from_dict(nvars, {tuple(exps): c})

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_one(self):
        return self.terms == (((0,) * self.nvars, 1),)

    def constant_term(self):
        zero = (0,) * self.nvars
        for e, c in self.terms:
            if e == zero:
                return c
        return 0

    def total_degree(self):
        return max((sum(e) for e, _ in self.terms), default=0)

    def max_exponents(self):
        """Componentwise maximum of the exponent vectors."""
        out = [0] * self.nvars
        for e, _ in self.terms:
            for i, v in enumerate(e):
                if v > out[i]:
                    out[i] = v
        return tuple(out)

    def leading(self):
        """(exps, coeff) of the graded-lex leading term."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        return self.terms[-1]

    # -- arithmetic ----------------------------------------------------------

    def _require_same(self, other):
        if self.nvars != other.nvars:
            raise PolyError("variable count mismatch")

    def __add__(self, other):
        self._require_same(other)
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return MultiPoly.from_dict(self.nvars, d)

    def __neg__(self):
        return MultiPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return MultiPoly.zero(self.nvars)
            return MultiPoly(self.nvars, tuple((e, c * other) for e, c in self.terms))
        self._require_same(other)
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return MultiPoly.from_dict(self.nvars, d)

    __rmul__ = __mul__

    def content(self):
        from math import gcd

        g = 0
        for _, c in self.terms:
            g = gcd(g, abs(c))
        return g

    def divide_int(self, k):
        """Exact division by an integer."""
        out = []
        for e, c in self.terms:
            q, r = divmod(c, k)
            if r:
                raise PolyError("inexact integer division")
            out.append((e, q))
        return MultiPoly(self.nvars, tuple(out))

    def eval(self, values):
        """Evaluate at exact rationals (or integers)."""
        if len(values) != self.nvars:
            raise PolyError("evaluation point has wrong arity")
        values = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms:
            term = Fraction(c)
            for v, k in zip(values, e):
                if k:
                    term *= v**k
            total += term
        return total

    def coeffs_by_total_degree(self, upto):
        """Sums of coefficients per total degree 0..upto."""
        out = [0] * (upto + 1)
        for e, c in self.terms:
            d = sum(e)
            if d <= upto:
                out[d] += c
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in reversed(self.terms):
            mono = "*".join(f"x{i}^{k}" for i, k in enumerate(e) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def _to_sympy(p: MultiPoly, gens):
    from sympy import Poly

    return Poly.from_dict({e: c for e, c in p.terms} or {(0,) * p.nvars: 0}, *gens, domain="ZZ")


def _from_sympy(sp, nvars):
    return MultiPoly.from_dict(nvars, sp.as_dict())


def _poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    from sympy import symbols

    gens = symbols(f"x0:{a.nvars}")
    sa, sb = _to_sympy(a, gens), _to_sympy(b, gens)
    return _from_sympy(sa.gcd(sb), a.nvars)


def _poly_exquo(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    from sympy import symbols

    gens = symbols(f"x0:{a.nvars}")
    return _from_sympy(_to_sympy(a, gens).exquo(_to_sympy(b, gens)), a.nvars)


@dataclass(frozen=True)
class RationalFn:
    num: MultiPoly
    den: MultiPoly

    @classmethod
    def make(cls, num: MultiPoly, den: MultiPoly) -> "RationalFn":
        """Canonicalize num/den: coprime, integer contents coprime, and the
        denominator sign-normalized (positive constant term when it has one,
        positive graded-lex leading coefficient otherwise)."""
        if den.is_zero:
            raise PolyError("zero denominator")
        if num.nvars != den.nvars:
            raise PolyError("variable count mismatch")
        if num.is_zero:
            return cls(num, MultiPoly.const(den.nvars, 1))
        g = _poly_gcd(num, den)
        if not g.is_one:
            num = _poly_exquo(num, g)
            den = _poly_exquo(den, g)
        from math import gcd as igcd

        k = igcd(num.content(), den.content())
        if k > 1:
            num = num.divide_int(k)
            den = den.divide_int(k)
        anchor = den.constant_term() or den.leading()[1]
        if anchor < 0:
            num, den = -num, -den
        return cls(num, den)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFn":
        return cls(p, MultiPoly.const(p.nvars, 1))

    @classmethod
    def from_fraction(cls, nvars, q) -> "RationalFn":
        q = Fraction(q)
        return cls.make(
            MultiPoly.const(nvars, q.numerator), MultiPoly.const(nvars, q.denominator)
        )

    @property
    def nvars(self):
        return self.num.nvars

    @property
    def is_zero(self):
        return self.num.is_zero

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFn.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFn.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn.make(self.num * other.den, self.den * other.num)

    def inverse(self):
        return RationalFn.make(self.den, self.num)

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, MultiPoly):
            return RationalFn.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RationalFn.from_fraction(self.nvars, other)
        raise TypeError(f"cannot mix RationalFn with {type(other)!r}")

    def eval(self, values) -> Fraction:
        d = self.den.eval(values)
        if d == 0:
            raise PoleAtQ(f"pole at {values}")
        return self.num.eval(values) / d

    def __str__(self):
        return f"({self.num}) / ({self.den})"
