"""Rational functions in the point coordinates u^1..u^n.

Every RatFun is kept in canonical form: integral numerator and denominator
with no common factor, no common integer content, and a denominator whose
grlex-leading coefficient is positive.  Equality is still decided by
cross-multiplication (``ratfun_equal``); canonical form only keeps sizes down.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import Sequence

from .errors import ContextError, DivisionError
from .poly import PolyRing, SparsePoly, format_poly, poly_gcd


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class RatFun:
    __slots__ = ("num", "den", "_hash", "_dcache")

    def __init__(self, num: SparsePoly, den: SparsePoly | None = None, *, _canonical: bool = False):
        if den is None:
            den = num.ring.one
        elif den.ring != num.ring:
            raise ContextError(f"{num.ring} vs {den.ring}")
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None
        self._dcache = None

    @classmethod
    def const(cls, ring: PolyRing, c) -> "RatFun":
        c = Fraction(c)
        return cls(ring.const(c.numerator), ring.const(c.denominator), _canonical=True)

    @classmethod
    def gen(cls, ring: PolyRing, j: int) -> "RatFun":
        return cls(ring.gen(j), ring.one, _canonical=True)

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        return Fraction(self.num.constant_value(), self.den.constant_value())

    def evaluate(self, point: Sequence) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise DivisionError("denominator vanishes at evaluation point")
        return self.num.evaluate(point) / d

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            if other.num.ring != self.num.ring:
                raise ContextError(f"{self.ring} vs {other.ring}")
            return other
        if _is_scalar(other):
            return RatFun.const(self.ring, other)
        if isinstance(other, SparsePoly):
            return RatFun(other)
        return NotImplemented

    def __neg__(self):
        return RatFun(-self.num, self.den, _canonical=True)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b.is_constant() and d.is_constant():
            bv, dv = b.terms[0], d.terms[0]
            if bv == dv:
                return _from_int_parts(a + c, b)
            return _from_int_parts(a * dv + c * bv, b * dv)
        if b.terms == d.terms:
            t = a + c
            if not t.terms:
                return RatFun(t.ring.zero, t.ring.one, _canonical=True)
            return _reduce_against(t, b, b)
        if b.is_constant():
            return _from_int_parts(a * d + c * b.terms[0], d * b.terms[0])
        if d.is_constant():
            return _from_int_parts(a * d.terms[0] + c * b, b * d.terms[0])
        g = poly_gcd(b, d)
        if g.is_one():
            t = a * d + c * b
            return _from_int_parts(t, b * d)
        bg = b.exquo(g)
        dg = d.exquo(g)
        t = a * dg + c * bg
        if not t.terms:
            return RatFun(t.ring.zero, t.ring.one, _canonical=True)
        # gcd(t, b*dg) divides g
        return _reduce_against(t, b * dg, g)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if _is_scalar(other):
            if not other:
                return RatFun(self.ring.zero, self.ring.one, _canonical=True)
            if other == 1:
                return self
            other = RatFun.const(self.ring, other)
        else:
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        a, b = self.num, self.den
        c, d = other.num, other.den
        if not a.terms or not c.terms:
            return RatFun(a.ring.zero, a.ring.one, _canonical=True)
        if b.is_constant() and d.is_constant():
            return _from_int_parts(a * c, b * d)
        g1 = _cheap_gcd(a, d)
        g2 = _cheap_gcd(c, b)
        if not g1.is_one():
            a = a.exquo(g1)
            d = d.exquo(g1)
        if not g2.is_one():
            c = c.exquo(g2)
            b = b.exquo(g2)
        return _from_int_parts(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if not self.num.terms:
            raise DivisionError("inverse of zero rational function")
        num, den = self.den, self.num
        if den.leading_coeff() < 0:
            num, den = -num, -den
        return RatFun(num, den, _canonical=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise ValueError("exponent must be an integer")
        if e < 0:
            return self.inverse() ** (-e)
        return RatFun(self.num ** e, self.den ** e, _canonical=True)

    def diff(self, j: int) -> "RatFun":
        """Partial derivative with respect to the j-th ring variable."""
        cache = self._dcache
        if cache is not None:
            hit = cache.get(j)
            if hit is not None:
                return hit
        else:
            cache = self._dcache = {}
        res = self._diff(j)
        cache[j] = res
        return res

    def _diff(self, j: int) -> "RatFun":
        n, d = self.num, self.den
        ring = n.ring
        if d.is_constant():
            return _from_int_parts(n.diff(j), d)
        dd = d.diff(j)
        if not dd.terms:
            return _from_int_parts(n.diff(j), d)
        # h = gcd(d, d_j); factors of d involving u_j cannot divide t below,
        # so any cancellation is against h alone
        h = poly_gcd(d, dd)
        dh = d.exquo(h)
        t = n.diff(j) * dh - n * dd.exquo(h)
        if not t.terms:
            return RatFun(ring.zero, ring.one, _canonical=True)
        if h.is_constant():
            return _from_int_parts(t, d * dh)
        return _reduce_against(t, d * dh, h)

    # -- comparison ----------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFun):
            if self.num.ring != other.num.ring:
                return False
            if self.num.terms == other.num.terms and self.den.terms == other.den.terms:
                return True
            return ratfun_equal(self, other)
        if _is_scalar(other):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, SparsePoly):
            return other.ring == self.ring and ratfun_equal(self, RatFun(other))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        return format_ratfun(self)

    def __repr__(self):
        return f"RatFun({format_ratfun(self)!r})"


def _cheap_gcd(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    if a.is_constant() or b.is_constant():
        return a.ring.one
    return poly_gcd(a, b)


def _from_int_parts(num: SparsePoly, den: SparsePoly) -> RatFun:
    """num/den with integral parts already coprime as polynomials.

    Only the integer content and the sign of the denominator are fixed here.
    Fraction coefficients are tolerated and cleared.
    """
    ring = num.ring
    if not num.terms:
        return RatFun(ring.zero, ring.one, _canonical=True)
    num, dn = num.clear_denominators()
    den, dd = den.clear_denominators()
    if dn != 1:
        den = den * dn
    if dd != 1:
        num = num * dd
    cn = num.integer_content()
    cd = den.integer_content()
    g = igcd(cn, cd)
    if den.leading_coeff() < 0:
        g = -g
    if g != 1:
        num = SparsePoly(ring, {k: c // g for k, c in num.terms.items()})
        den = SparsePoly(ring, {k: c // g for k, c in den.terms.items()})
    return RatFun(num, den, _canonical=True)


def _reduce_against(t: SparsePoly, den: SparsePoly, bound: SparsePoly) -> RatFun:
    """t/den where gcd(t, den) is known to divide ``bound``."""
    if bound.is_constant():
        return _from_int_parts(t, den)
    t_int, _ = t.clear_denominators()
    g = poly_gcd(t_int, bound)
    if not g.is_one():
        t = t.exquo(g)
        den = den.exquo(g)
    return _from_int_parts(t, den)


def _canonicalize(num: SparsePoly, den: SparsePoly) -> tuple[SparsePoly, SparsePoly]:
    ring = num.ring
    if not den.terms:
        raise DivisionError("zero denominator")
    if not num.terms:
        return ring.zero, ring.one
    num, dn = num.clear_denominators()
    den, dd = den.clear_denominators()
    if dn != 1:
        den = den * dn
    if dd != 1:
        num = num * dd
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_one():
            num = num.exquo(g)
            den = den.exquo(g)
    r = _from_int_parts(num, den)
    return r.num, r.den


def ratfun_equal(a: RatFun, b: RatFun) -> bool:
    """True iff a.num*b.den - b.num*a.den is the zero polynomial."""
    if a.num.ring != b.num.ring:
        raise ContextError(f"{a.ring} vs {b.ring}")
    return (a.num * b.den - b.num * a.den).is_zero()


def ratfun_normalize(a: RatFun) -> RatFun:
    """Lowest-terms representative with positive, primitive denominator."""
    num, den = _canonicalize(a.num, a.den)
    return RatFun(num, den, _canonical=True)


def format_ratfun(r: RatFun) -> str:
    if r.den.is_one():
        return format_poly(r.num)
    num = format_poly(r.num)
    if len(r.num.terms) > 1:
        num = f"({num})"
    den = format_poly(r.den)
    if len(r.den.terms) > 1 or not r.den.is_constant():
        den = f"({den})"
    return f"{num}/{den}"
