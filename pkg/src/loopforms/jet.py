"""Differential polynomials: the ring A of polynomials in jet variables.

A jet variable u^i_(s) is written ``(i, s)`` with a 0-based coordinate index
``i`` and order ``s``.  Order 0 is the point coordinate u^i itself, which lives
inside the rational-function coefficients; orders s >= 1 are the polynomial
variables of a JetExpression.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ContextError, InputError
from .poly import PolyRing
from .ratfun import RatFun, _is_scalar

JetVar = tuple[int, int]
# a jet monomial: sorted tuple of ((i, s), exponent) with s >= 1
Monomial = tuple[tuple[JetVar, int], ...]

ONE: Monomial = ()


def _mono_key(v: JetVar):
    return (v[1], v[0])


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda ve: _mono_key(ve[0])))


def _mono_div_var(m: Monomial, v: JetVar) -> tuple[int, Monomial]:
    """(exponent of v in m, m / v); exponent 0 means v does not occur."""
    for k, (w, e) in enumerate(m):
        if w == v:
            if e == 1:
                return 1, m[:k] + m[k + 1:]
            return e, m[:k] + ((w, e - 1),) + m[k + 1:]
    return 0, m


def _mono_order(m: Monomial) -> int:
    return max((v[1] for v, _ in m), default=0)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _accumulate(acc: dict, m: Monomial, c: RatFun) -> None:
    old = acc.get(m)
    if old is None:
        if not c.is_zero():
            acc[m] = c
        return
    s = old + c
    if s.is_zero():
        del acc[m]
    else:
        acc[m] = s


class JetExpression:
    """Element of A: a finite sum of coefficient * jet monomial.

    Coefficients are RatFun over the point coordinates; monomials involve jet
    variables of order >= 1 only.  Instances are immutable.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, RatFun] | None = None):
        self.ring = ring
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}
        self._hash = None

    @property
    def n(self) -> int:
        return len(self.ring.names)

    # -- constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, ring: PolyRing) -> "JetExpression":
        return cls(ring)

    @classmethod
    def const(cls, ring: PolyRing, c) -> "JetExpression":
        return cls.from_ratfun(RatFun.const(ring, c))

    @classmethod
    def from_ratfun(cls, f: RatFun) -> "JetExpression":
        return cls(f.ring, {ONE: f})

    @classmethod
    def coord(cls, ring: PolyRing, i: int) -> "JetExpression":
        return cls.from_ratfun(RatFun.gen(ring, i))

    @classmethod
    def jet(cls, ring: PolyRing, i: int, s: int) -> "JetExpression":
        if not 0 <= i < len(ring.names):
            raise InputError(f"coordinate index {i} out of range")
        if s < 0:
            raise InputError("jet order must be nonnegative")
        if s == 0:
            return cls.coord(ring, i)
        return cls(ring, {(((i, s), 1),): RatFun.const(ring, 1)})

    # -- queries ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_ratfun(self) -> bool:
        """True when no jet variable of order >= 1 occurs."""
        return all(m == ONE for m in self.terms)

    def as_ratfun(self) -> RatFun:
        if not self.is_ratfun():
            raise InputError("expression depends on jet variables")
        return self.terms.get(ONE, RatFun.const(self.ring, 0))

    def max_order(self) -> int:
        """Highest s with u^i_(s) present; 0 for point functions."""
        return max((_mono_order(m) for m in self.terms), default=0)

    def jet_variables(self) -> set[JetVar]:
        out = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return out

    def coefficient(self, m: Monomial) -> RatFun:
        return self.terms.get(m, RatFun.const(self.ring, 0))

    def evaluate(self, point, jets: Mapping[JetVar, object] | None = None) -> Fraction:
        """Value at a point, with jet variables assigned from ``jets``."""
        jets = jets or {}
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c.evaluate(point)
            for var, e in m:
                v *= Fraction(jets.get(var, 0)) ** e
            total += v
        return total

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "JetExpression":
        if isinstance(other, JetExpression):
            if other.ring != self.ring:
                raise ContextError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, RatFun):
            if other.ring != self.ring:
                raise ContextError(f"{self.ring} vs {other.ring}")
            return JetExpression.from_ratfun(other)
        if _is_scalar(other):
            return JetExpression.const(self.ring, other)
        return NotImplemented

    def __neg__(self):
        return JetExpression(self.ring, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(acc, m, c)
        return JetExpression(self.ring, acc)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other) or isinstance(other, RatFun):
            if isinstance(other, RatFun) and other.ring != self.ring:
                raise ContextError(f"{self.ring} vs {other.ring}")
            if not other:
                return JetExpression(self.ring)
            return JetExpression(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _accumulate(acc, _mono_mul(m1, m2), c1 * c2)
        return JetExpression(self.ring, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, JetExpression):
            other = other.as_ratfun()
        if isinstance(other, RatFun):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = JetExpression.const(self.ring, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFun)):
            other = self._coerce(other)
        if not isinstance(other, JetExpression):
            return NotImplemented
        if self.ring != other.ring or self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.keys()))
        return self._hash

    def __str__(self):
        from .printer import format_jet

        return format_jet(self)

    def __repr__(self):
        return f"JetExpression({str(self)!r})"


def total_derivative(e: JetExpression, k: int = 1) -> JetExpression:
    """k-fold total x-derivative of e."""
    if k < 0:
        raise InputError("derivative order must be nonnegative")
    for _ in range(k):
        e = _dx(e)
    return e


def _dx(e: JetExpression) -> JetExpression:
    ring = e.ring
    n = len(ring.names)
    acc: dict = {}
    for m, c in e.terms.items():
        # point-coordinate part: sum_j dc/du^j * u^j_(1)
        for j in range(n):
            dc = c.diff(j)
            if not dc.is_zero():
                _accumulate(acc, _mono_mul(m, (((j, 1), 1),)), dc)
        for (i, s), ex in m:
            _, rest = _mono_div_var(m, (i, s))
            nm = _mono_mul(rest, (((i, s + 1), 1),))
            _accumulate(acc, nm, c * ex)
    return JetExpression(ring, acc)


def jet_partial(e: JetExpression, i: int, s: int) -> JetExpression:
    """Formal partial derivative with respect to u^i_(s)."""
    ring = e.ring
    acc: dict = {}
    if s == 0:
        for m, c in e.terms.items():
            dc = c.diff(i)
            if not dc.is_zero():
                acc[m] = dc
        return JetExpression(ring, acc)
    v = (i, s)
    for m, c in e.terms.items():
        ex, rest = _mono_div_var(m, v)
        if ex:
            _accumulate(acc, rest, c * ex)
    return JetExpression(ring, acc)


def variational_derivative(f: JetExpression) -> tuple[JetExpression, ...]:
    """Euler operator: E_i(f) = sum_t (-1)^t d_x^t (df/du^i_(t))."""
    top = f.max_order()
    out = []
    for i in range(f.n):
        comp = JetExpression(f.ring)
        for t in range(top, -1, -1):
            # Horner in d_x: E = p_0 - d_x(p_1 - d_x(p_2 - ...))
            p = jet_partial(f, i, t)
            comp = p - _dx(comp) if comp.terms else p
        out.append(comp)
    return tuple(out)


def is_total_derivative(f: JetExpression) -> bool:
    """True iff f = d_x g for some g in A.

    A vanishing Euler operator leaves f = d_x g + const; every term of d_x g
    carries a jet variable, so the constant is the jet-free part of f.
    """
    if not f.coefficient(ONE).is_zero():
        return False
    return all(c.is_zero() for c in variational_derivative(f))


def linear_combination(ring: PolyRing, pairs: Iterable[tuple[object, JetExpression]]) -> JetExpression:
    acc: dict = {}
    for coef, e in pairs:
        if isinstance(coef, JetExpression):
            e = coef * e
        elif coef != 1:
            e = e * coef
        for m, c in e.terms.items():
            _accumulate(acc, m, c)
    return JetExpression(ring, acc)
