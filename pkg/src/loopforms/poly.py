"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is packed into one Python int: a 16-bit field per variable, with
the total degree in a field above them.  Integer comparison of packed keys is
then graded lexicographic order (u1 > u2 > ...), and multiplying monomials is
adding keys.  The top bit of every field is a guard used by the divisibility
test, so individual exponents must stay below 2**15.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd as igcd
from math import isqrt
from typing import Iterable, Mapping, Sequence

from .errors import ContextError, DivisionError

_W = 16
_MASK = (1 << _W) - 1
_GUARD = 1 << (_W - 1)
MAX_EXPONENT = _GUARD - 1


class PolyRing:
    """A fixed, ordered list of variable names.

    Polynomials can only be combined when they share a ring (equal name
    tuples); everything else raises ContextError.
    """

    __slots__ = ("names", "nvars", "_shifts", "_units", "_deg_shift", "_guards", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        n = len(names)
        self.names = names
        self.nvars = n
        self._deg_shift = _W * n
        self._shifts = tuple(_W * (n - 1 - j) for j in range(n))
        # adding _units[j] raises the exponent of variable j and the total degree by one
        self._units = tuple((1 << s) | (1 << self._deg_shift) for s in self._shifts)
        self._guards = sum(_GUARD << (_W * j) for j in range(n + 1))
        self._hash = hash(("PolyRing", names))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PolyRing({list(self.names)!r})"

    # -- packed monomials -------------------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"expected {self.nvars} exponents, got {len(exps)}")
        key = 0
        for e, unit in zip(exps, self._units):
            if e < 0 or e > MAX_EXPONENT:
                raise ValueError(f"exponent {e} out of range")
            key += e * unit
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & _MASK for s in self._shifts)

    def exponent(self, key: int, j: int) -> int:
        return (key >> self._shifts[j]) & _MASK

    def degree_of(self, key: int) -> int:
        return key >> self._deg_shift

    def divides(self, small: int, big: int) -> bool:
        g = self._guards
        return ((big | g) - small) & g == g

    def unit(self, j: int) -> int:
        return self._units[j]

    # -- constructors ------------------------------------------------------
    @property
    def zero(self) -> "SparsePoly":
        return SparsePoly(self, {})

    @property
    def one(self) -> "SparsePoly":
        return SparsePoly(self, {0: 1})

    def const(self, c) -> "SparsePoly":
        return SparsePoly(self, {0: c} if c else {})

    def gen(self, j: int) -> "SparsePoly":
        return SparsePoly(self, {self._units[j]: 1})

    def gens(self) -> tuple["SparsePoly", ...]:
        return tuple(self.gen(j) for j in range(self.nvars))

    def from_dict(self, d: Mapping[Sequence[int], object]) -> "SparsePoly":
        terms = {}
        for exps, c in d.items():
            if c:
                k = self.pack(exps)
                terms[k] = terms.get(k, 0) + c
        return SparsePoly(self, {k: _tidy(c) for k, c in terms.items() if c})

    def index(self, name: str) -> int:
        return self.names.index(name)


def _tidy(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


class SparsePoly:
    """Immutable sparse polynomial: packed monomial key -> nonzero coefficient.

    Coefficients are ints or Fractions.  ``terms`` must never be mutated
    after construction.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- coercion ------------------------------------------------------------
    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.ring != self.ring:
                raise ContextError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly(self.ring, {0: other} if other else {})
        return NotImplemented

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and 0 in t)

    def is_one(self) -> bool:
        t = self.terms
        return len(t) == 1 and t.get(0) == 1

    def constant_value(self):
        """Value of a constant polynomial (raises if not constant)."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, 0)

    def leading_key(self) -> int:
        return max(self.terms)

    def leading_coeff(self):
        return self.terms[max(self.terms)] if self.terms else 0

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return self.ring.degree_of(max(self.terms))

    def degree_in(self, j: int) -> int:
        if not self.terms:
            return -1
        ex = self.ring.exponent
        return max(ex(k, j) for k in self.terms)

    def variables(self) -> set[int]:
        """Indices of the variables that actually occur."""
        ring = self.ring
        found = set()
        for k in self.terms:
            if k:
                for j in range(ring.nvars):
                    if ring.exponent(k, j):
                        found.add(j)
        return found

    def coefficients(self):
        return self.terms.values()

    def items(self):
        """(exponent tuple, coefficient) pairs in decreasing monomial order."""
        unpack = self.ring.unpack
        return [(unpack(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    # -- arithmetic -------------------------------------------------------------
    def __neg__(self):
        return SparsePoly(self.ring, {k: -c for k, c in self.terms.items()})

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
        res = dict(self.terms)
        get = res.get
        for k, c in other.terms.items():
            v = get(k, 0) + c
            if v:
                res[k] = v
            else:
                del res[k]
        return SparsePoly(self.ring, res)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        res = dict(self.terms)
        get = res.get
        for k, c in other.terms.items():
            v = get(k, 0) - c
            if v:
                res[k] = v
            else:
                del res[k]
        return SparsePoly(self.ring, res)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SparsePoly(self.ring, {})
            if other == 1:
                return self
            return SparsePoly(self.ring, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return SparsePoly(self.ring, _mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        if e == 0:
            return self.ring.one
        t = self.terms
        if len(t) == 1:
            (k, c), = t.items()
            if self.ring.degree_of(k) * e > MAX_EXPONENT:
                raise OverflowError("exponent too large")
            return SparsePoly(self.ring, {k * e: c ** e})
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, key: int, c=1) -> "SparsePoly":
        return SparsePoly(self.ring, {k + key: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and evaluation ---------------------------------------------------
    def diff(self, j: int) -> "SparsePoly":
        ring = self.ring
        shift = ring._shifts[j]
        unit = ring._units[j]
        res = {}
        for k, c in self.terms.items():
            e = (k >> shift) & _MASK
            if e:
                res[k - unit] = c * e
        return SparsePoly(ring, res)

    def evaluate(self, point: Sequence) -> Fraction:
        """Value at a point given as one number per ring variable."""
        if len(point) != self.ring.nvars:
            raise ValueError("point dimension mismatch")
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for exps, c in self.items():
            v = Fraction(c)
            for p, e in zip(pt, exps):
                if e:
                    v *= p ** e
            total += v
        return total

    # -- content ------------------------------------------------------------------
    def denominator_lcm(self) -> int:
        d = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                q = c.denominator
                d = d * q // igcd(d, q)
        return d

    def integer_content(self) -> int:
        """gcd of the coefficients of an integer polynomial (0 for zero)."""
        g = 0
        for c in self.terms.values():
            g = igcd(g, c)
            if g == 1:
                break
        return g

    def clear_denominators(self) -> tuple["SparsePoly", int]:
        """(p * d, d) with p * d integral; d = 1 if already integral."""
        d = self.denominator_lcm()
        if d == 1:
            return self, 1
        return SparsePoly(self.ring, {k: int(c * d) for k, c in self.terms.items()}), d

    def primitive(self) -> "SparsePoly":
        """Integer primitive part with positive leading coefficient."""
        p, _ = self.clear_denominators()
        if not p.terms:
            return p
        g = p.integer_content()
        if p.leading_coeff() < 0:
            g = -g
        if g == 1:
            return p
        return SparsePoly(p.ring, {k: c // g for k, c in p.terms.items()})

    # -- division ------------------------------------------------------------------
    def divmod(self, other: "SparsePoly") -> tuple["SparsePoly", "SparsePoly"]:
        """Multivariate division by a single divisor in grlex order."""
        other = self._coerce(other)
        if not other.terms:
            raise DivisionError("division by zero polynomial")
        q, r = _divide(self.ring, self.terms, other.terms, exact=False, integral=False)
        return SparsePoly(self.ring, q), SparsePoly(self.ring, r)

    def exquo(self, other: "SparsePoly") -> "SparsePoly":
        """Exact quotient; raises ValueError when ``other`` does not divide."""
        other = self._coerce(other)
        if not other.terms:
            raise DivisionError("division by zero polynomial")
        res = _divide(self.ring, self.terms, other.terms, exact=True, integral=False)
        if res is None:
            raise ValueError("inexact polynomial division")
        return SparsePoly(self.ring, res[0])

    # -- printing -------------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"SparsePoly({format_poly(self)!r})"


def _mul_terms(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return {}
    res = {}
    get = res.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            res[k] = get(k, 0) + ca * cb
    return {k: v for k, v in res.items() if v}


def _divide(ring: PolyRing, f: dict, g: dict, exact: bool, integral: bool):
    """Divide f by g.

    exact: stop and return None as soon as a nonzero remainder term appears.
    integral: additionally require integer quotient coefficients (used with
    primitive integer divisors, where Gauss's lemma makes this equivalent to
    divisibility over Q).
    """
    glk = max(g)
    glc = g[glk]
    rest = [(k, c) for k, c in g.items() if k != glk]
    guards = ring._guards
    p = dict(f)
    heap = [-k for k in p]
    heapq.heapify(heap)
    q = {}
    r = {}
    while heap:
        k = -heapq.heappop(heap)
        c = p.pop(k, 0)
        if not c:
            continue
        while heap and -heap[0] == k:
            heapq.heappop(heap)
        if ((k | guards) - glk) & guards == guards:
            m = k - glk
            if integral:
                if c % glc:
                    return None
                qc = c // glc
            elif isinstance(c, int) and isinstance(glc, int) and c % glc == 0:
                qc = c // glc
            else:
                qc = Fraction(c, 1) / glc
                if qc.denominator == 1:
                    qc = int(qc)
            q[m] = qc
            for kg, cg in rest:
                kk = m + kg
                old = p.get(kk)
                if old is None:
                    p[kk] = -qc * cg
                    heapq.heappush(heap, -kk)
                else:
                    v = old - qc * cg
                    if v:
                        p[kk] = v
                    else:
                        del p[kk]
        else:
            if exact:
                return None
            r[k] = c
    return q, r


# ---------------------------------------------------------------------------
# GCD
# ---------------------------------------------------------------------------

def poly_gcd(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Greatest common divisor over Q, returned integral, primitive, lc > 0.

    Heuristic GCD (evaluation at a large integer, integer gcd, balanced
    interpolation, divisibility check) is tried first; when it gives up the
    recursive primitive-PRS Euclidean algorithm is used.  gcd(0, 0) = 0.
    """
    if f.ring != g.ring:
        raise ContextError(f"{f.ring} vs {g.ring}")
    ring = f.ring
    if not f.terms:
        return g.primitive()
    if not g.terms:
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return ring.one
    fp = f.primitive().terms
    gp = g.primitive().terms
    if fp == gp:
        return SparsePoly(ring, fp)
    return SparsePoly(ring, _gcd_int(ring, fp, gp))


def _gcd_int(ring: PolyRing, f: dict, g: dict) -> dict:
    """gcd of two nonzero primitive integer polynomials (primitive result)."""
    # common monomial factor first: cheap and it keeps the heuristic small
    mf = _monomial_content(ring, f)
    mg = _monomial_content(ring, g)
    mono = _min_key(ring, mf, mg)
    if mf:
        f = {k - mf: c for k, c in f.items()}
    if mg:
        g = {k - mg: c for k, c in g.items()}
    if len(f) == 1 or len(g) == 1:
        core = {0: 1}
    elif f == g:
        core = f
    else:
        varset = _vars_of(ring, f) | _vars_of(ring, g)
        core = _heu_gcd(ring, f, g, tuple(sorted(varset)))
        if core is None:
            core = _prs_gcd(ring, f, g)
        core = _normalize_primitive(core)
    if mono:
        core = {k + mono: c for k, c in core.items()}
    return core


def _vars_of(ring, f) -> set[int]:
    found = set()
    n = ring.nvars
    for k in f:
        for j in range(n):
            if j not in found and ring.exponent(k, j):
                found.add(j)
        if len(found) == n:
            break
    return found


def _monomial_content(ring, f) -> int:
    """Packed key of the largest monomial dividing every term."""
    mins = None
    for k in f:
        ex = ring.unpack(k)
        mins = list(ex) if mins is None else [min(a, b) for a, b in zip(mins, ex)]
        if not any(mins):
            return 0
    return ring.pack(mins)


def _min_key(ring, a: int, b: int) -> int:
    if not a or not b:
        return 0
    return ring.pack([min(x, y) for x, y in zip(ring.unpack(a), ring.unpack(b))])


def _content_int(f: dict) -> int:
    g = 0
    for c in f.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def _normalize_primitive(f: dict) -> dict:
    g = _content_int(f)
    if f[max(f)] < 0:
        g = -g
    if g == 1:
        return f
    return {k: c // g for k, c in f.items()}


def _eval_var(ring, f: dict, j: int, x: int) -> dict:
    shift = ring._shifts[j]
    unit = ring._units[j]
    res = {}
    get = res.get
    for k, c in f.items():
        e = (k >> shift) & _MASK
        if e:
            k -= e * unit
            c = c * x ** e
        res[k] = get(k, 0) + c
    return {k: v for k, v in res.items() if v}


def _interpolate(ring, h: dict, j: int, x: int) -> dict:
    """Recover a polynomial in variable j from its image at x (balanced digits)."""
    unit = ring._units[j]
    half = x // 2
    res = {}
    e = 0
    while h:
        nxt = {}
        for k, c in h.items():
            d = c % x
            if d > half:
                d -= x
            if d:
                res[k + e * unit] = d
            rest = (c - d) // x
            if rest:
                nxt[k] = rest
        h = nxt
        e += 1
    return res


def _heu_gcd(ring, f: dict, g: dict, varset: tuple[int, ...]):
    """Heuristic GCD of integer polynomials; None when it gives up."""
    cf = _content_int(f)
    cg = _content_int(g)
    c = igcd(cf, cg)
    if cf != 1:
        f = {k: v // cf for k, v in f.items()}
    if cg != 1:
        g = {k: v // cg for k, v in g.items()}
    if not varset:
        return {0: c}
    if len(f) == 1 and 0 in f or len(g) == 1 and 0 in g:
        return {0: c}
    j = varset[-1]
    rest = varset[:-1]
    fn = max(abs(v) for v in f.values())
    gn = max(abs(v) for v in g.values())
    b = 2 * min(fn, gn) + 29
    x = max(min(b, 99 * isqrt(b)),
            2 * min(fn // abs(f[max(f)]), gn // abs(g[max(g)])) + 2)
    for _ in range(6):
        ff = _eval_var(ring, f, j, x)
        gg = _eval_var(ring, g, j, x)
        if ff and gg:
            h = _heu_gcd(ring, ff, gg, rest)
            if h is None:
                return None
            h = _interpolate(ring, h, j, x)
            if h:
                h = _normalize_primitive(h)
                if (_divide(ring, f, h, exact=True, integral=True) is not None
                        and _divide(ring, g, h, exact=True, integral=True) is not None):
                    return {k: v * c for k, v in h.items()} if c != 1 else h
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


# -- recursive primitive PRS (fallback) -----------------------------------------

def _split(ring, f: dict, j: int) -> dict:
    """Coefficients of f as a polynomial in variable j: {degree: dict}."""
    shift = ring._shifts[j]
    unit = ring._units[j]
    out: dict[int, dict] = {}
    for k, c in f.items():
        e = (k >> shift) & _MASK
        out.setdefault(e, {})[k - e * unit] = c
    return out


def _content_in(ring, f: dict, j: int) -> dict:
    coeffs = list(_split(ring, f, j).values())
    cont = _normalize_primitive(coeffs[0])
    for cpoly in coeffs[1:]:
        if len(cont) == 1 and 0 in cont:
            break
        cont = _gcd_int(ring, cont, _normalize_primitive(cpoly))
    return cont


def _prs_gcd(ring, f: dict, g: dict) -> dict:
    varset = sorted(_vars_of(ring, f) | _vars_of(ring, g))
    if not varset:
        return {0: 1}
    j = varset[0]
    unit = ring._units[j]
    cf = _content_in(ring, f, j)
    cg = _content_in(ring, g, j)
    cont = _gcd_int(ring, cf, cg)
    a = _divide(ring, f, cf, exact=True, integral=False)[0]
    b = _divide(ring, g, cg, exact=True, integral=False)[0]
    a, b = _normalize_primitive(_ints(a)), _normalize_primitive(_ints(b))

    def deg(p):
        return max(ring.exponent(k, j) for k in p)

    if deg(a) < deg(b):
        a, b = b, a
    while b and deg(b) > 0:
        # pseudo-remainder of a by b in variable j
        db = deg(b)
        lcb = _split(ring, b, j)[db]
        r = a
        while r and deg(r) >= db:
            dr = deg(r)
            lcr = _split(ring, r, j)[dr]
            shift = (dr - db) * unit
            left = _mul_terms(lcb, r)
            right = _mul_terms(lcr, {k + shift: c for k, c in b.items()})
            r = _sub_terms(left, right)
        a, b = b, r
        if b:
            cb = _content_in(ring, b, j)
            b = _normalize_primitive(_ints(_divide(ring, b, cb, exact=True, integral=False)[0]))
    if b:
        core = {0: 1}
    else:
        core = a
    return _mul_terms(core, cont)


def _sub_terms(a: dict, b: dict) -> dict:
    res = dict(a)
    for k, c in b.items():
        v = res.get(k, 0) - c
        if v:
            res[k] = v
        else:
            res.pop(k, None)
    return res


def _ints(f: dict) -> dict:
    d = 1
    for c in f.values():
        if isinstance(c, Fraction):
            d = d * c.denominator // igcd(d, c.denominator)
    if d == 1:
        return {k: int(c) for k, c in f.items()}
    return {k: int(c * d) for k, c in f.items()}


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def format_coeff(c) -> str:
    return str(c)


def format_poly(p: SparsePoly) -> str:
    if not p.terms:
        return "0"
    names = p.ring.names
    out = []
    for exps, c in p.items():
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        neg = c < 0
        a = -c if neg else c
        if factors:
            body = "*".join(factors)
            if a != 1:
                body = f"{a}*{body}"
        else:
            body = str(a)
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
