"""Independent reference computations used by the tests.

Along a concrete curve u(x) with polynomial components every differential
polynomial becomes an ordinary polynomial in x, so the total derivative can be
checked against plain d/dx.
"""

from fractions import Fraction
from math import comb

from loopforms.jet import jet_partial, total_derivative


def upoly_add(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x + y for x, y in zip(a, b)])


def upoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def upoly_diff(a, k=1):
    for _ in range(k):
        a = [i * c for i, c in enumerate(a)][1:]
    return _trim(a)


def _trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _power(a, e):
    out = [Fraction(1)]
    for _ in range(e):
        out = upoly_mul(out, a)
    return out


def compose(expr, curve):
    """Substitute u^i = curve[i] (coefficient lists in x) into a polynomial expression."""
    ring = expr.ring
    acc = []
    for mono, c in expr.terms.items():
        assert c.den.is_constant(), "oracle handles polynomial coefficients only"
        scale = Fraction(1) / c.den.constant_value()
        coeff = []
        for key, a in c.num.terms.items():
            t = [Fraction(a) * scale]
            for i, e in enumerate(ring.unpack(key)):
                t = upoly_mul(t, _power(curve[i], e))
            coeff = upoly_add(coeff, t)
        for (i, s), e in mono:
            coeff = upoly_mul(coeff, _power(upoly_diff(curve[i], s), e))
        acc = upoly_add(acc, coeff)
    return acc


def euler_operator(f, n):
    """Direct sum (-1)^t d^t (df/du^i_t), no Horner rearrangement."""
    out = []
    for i in range(n):
        acc = type(f).zero(f.ring)
        for t in range(f.max_order() + 1):
            acc = acc + total_derivative(jet_partial(f, i, t), t) * (-1) ** t
        out.append(acc)
    return tuple(out)


def higher_identity_rhs(e, p, t, k):
    """sum_{l=max(0,k-t)}^{k} C(k,l) d^l (de/du^p_{t-k+l})."""
    acc = type(e).zero(e.ring)
    for l in range(max(0, k - t), k + 1):
        acc = acc + total_derivative(jet_partial(e, p, t - k + l), l) * comb(k, l)
    return acc
