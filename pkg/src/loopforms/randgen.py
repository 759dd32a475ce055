"""Seeded random inputs for the property checks.

Coefficients are polynomials in u with small integer coefficients; jet
monomials have degree at most ``jet_degree``.
"""

from __future__ import annotations

import itertools
import random

from .forms import FunctionalDensity, OneForm
from .jet import JetExpression
from .poly import PolyRing
from .ratfun import RatFun

DEFAULT_SEED = 20240601


def coord_names(n: int) -> list[str]:
    return [f"u{i + 1}" for i in range(n)]


def random_poly(rng: random.Random, ring: PolyRing, degree: int, terms: int = 3) -> RatFun:
    n = len(ring.names)
    exps = [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree]
    d = {}
    for _ in range(terms):
        e = rng.choice(exps)
        c = rng.randint(-3, 3)
        if c:
            d[e] = d.get(e, 0) + c
    return RatFun(ring.from_dict(d))


def random_jet(rng: random.Random, ring: PolyRing, order: int, degree: int,
               terms: int = 3, jet_degree: int = 2) -> JetExpression:
    """Random element of A with jet order <= order and coefficient degree <= degree."""
    n = len(ring.names)
    jets = [(i, s) for s in range(1, order + 1) for i in range(n)]
    acc = JetExpression(ring)
    for _ in range(terms):
        k = rng.randint(0, jet_degree if jets else 0)
        mono = JetExpression.const(ring, 1)
        for v in rng.sample(jets, min(k, len(jets))) if k else ():
            mono = mono * JetExpression.jet(ring, *v)
        acc = acc + mono * random_poly(rng, ring, degree, terms=2)
    return acc


def random_form(rng: random.Random, ring: PolyRing, order: int = 2, degree: int = 2,
                terms: int = 2) -> OneForm:
    n = len(ring.names)
    return OneForm.from_components([random_jet(rng, ring, order, degree, terms) for _ in range(n)])


def random_point_form(rng: random.Random, ring: PolyRing, degree: int = 2) -> OneForm:
    """Reduced form with coefficients depending only on u."""
    n = len(ring.names)
    return OneForm.from_components(
        [JetExpression.from_ratfun(random_poly(rng, ring, degree)) for _ in range(n)])


def random_density(rng: random.Random, ring: PolyRing, order: int = 1, degree: int = 2) -> FunctionalDensity:
    return FunctionalDensity(random_jet(rng, ring, order, degree, terms=3))


def random_constant_metric(rng: random.Random, n: int) -> list[list[int]]:
    """Symmetric integer matrix with nonzero determinant."""
    from fractions import Fraction

    while True:
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = rng.randint(-2, 2)
        if _det([[Fraction(x) for x in r] for r in m]) != 0:
            return m


def _det(a) -> object:
    n = len(a)
    a = [row[:] for row in a]
    det = 1
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det
