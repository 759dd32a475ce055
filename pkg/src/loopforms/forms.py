"""Loop-space 1-forms, 2-form representatives, contraction and the delta map.

A general 1-form is a finite sum alpha_i^(t) delta u^i_(t); its reduced
(standard) representative carries one coefficient per coordinate, obtained by
integrating by parts.  Two 1-forms are equal in Lambda_1 iff their reduced
coefficients coincide, which is what ``OneForm.__eq__`` tests.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import ContextError, InputError, UnsupportedInputError
from .jet import JetExpression, _dx, jet_partial, total_derivative, variational_derivative
from .linalg import Matrix
from .poly import PolyRing

Slot = tuple[int, int]  # (coordinate index, jet order)


class OneForm:
    """A 1-form given by general coefficients alpha_i^(t)."""

    __slots__ = ("ring", "general", "_reduced")

    def __init__(self, ring: PolyRing, general: Mapping[Slot, JetExpression]):
        n = len(ring.names)
        clean = {}
        for (i, t), c in general.items():
            if not 0 <= i < n or t < 0:
                raise InputError(f"invalid slot {(i, t)}")
            if c.ring != ring:
                raise ContextError(f"{c.ring} vs {ring}")
            if not c.is_zero():
                clean[(i, t)] = clean[(i, t)] + c if (i, t) in clean else c
        self.ring = ring
        self.general = {k: v for k, v in clean.items() if not v.is_zero()}
        self._reduced = None

    @classmethod
    def from_components(cls, comps: Sequence[JetExpression]) -> "OneForm":
        """Reduced form alpha_i delta u^i."""
        if not comps:
            raise InputError("a 1-form needs at least one component")
        ring = comps[0].ring
        if len(comps) != len(ring.names):
            raise InputError(f"expected {len(ring.names)} components, got {len(comps)}")
        form = cls(ring, {(i, 0): c for i, c in enumerate(comps)})
        form._reduced = tuple(comps)
        return form

    @classmethod
    def zero(cls, ring: PolyRing) -> "OneForm":
        return cls.from_components([JetExpression(ring)] * len(ring.names))

    @property
    def n(self) -> int:
        return len(self.ring.names)

    def is_reduced(self) -> bool:
        return all(t == 0 for _, t in self.general)

    @property
    def components(self) -> tuple[JetExpression, ...]:
        """Reduced coefficients alpha_i = sum_t (-1)^t d_x^t alpha_i^(t)."""
        if self._reduced is None:
            self._reduced = _reduce_components(self)
        return self._reduced

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm.from_components([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm.from_components([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return OneForm.from_components([-a for a in self.components])

    def __mul__(self, c) -> "OneForm":
        return OneForm.from_components([a * c for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.ring == other.ring and self.components == other.components

    __hash__ = None

    def __repr__(self):
        return "OneForm(" + ", ".join(str(c) for c in self.components) + ")"


def _reduce_components(form: OneForm) -> tuple[JetExpression, ...]:
    ring = form.ring
    out = []
    for i in range(form.n):
        orders = sorted((t for (j, t) in form.general if j == i), reverse=True)
        comp = JetExpression(ring)
        if orders:
            # Horner in d_x over t = top..0
            for t in range(orders[0], -1, -1):
                c = form.general.get((i, t))
                comp = -_dx(comp)
                if c is not None:
                    comp = comp + c
        out.append(comp)
    return tuple(out)


def reduce_form(alpha: OneForm) -> OneForm:
    return OneForm.from_components(alpha.components)


class TwoFormRep:
    """Antisymmetric array of coefficients w[(j,s),(i,t)].

    The represented form is (1/2) sum w[a,b] delta u^a ^ delta u^b over
    ordered pairs, so every unordered pair is stored twice with opposite signs.
    """

    __slots__ = ("ring", "entries")

    def __init__(self, ring: PolyRing, entries: Mapping[tuple[Slot, Slot], JetExpression] | None = None):
        self.ring = ring
        self.entries = {k: v for k, v in (entries or {}).items() if not v.is_zero()}

    def is_antisymmetric(self) -> bool:
        for (a, b), v in self.entries.items():
            w = self.entries.get((b, a))
            if w is None or not (v + w).is_zero():
                return False
        return True

    def is_zero(self) -> bool:
        return not self.entries


def delta_form(alpha: OneForm) -> TwoFormRep:
    """delta of a reduced 1-form: sum d(alpha_i)/du^j_(t) delta u^j_(t) ^ delta u^i."""
    ring = alpha.ring
    acc: dict = {}
    for i, a in enumerate(alpha.components):
        if a.is_zero():
            continue
        slots = {(j, 0) for j in range(alpha.n)} | a.jet_variables()
        for j, t in sorted(slots):
            d = jet_partial(a, j, t)
            if d.is_zero() or (j, t) == (i, 0):
                continue
            p, q = (j, t), (i, 0)
            acc[(p, q)] = acc[(p, q)] + d if (p, q) in acc else d
            acc[(q, p)] = acc[(q, p)] - d if (q, p) in acc else -d
    return TwoFormRep(ring, acc)


def contract(omega, xi) -> object:
    """i_xi omega: a density for a 1-form, a 1-form for a TwoFormRep."""
    if isinstance(omega, OneForm):
        return pairing(omega, xi)
    ring = omega.ring
    cache: dict = {}

    def prolong(j: int, s: int) -> JetExpression:
        key = (j, s)
        if key not in cache:
            cache[key] = total_derivative(xi.components[j], s)
        return cache[key]

    general: dict = {}
    for ((j, s), (i, t)), w in omega.entries.items():
        term = prolong(j, s) * w
        general[(i, t)] = general[(i, t)] + term if (i, t) in general else term
    return OneForm(ring, general)


class FunctionalDensity:
    """A density modulo total derivatives and constants."""

    __slots__ = ("density",)

    def __init__(self, density: JetExpression):
        self.density = density

    @property
    def ring(self) -> PolyRing:
        return self.density.ring

    def variational_derivative(self) -> tuple[JetExpression, ...]:
        return variational_derivative(self.density)

    def delta(self) -> OneForm:
        return OneForm.from_components(self.variational_derivative())

    def is_zero_class(self) -> bool:
        return all(c.is_zero() for c in self.variational_derivative())

    def equivalent(self, other: "FunctionalDensity") -> bool:
        return FunctionalDensity(self.density - other.density).is_zero_class()

    def __repr__(self):
        return f"FunctionalDensity({self.density})"


def pairing(alpha: OneForm, xi) -> FunctionalDensity:
    """<alpha, xi> = alpha_i xi^i for reduced alpha."""
    acc = JetExpression(alpha.ring)
    for a, x in zip(alpha.components, xi.components):
        if not a.is_zero() and not x.is_zero():
            acc = acc + a * x
    return FunctionalDensity(acc)


def exactness_defect(alpha: OneForm) -> Matrix:
    """Curl d_j alpha_i - d_i alpha_j of a 1-form with point-function coefficients."""
    comps = alpha.components
    if not all(c.is_ratfun() for c in comps):
        raise UnsupportedInputError("exactness defect needs coefficients free of jet variables")
    a = [c.as_ratfun() for c in comps]
    n = len(a)
    return tuple(tuple(a[i].diff(j) - a[j].diff(i) for j in range(n)) for i in range(n))
