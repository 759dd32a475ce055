"""Evolutionary vector fields u^i_t = xi^i(u, u_x, ...) and their commutator."""

from __future__ import annotations

from typing import Sequence

from .errors import ContextError, InputError
from .jet import JetExpression, jet_partial, total_derivative


class EvField:
    __slots__ = ("ring", "components")

    def __init__(self, components: Sequence[JetExpression]):
        components = tuple(components)
        if not components:
            raise InputError("a field needs at least one component")
        ring = components[0].ring
        if len(components) != len(ring.names):
            raise InputError(f"expected {len(ring.names)} components, got {len(components)}")
        if any(c.ring != ring for c in components):
            raise ContextError("components over different coordinates")
        self.ring = ring
        self.components = components

    @classmethod
    def zero(cls, ring) -> "EvField":
        return cls([JetExpression(ring)] * len(ring.names))

    @property
    def n(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "EvField") -> "EvField":
        return EvField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "EvField") -> "EvField":
        return EvField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return EvField([-a for a in self.components])

    def __mul__(self, c) -> "EvField":
        return EvField([a * c for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, EvField):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __repr__(self):
        return "EvField(" + ", ".join(str(c) for c in self.components) + ")"


def _apply(xi: EvField, f: JetExpression) -> JetExpression:
    """The prolonged field sum_s d_x^s(xi^i) d/du^i_(s) acting on f."""
    acc = JetExpression(f.ring)
    slots = {(i, 0) for i in range(xi.n)} | f.jet_variables()
    for i, s in sorted(slots):
        d = jet_partial(f, i, s)
        if d.is_zero() or xi.components[i].is_zero():
            continue
        acc = acc + total_derivative(xi.components[i], s) * d
    return acc


def ev_commutator(xi: EvField, eta: EvField) -> EvField:
    """[xi, eta]^p = xi(eta^p) - eta(xi^p) for the prolonged fields."""
    if xi.ring != eta.ring:
        raise ContextError(f"{xi.ring} vs {eta.ring}")
    return EvField([_apply(xi, b) - _apply(eta, a) for a, b in zip(xi.components, eta.components)])


def apply_field(xi: EvField, f: JetExpression) -> JetExpression:
    """Derivative of f along the prolonged field xi."""
    return _apply(xi, f)
