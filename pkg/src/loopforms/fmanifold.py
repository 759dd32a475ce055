"""F-manifolds with compatible flat connection and principal-hierarchy checks.

Index conventions are 0-based: ``c[i][j][k]`` is c^i_{jk} and
``gamma[i][j][k]`` is Gamma^i_{jk}.  Every check returns a verdict together
with a dict of the nonvanishing defect entries keyed by index tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError, UnsupportedInputError
from .fields import EvField
from .forms import OneForm
from .jet import JetExpression
from .linalg import Matrix, matmul, matrix_inverse, transpose
from .poisson import MetricData, Tensor3, bracket, raise_christoffel
from .poly import PolyRing
from .ratfun import RatFun


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    defects: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def _z(ring) -> RatFun:
    return RatFun.const(ring, 0)


def _cube(n, fill):
    return [[[fill] * n for _ in range(n)] for _ in range(n)]


def _freeze(t) -> Tensor3:
    return tuple(tuple(tuple(r) for r in m) for m in t)


class ProductStructure:
    """Structure constants c^i_{jk} of the product on tangent spaces."""

    def __init__(self, c):
        n = len(c)
        if any(len(m) != n or any(len(r) != n for r in m) for m in c):
            raise InputError("product tensor must be n x n x n")
        self.c = _freeze(c)
        self.n = n
        self.ring = self.c[0][0][0].ring

    def check_commutativity(self) -> CheckResult:
        d = {}
        c, n = self.c, self.n
        for i in range(n):
            for j in range(n):
                for k in range(j + 1, n):
                    x = c[i][j][k] - c[i][k][j]
                    if not x.is_zero():
                        d[(i, j, k)] = x
        return CheckResult("commutativity", not d, d)

    def check_associativity(self) -> CheckResult:
        """c^i_{jm} c^m_{kl} = c^i_{km} c^m_{jl}."""
        d = {}
        c, n = self.c, self.n
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        acc = _z(self.ring)
                        for m in range(n):
                            if not c[i][j][m].is_zero() and not c[m][k][l].is_zero():
                                acc = acc + c[i][j][m] * c[m][k][l]
                            if not c[i][k][m].is_zero() and not c[m][j][l].is_zero():
                                acc = acc - c[i][k][m] * c[m][j][l]
                        if not acc.is_zero():
                            d[(i, j, k, l)] = acc
        return CheckResult("associativity", not d, d)


class ConnectionData:
    """A torsion-free affine connection Gamma^i_{jk}."""

    def __init__(self, gamma):
        n = len(gamma)
        self.gamma = _freeze(gamma)
        self.n = n
        self.ring = self.gamma[0][0][0].ring
        for i in range(n):
            for j in range(n):
                for k in range(j + 1, n):
                    if self.gamma[i][j][k] != self.gamma[i][k][j]:
                        raise InputError(f"connection is not symmetric at {(i, j, k)}")

    def curvature(self) -> CheckResult:
        """R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{km} G^m_{lj} - G^i_{lm} G^m_{kj}."""
        G, n = self.gamma, self.n
        d = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(k + 1, n):
                        acc = G[i][l][j].diff(k) - G[i][k][j].diff(l)
                        for m in range(n):
                            if not G[i][k][m].is_zero() and not G[m][l][j].is_zero():
                                acc = acc + G[i][k][m] * G[m][l][j]
                            if not G[i][l][m].is_zero() and not G[m][k][j].is_zero():
                                acc = acc - G[i][l][m] * G[m][k][j]
                        if not acc.is_zero():
                            d[(i, j, k, l)] = acc
        return CheckResult("flatness", not d, d)

    def nabla_covector(self, w: Sequence[RatFun]):
        """A[k][h] = nabla_k w_h."""
        G, n = self.gamma, self.n
        A = [[None] * n for _ in range(n)]
        for k in range(n):
            for h in range(n):
                acc = w[h].diff(k)
                for s in range(n):
                    if not G[s][k][h].is_zero() and not w[s].is_zero():
                        acc = acc - G[s][k][h] * w[s]
                A[k][h] = acc
        return A

    def nabla_vector(self, X: Sequence[RatFun]):
        """A[j][i] = nabla_j X^i."""
        G, n = self.gamma, self.n
        A = [[None] * n for _ in range(n)]
        for j in range(n):
            for i in range(n):
                acc = X[i].diff(j)
                for k in range(n):
                    if not G[i][j][k].is_zero() and not X[k].is_zero():
                        acc = acc + G[i][j][k] * X[k]
                A[j][i] = acc
        return A

    def nabla_product(self, c: Tensor3):
        """D[l][i][j][k] = nabla_l c^i_{jk}."""
        G, n = self.gamma, self.n
        D = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for l in range(n):
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        acc = c[i][j][k].diff(l)
                        for m in range(n):
                            if not G[i][l][m].is_zero() and not c[m][j][k].is_zero():
                                acc = acc + G[i][l][m] * c[m][j][k]
                            if not G[m][l][j].is_zero() and not c[i][m][k].is_zero():
                                acc = acc - G[m][l][j] * c[i][m][k]
                            if not G[m][l][k].is_zero() and not c[i][j][m].is_zero():
                                acc = acc - G[m][l][k] * c[i][j][m]
                        D[l][i][j][k] = acc
        return D


@dataclass
class StructureSpec:
    n: int
    coords: tuple[str, ...]
    connection: ConnectionData
    product: ProductStructure
    metric: MetricData | None = None
    map: tuple[RatFun, ...] | None = None
    eta: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        self.coords = tuple(self.coords)
        if len(self.coords) != self.n or self.connection.n != self.n or self.product.n != self.n:
            raise InputError("dimension mismatch in structure")
        if self.metric is not None and self.metric.n != self.n:
            raise InputError("dimension mismatch between metric and structure")
        if self.map is not None and len(self.map) != self.n:
            raise InputError("coordinate map has the wrong length")

    @property
    def ring(self) -> PolyRing:
        return self.connection.ring


@dataclass(frozen=True)
class HierarchyForm:
    label: tuple[int, int]
    form: OneForm

    def __post_init__(self):
        if not all(c.is_ratfun() for c in self.form.components):
            raise InputError("hierarchy forms have point-function coefficients")

    @property
    def coefficients(self) -> tuple[RatFun, ...]:
        return tuple(c.as_ratfun() for c in self.form.components)


def check_compatibility(conn: ConnectionData, prod: ProductStructure) -> CheckResult:
    """nabla_l c^i_{jk} = nabla_j c^i_{lk}."""
    D = conn.nabla_product(prod.c)
    n = conn.n
    d = {}
    for l in range(n):
        for i in range(n):
            for j in range(l + 1, n):
                for k in range(n):
                    x = D[l][i][j][k] - D[j][i][l][k]
                    if not x.is_zero():
                        d[(l, i, j, k)] = x
    return CheckResult("compatibility", not d, d)


def check_fmanifold(spec: StructureSpec) -> list[CheckResult]:
    return [
        spec.product.check_commutativity(),
        spec.product.check_associativity(),
        spec.connection.curvature(),
        check_compatibility(spec.connection, spec.product),
    ]


def check_metric_connection(spec: StructureSpec) -> CheckResult:
    """The metric's Levi-Civita symbols coincide with the structure connection."""
    if spec.metric is None:
        raise InputError("structure has no metric")
    d = {}
    n = spec.n
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                x = spec.metric.gamma_lc[i][j][k] - spec.connection.gamma[i][j][k]
                if not x.is_zero():
                    d[(i, j, k)] = x
    return CheckResult("metric-connection", not d, d)


def check_invariance(g: MetricData, c: ProductStructure) -> CheckResult:
    """c^i_{jk} g^{kl} = c^l_{jk} g^{ki}."""
    n = g.n
    G = g.g_contra
    d = {}
    for i in range(n):
        for j in range(n):
            for l in range(i + 1, n):
                acc = _z(g.ring)
                for k in range(n):
                    if not c.c[i][j][k].is_zero() and not G[k][l].is_zero():
                        acc = acc + c.c[i][j][k] * G[k][l]
                    if not c.c[l][j][k].is_zero() and not G[k][i].is_zero():
                        acc = acc - c.c[l][j][k] * G[k][i]
                if not acc.is_zero():
                    d[(i, j, l)] = acc
    return CheckResult("invariance", not d, d)


def _point_components(obj) -> tuple[RatFun, ...]:
    if isinstance(obj, HierarchyForm):
        return obj.coefficients
    comps = obj.components
    if not all(c.is_ratfun() for c in comps):
        raise UnsupportedInputError("coefficients must be point functions")
    return tuple(c.as_ratfun() for c in comps)


def verify_recursion(spec: StructureSpec, nxt, prev) -> CheckResult:
    """Forms: nabla_k w'_h = g_{ih} c^i_{kl} g^{lm} w_m.  Fields: nabla_j X'^i = c^i_{jk} X^k."""
    n, c = spec.n, spec.product.c
    ring = spec.ring
    a = _point_components(nxt)
    b = _point_components(prev)
    d = {}
    if isinstance(nxt, (HierarchyForm, OneForm)):
        if spec.metric is None:
            raise InputError("form recursion needs a metric")
        g, gi = spec.metric.g_cov, spec.metric.g_contra
        # v^l = g^{lm} w_m
        v = [sum((gi[l][m] * b[m] for m in range(n) if not b[m].is_zero()), _z(ring)) for l in range(n)]
        lhs = spec.connection.nabla_covector(a)
        for k in range(n):
            # y^i = c^i_{kl} v^l
            y = [sum((c[i][k][l] * v[l] for l in range(n) if not c[i][k][l].is_zero()), _z(ring))
                 for i in range(n)]
            for h in range(n):
                rhs = sum((g[i][h] * y[i] for i in range(n) if not y[i].is_zero()), _z(ring))
                x = lhs[k][h] - rhs
                if not x.is_zero():
                    d[(k, h)] = x
        return CheckResult("recursion", not d, d)
    lhs = spec.connection.nabla_vector(a)
    for j in range(n):
        for i in range(n):
            rhs = sum((c[i][j][k] * b[k] for k in range(n) if not c[i][j][k].is_zero()), _z(ring))
            x = lhs[j][i] - rhs
            if not x.is_zero():
                d[(j, i)] = x
    return CheckResult("recursion", not d, d)


def check_av_symmetry(spec: StructureSpec, X: EvField) -> CheckResult:
    """c^i_{jm} nabla_k X^m = c^i_{km} nabla_j X^m."""
    n, c = spec.n, spec.product.c
    A = spec.connection.nabla_vector(_point_components(X))
    d = {}
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                acc = _z(spec.ring)
                for m in range(n):
                    if not c[i][j][m].is_zero():
                        acc = acc + c[i][j][m] * A[k][m]
                    if not c[i][k][m].is_zero():
                        acc = acc - c[i][k][m] * A[j][m]
                if not acc.is_zero():
                    d[(i, j, k)] = acc
    return CheckResult("av-symmetry", not d, d)


def build_flow(c: ProductStructure, X: EvField) -> EvField:
    """xi^i = c^i_{jk} X^k u^j_x."""
    n = c.n
    ring = c.ring
    x = _point_components(X)
    out = []
    for i in range(n):
        acc = JetExpression(ring)
        for j in range(n):
            w = sum((c.c[i][j][k] * x[k] for k in range(n) if not c.c[i][j][k].is_zero() and not x[k].is_zero()),
                    _z(ring))
            if not w.is_zero():
                acc = acc + JetExpression.jet(ring, j, 1) * w
        out.append(acc)
    return EvField(out)


def raise_index(M: MetricData, form: OneForm) -> EvField:
    """X^i = g^{ij} w_j."""
    w = form.components
    out = []
    for i in range(M.n):
        acc = JetExpression(M.ring)
        for j in range(M.n):
            if not M.g_contra[i][j].is_zero() and not w[j].is_zero():
                acc = acc + w[j] * M.g_contra[i][j]
        out.append(acc)
    return EvField(out)


def jacobian(tmap: Sequence[RatFun]) -> Matrix:
    """J[a][i] = d t^a / d u^i."""
    n = len(tmap)
    return tuple(tuple(t.diff(i) for i in range(n)) for t in tmap)


def pullback_metric(tmap: Sequence[RatFun], eta) -> MetricData:
    """Metric g = J^T eta J induced by a map to coordinates with constant metric eta.

    The Levi-Civita symbols are obtained from the map directly,
    Gamma^i_{jk} = (J^-1)^i_a d_j d_k t^a, which holds because eta is constant.
    """
    tmap = tuple(tmap)
    n = len(tmap)
    ring = tmap[0].ring
    E = tuple(tuple(x if isinstance(x, RatFun) else RatFun.const(ring, x) for x in row) for row in eta)
    if len(E) != n:
        raise InputError("eta has the wrong size")
    J = jacobian(tmap)
    Jinv = matrix_inverse(J)
    g_cov = matmul(matmul(transpose(J), E), J)
    Einv = matrix_inverse(E)
    g_contra = matmul(matmul(Jinv, Einv), transpose(Jinv))
    hess = [[[tmap[a].diff(j).diff(k) for k in range(n)] for j in range(n)] for a in range(n)]
    gamma = _cube(n, _z(ring))
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                acc = _z(ring)
                for a in range(n):
                    if not Jinv[i][a].is_zero() and not hess[a][j][k].is_zero():
                        acc = acc + Jinv[i][a] * hess[a][j][k]
                gamma[i][j][k] = gamma[i][k][j] = acc
    gamma = _freeze(gamma)
    return MetricData(g_contra, gamma, g_cov, raise_christoffel(g_contra, gamma))


def epsilon_connection(ring: PolyRing, eps) -> Tensor3:
    n = len(ring.names)
    eps = Fraction(eps)
    u = [RatFun.gen(ring, i) for i in range(n)]
    G = _cube(n, _z(ring))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = (u[i] - u[j]).inverse() * eps
            G[i][j][i] = G[i][i][j] = v
            G[i][j][j] = -v
        acc = _z(ring)
        for k in range(n):
            if k != i:
                acc = acc + G[i][i][k]
        G[i][i][i] = -acc
    return _freeze(G)


def diagonal_product(ring: PolyRing) -> Tensor3:
    n = len(ring.names)
    one, zero = RatFun.const(ring, 1), _z(ring)
    return _freeze([[[one if i == j == k else zero for k in range(n)] for j in range(n)] for i in range(n)])


EPSILON3_MAP = (
    "u1 + u2 + u3",
    "1/(2*(u1-u2)*(u3-u1))",
    "1/(2*(u1-u2)*(u2-u3))",
)
ANTIDIAGONAL3 = ((0, 0, 1), (0, 1, 0), (1, 0, 0))


def epsilon_system(n: int, eps=1) -> StructureSpec:
    """The epsilon-system in canonical coordinates u1..un.

    For n = 3 and eps = 1 the flat-coordinate map and the antidiagonal metric
    are attached, together with the induced metric.
    """
    if n < 2:
        raise InputError("epsilon-system needs n >= 2")
    coords = tuple(f"u{i + 1}" for i in range(n))
    ring = PolyRing(coords)
    spec = StructureSpec(n, coords, ConnectionData(epsilon_connection(ring, eps)),
                         ProductStructure(diagonal_product(ring)))
    if n == 3 and Fraction(eps) == 1:
        from .parser import parse_ratfun

        spec.map = tuple(parse_ratfun(s, ring) for s in EPSILON3_MAP)
        spec.eta = tuple(tuple(Fraction(x) for x in row) for row in ANTIDIAGONAL3)
        spec.metric = pullback_metric(spec.map, spec.eta)
    return spec


def involution_check(M: MetricData, w1, w2) -> OneForm:
    """Bracket of two point-coefficient forms; zero certifies involution."""
    a = w1.form if isinstance(w1, HierarchyForm) else w1
    b = w2.form if isinstance(w2, HierarchyForm) else w2
    return bracket(M, a, b, "hydro")
