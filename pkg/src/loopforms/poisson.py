"""Hydrodynamic Poisson operators P = g^{ij} d_x + Gamma^{ij}_k u^k_x and the
Poisson bracket on reduced 1-forms.

Tensor index conventions (all 0-based):

* ``g[i][j]``            g^{ij}
* ``gamma_lc[i][j][k]``  Gamma^i_{jk}
* ``gamma_contra[i][j][k]``  Gamma^{ij}_k = -g^{il} Gamma^j_{lk}
"""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

from .errors import InputError, ModeError, SingularMatrixError, UnsupportedInputError
from .fields import EvField, ev_commutator
from .forms import FunctionalDensity, OneForm, contract, delta_form, pairing
from .jet import JetExpression, jet_partial, total_derivative, variational_derivative
from .linalg import Matrix, as_matrix, is_symmetric, matrix_inverse
from .poly import PolyRing
from .ratfun import RatFun

Tensor3 = tuple[tuple[tuple[RatFun, ...], ...], ...]

MODES = ("definition", "flat", "general", "hydro")


def _zero(ring) -> RatFun:
    return RatFun.const(ring, 0)


def _tensor3(data, n) -> Tensor3:
    t = tuple(tuple(tuple(data[i][j][k] for k in range(n)) for j in range(n)) for i in range(n))
    return t


def levi_civita(g_cov: Matrix, g_contra: Matrix) -> Tensor3:
    """Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{lj} - d_l g_{jk})."""
    n = len(g_cov)
    ring = g_cov[0][0].ring
    half = RatFun.const(ring, 1) / 2
    dg = [[[g_cov[a][b].diff(c) for c in range(n)] for b in range(n)] for a in range(n)]
    low = [[[half * (dg[l][k][j] + dg[l][j][k] - dg[j][k][l]) for k in range(n)] for j in range(n)] for l in range(n)]
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                acc = _zero(ring)
                for l in range(n):
                    if not g_contra[i][l].is_zero() and not low[l][j][k].is_zero():
                        acc = acc + g_contra[i][l] * low[l][j][k]
                out[i][j][k] = out[i][k][j] = acc
    return _tensor3(out, n)


def raise_christoffel(g_contra: Matrix, gamma_lc: Tensor3) -> Tensor3:
    """Gamma^{ij}_k = -g^{il} Gamma^j_{lk}."""
    n = len(g_contra)
    ring = g_contra[0][0].ring
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = _zero(ring)
                for l in range(n):
                    if not g_contra[i][l].is_zero() and not gamma_lc[j][l][k].is_zero():
                        acc = acc - g_contra[i][l] * gamma_lc[j][l][k]
                out[i][j][k] = acc
    return _tensor3(out, n)


class MetricData:
    """Contravariant metric with its Christoffel symbols.

    Build with :meth:`from_contravariant` or :meth:`from_covariant`; the
    Levi-Civita symbols are computed when not supplied.
    """

    def __init__(self, g_contra: Matrix, gamma_lc: Tensor3, g_cov: Matrix | None = None,
                 gamma_contra: Tensor3 | None = None):
        g_contra = as_matrix(g_contra)
        n = len(g_contra)
        if n == 0:
            raise InputError("empty metric")
        if not is_symmetric(g_contra):
            raise InputError("metric is not symmetric")
        self.ring: PolyRing = g_contra[0][0].ring
        self.n = n
        self.g_contra = g_contra
        self.gamma_lc = _tensor3(gamma_lc, n)
        self._g_cov = as_matrix(g_cov) if g_cov is not None else None
        self.gamma_contra = (_tensor3(gamma_contra, n) if gamma_contra is not None
                             else raise_christoffel(g_contra, self.gamma_lc))

    @classmethod
    def from_contravariant(cls, g_contra, gamma_lc=None) -> "MetricData":
        g_contra = as_matrix(g_contra)
        g_cov = matrix_inverse(g_contra)
        if gamma_lc is None:
            gamma_lc = levi_civita(g_cov, g_contra)
        return cls(g_contra, gamma_lc, g_cov)

    @classmethod
    def from_covariant(cls, g_cov, gamma_lc=None) -> "MetricData":
        g_cov = as_matrix(g_cov)
        g_contra = matrix_inverse(g_cov)
        if gamma_lc is None:
            gamma_lc = levi_civita(g_cov, g_contra)
        return cls(g_contra, gamma_lc, g_cov)

    @classmethod
    def constant(cls, ring: PolyRing, eta: Sequence[Sequence]) -> "MetricData":
        n = len(eta)
        g = as_matrix([[RatFun.const(ring, x) if not isinstance(x, RatFun) else x for x in row] for row in eta])
        if not g[0][0].is_constant() or not all(x.is_constant() for row in g for x in row):
            raise InputError("constant metric expected")
        z = _zero(ring)
        gamma = [[[z] * n for _ in range(n)] for _ in range(n)]
        return cls.from_contravariant(g, gamma)

    @property
    def g_cov(self) -> Matrix:
        if self._g_cov is None:
            self._g_cov = matrix_inverse(self.g_contra)
        return self._g_cov

    @cached_property
    def is_constant(self) -> bool:
        return (all(x.is_constant() for row in self.g_contra for x in row)
                and all(x.is_zero() for a in self.gamma_contra for b in a for x in b))

    @cached_property
    def flat_flag(self) -> bool:
        return check_flat(self)[0]

    def check_compatibility(self) -> tuple[bool, dict]:
        """d_k g^{ij} = Gamma^{ij}_k + Gamma^{ji}_k."""
        defects = {}
        n = self.n
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    d = self.g_contra[i][j].diff(k) - self.gamma_contra[i][j][k] - self.gamma_contra[j][i][k]
                    if not d.is_zero():
                        defects[(i, j, k)] = d
        return not defects, defects


def check_flat(M: MetricData) -> tuple[bool, dict]:
    """Zero-curvature test in contravariant form; returns (verdict, defects)."""
    n = M.n
    g, G = M.g_contra, M.gamma_contra
    try:
        M.g_cov
    except SingularMatrixError:
        raise
    dG = [[[[G[j][k][l].diff(s) for s in range(n)] for l in range(n)] for k in range(n)] for j in range(n)]
    defects = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    acc = _zero(M.ring)
                    for s in range(n):
                        if not g[i][s].is_zero():
                            t = dG[j][k][l][s] - dG[j][k][s][l]
                            if not t.is_zero():
                                acc = acc + g[i][s] * t
                        if not G[i][j][s].is_zero() and not G[s][k][l].is_zero():
                            acc = acc - G[i][j][s] * G[s][k][l]
                        if not G[i][k][s].is_zero() and not G[s][j][l].is_zero():
                            acc = acc + G[i][k][s] * G[s][j][l]
                    if not acc.is_zero():
                        defects[(i, j, k, l)] = acc
    return not defects, defects


def _check_ring(M: MetricData, *objs):
    for o in objs:
        if o.ring != M.ring:
            raise InputError("form and metric use different coordinates")


def apply_P(M: MetricData, alpha: OneForm) -> EvField:
    """(P alpha)^i = g^{ij} d_x alpha_j + Gamma^{ij}_k u^k_x alpha_j."""
    _check_ring(M, alpha)
    ring, n = M.ring, M.n
    a = alpha.components
    da = [total_derivative(c) for c in a]
    ux = [JetExpression.jet(ring, k, 1) for k in range(n)]
    out = []
    for i in range(n):
        acc = JetExpression(ring)
        for j in range(n):
            if not M.g_contra[i][j].is_zero() and not da[j].is_zero():
                acc = acc + da[j] * M.g_contra[i][j]
            if a[j].is_zero():
                continue
            w = JetExpression(ring)
            for k in range(n):
                gk = M.gamma_contra[i][j][k]
                if not gk.is_zero():
                    w = w + ux[k] * gk
            if not w.is_zero():
                acc = acc + w * a[j]
        out.append(acc)
    return EvField(out)


def lie_derivative(X: EvField, alpha: OneForm) -> OneForm:
    """Reduced Lie derivative of a reduced 1-form along an evolutionary field.

    Components: sum d_x^s(X^k) d(alpha_i)/du^k_(s)
    + sum (-1)^s d_x^s [alpha_k dX^k/du^i_(s)].
    """
    ring, n = alpha.ring, alpha.n
    a = alpha.components
    prolong: dict = {}

    def dX(k, s):
        if (k, s) not in prolong:
            prolong[(k, s)] = total_derivative(X.components[k], s)
        return prolong[(k, s)]

    first = []
    for i in range(n):
        acc = JetExpression(ring)
        slots = {(k, 0) for k in range(n)} | a[i].jet_variables()
        for k, s in sorted(slots):
            d = jet_partial(a[i], k, s)
            if not d.is_zero() and not X.components[k].is_zero():
                acc = acc + dX(k, s) * d
        first.append(acc)
    general: dict = {}
    for k in range(n):
        if a[k].is_zero():
            continue
        Xk = X.components[k]
        slots = {(i, 0) for i in range(n)} | Xk.jet_variables()
        for i, s in slots:
            d = jet_partial(Xk, i, s)
            if d.is_zero():
                continue
            term = a[k] * d
            general[(i, s)] = general[(i, s)] + term if (i, s) in general else term
    second = OneForm(ring, general).components
    return OneForm.from_components([f + s for f, s in zip(first, second)])


def lie_derivative_P(M: MetricData, beta: OneForm, alpha: OneForm) -> OneForm:
    """Lie derivative of alpha along P beta, for a constant metric."""
    if not M.is_constant:
        raise UnsupportedInputError("lie_derivative_P needs a constant metric; use bracket(mode='general')")
    _check_ring(M, alpha, beta)
    return lie_derivative(apply_P(M, beta), alpha)


def cartan_defect(M: MetricData, alpha: OneForm, beta: OneForm) -> OneForm:
    """Lie_{P beta} alpha - i_{P beta} delta alpha - delta <alpha, P beta>."""
    X = apply_P(M, beta)
    lie = lie_derivative_P(M, beta, alpha)
    contracted = contract(delta_form(alpha), X)
    exact = pairing(alpha, X).delta()
    return lie - OneForm.from_components(contracted.components) - exact


def _require_constant(M: MetricData, mode: str):
    if not M.is_constant:
        raise ModeError(f"mode {mode!r} needs a constant metric")


def _bracket_definition(M, alpha, beta) -> OneForm:
    Pa = apply_P(M, alpha)
    Pb = apply_P(M, beta)
    return lie_derivative(Pb, alpha) - lie_derivative(Pa, beta) + pairing(beta, Pa).delta()


def _bracket_flat(M, alpha, beta) -> OneForm:
    ring, n = M.ring, M.n
    a, b = alpha.components, beta.components
    eta = M.g_contra
    # V_a^k = eta^{kl} d_x alpha_l, and prolongations d_x^s V^k
    Va = [sum((total_derivative(a[l]) * eta[k][l] for l in range(n) if not eta[k][l].is_zero()),
              JetExpression(ring)) for k in range(n)]
    Vb = [sum((total_derivative(b[l]) * eta[k][l] for l in range(n) if not eta[k][l].is_zero()),
              JetExpression(ring)) for k in range(n)]
    return OneForm.from_components([
        _transport(Vb, a[j]) - _transport(Va, b[j]) for j in range(n)
    ])


def _transport(V: Sequence[JetExpression], f: JetExpression) -> JetExpression:
    """sum_{k,s} d_x^s(V^k) df/du^k_(s)."""
    ring = f.ring
    n = len(V)
    acc = JetExpression(ring)
    slots = {(k, 0) for k in range(n)} | f.jet_variables()
    for k, s in sorted(slots):
        if V[k].is_zero():
            continue
        d = jet_partial(f, k, s)
        if not d.is_zero():
            acc = acc + total_derivative(V[k], s) * d
    return acc


def _general_tensor(M: MetricData):
    """T[k][l][i][m] = Gamma^k_{is} Gamma^{sl}_m - Gamma^l_{is} Gamma^{sk}_m."""
    n = M.n
    L, G = M.gamma_lc, M.gamma_contra
    z = _zero(M.ring)
    T = [[[[z] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for l in range(n):
            for i in range(n):
                for m in range(n):
                    acc = z
                    for s in range(n):
                        if not L[k][i][s].is_zero() and not G[s][l][m].is_zero():
                            acc = acc + L[k][i][s] * G[s][l][m]
                        if not L[l][i][s].is_zero() and not G[s][k][m].is_zero():
                            acc = acc - L[l][i][s] * G[s][k][m]
                    T[k][l][i][m] = acc
    return T


def _bracket_general(M, alpha, beta) -> OneForm:
    ring, n = M.ring, M.n
    a, b = alpha.components, beta.components
    Pa = apply_P(M, alpha).components
    Pb = apply_P(M, beta).components
    da = [total_derivative(c) for c in a]
    db = [total_derivative(c) for c in b]
    ux = [JetExpression.jet(ring, m, 1) for m in range(n)]
    T = _general_tensor(M)
    out = []
    for i in range(n):
        acc = _transport(Pb, a[i]) - _transport(Pa, b[i])
        for k in range(n):
            for l in range(n):
                G = M.gamma_contra[l][k][i]
                if not G.is_zero():
                    w = a[k] * db[l] - b[k] * da[l]
                    if not w.is_zero():
                        acc = acc + w * G
                ab = a[k] * b[l]
                if ab.is_zero():
                    continue
                v = JetExpression(ring)
                for m in range(n):
                    if not T[k][l][i][m].is_zero():
                        v = v + ux[m] * T[k][l][i][m]
                if not v.is_zero():
                    acc = acc - ab * v
        out.append(acc)
    return OneForm.from_components(out)


def _covariant_grad(M: MetricData, w: Sequence[RatFun]):
    """A[k][i] = nabla_k w_i = d_k w_i - Gamma^s_{ki} w_s."""
    n = M.n
    L = M.gamma_lc
    A = [[None] * n for _ in range(n)]
    for k in range(n):
        for i in range(n):
            acc = w[i].diff(k)
            for s in range(n):
                if not L[s][k][i].is_zero() and not w[s].is_zero():
                    acc = acc - L[s][k][i] * w[s]
            A[k][i] = acc
    return A


def _mat3(X, Y, Z, n, ring):
    """X * Y * Z for n x n lists, skipping zeros."""
    z = _zero(ring)

    def mul(P, Q):
        R = [[z] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = z
                for k in range(n):
                    if not P[i][k].is_zero() and not Q[k][j].is_zero():
                        acc = acc + P[i][k] * Q[k][j]
                R[i][j] = acc
        return R

    return mul(mul(X, Y), Z)


def _bracket_hydro(M, alpha, beta) -> OneForm:
    ring, n = M.ring, M.n
    try:
        a = [c.as_ratfun() for c in alpha.components]
        b = [c.as_ratfun() for c in beta.components]
    except InputError:
        raise UnsupportedInputError("hydro mode needs coefficients free of jet variables") from None
    A = _covariant_grad(M, a)
    B = _covariant_grad(M, b)
    g = M.g_contra
    # coefficient of u^m_x in component i: (B g A - A g B)[m][i]
    BgA = _mat3(B, g, A, n, ring)
    AgB = _mat3(A, g, B, n, ring)
    ux = [JetExpression.jet(ring, m, 1) for m in range(n)]
    out = []
    for i in range(n):
        acc = JetExpression(ring)
        for m in range(n):
            c = BgA[m][i] - AgB[m][i]
            if not c.is_zero():
                acc = acc + ux[m] * c
        out.append(acc)
    return OneForm.from_components(out)


def bracket(M: MetricData, alpha: OneForm, beta: OneForm, mode: str = "flat") -> OneForm:
    """Poisson bracket {alpha, beta} of reduced 1-forms in the requested presentation."""
    _check_ring(M, alpha, beta)
    if mode == "definition":
        _require_constant(M, mode)
        return _bracket_definition(M, alpha, beta)
    if mode == "flat":
        _require_constant(M, mode)
        return _bracket_flat(M, alpha, beta)
    if mode == "general":
        if not M.flat_flag:
            raise ModeError("mode 'general' needs a flat metric")
        return _bracket_general(M, alpha, beta)
    if mode == "hydro":
        if not M.flat_flag:
            raise ModeError("mode 'hydro' needs a flat metric")
        return _bracket_hydro(M, alpha, beta)
    raise ModeError(f"unknown bracket mode {mode!r}; choose from {', '.join(MODES)}")


def functional_bracket(M: MetricData, f: FunctionalDensity, h: FunctionalDensity) -> FunctionalDensity:
    """Density of {f, h} = (delta f/delta u^i) P^{ij} (delta h/delta u^j)."""
    Ef = variational_derivative(f.density)
    Ph = apply_P(M, OneForm.from_components(variational_derivative(h.density)))
    acc = JetExpression(M.ring)
    for a, x in zip(Ef, Ph.components):
        if not a.is_zero() and not x.is_zero():
            acc = acc + a * x
    return FunctionalDensity(acc)


def antihom_defect(M: MetricData, alpha: OneForm, beta: OneForm) -> EvField:
    """P{alpha, beta} + [P alpha, P beta]; zero when the anti-homomorphism holds."""
    _require_constant(M, "flat")
    return apply_P(M, bracket(M, alpha, beta, "flat")) + ev_commutator(apply_P(M, alpha), apply_P(M, beta))


def jacobi_defect(M: MetricData, alpha: OneForm, beta: OneForm, gamma: OneForm) -> OneForm:
    """Cyclic sum of {., {., .}} in flat mode."""
    _require_constant(M, "flat")

    def br(x, y):
        return bracket(M, x, y, "flat")

    return br(alpha, br(beta, gamma)) + br(beta, br(gamma, alpha)) + br(gamma, br(alpha, beta))


def casimir_form(ring: PolyRing, i: int) -> OneForm:
    """delta of the functional u^i, the constant covector e_i."""
    n = len(ring.names)
    return OneForm.from_components([JetExpression.const(ring, 1 if j == i else 0) for j in range(n)])
