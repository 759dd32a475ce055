from fractions import Fraction

import pytest

from loopforms.errors import InputError, SingularMatrixError
from loopforms.fields import EvField
from loopforms.fmanifold import (
    ConnectionData,
    HierarchyForm,
    ProductStructure,
    StructureSpec,
    build_flow,
    check_av_symmetry,
    check_fmanifold,
    check_invariance,
    check_metric_connection,
    diagonal_product,
    epsilon_system,
    involution_check,
    pullback_metric,
    raise_index,
    verify_recursion,
)
from loopforms.forms import OneForm, exactness_defect
from loopforms.jet import JetExpression
from loopforms.linalg import matrix_inverse
from loopforms.parser import parse_expr, parse_ratfun
from loopforms.poisson import MetricData, apply_P, check_flat
from loopforms.poly import PolyRing
from loopforms.ratfun import RatFun
from loopforms.specfile import golden_epsilon3

EPS3 = epsilon_system(3, 1)
R3 = EPS3.ring
GOLDEN = golden_epsilon3()
R2 = PolyRing(["u1", "u2"])


def rf(src, ring=R3):
    return parse_ratfun(src, ring)


def point_form(srcs, ring=R3):
    return OneForm.from_components([parse_expr(s, ring) for s in srcs])


def golden_form(key):
    return point_form(GOLDEN["forms"][key])


def hf(key):
    return HierarchyForm((1, int(key[-1])), golden_form(key))


def field(*srcs, ring=R3):
    return EvField([parse_expr(s, ring) for s in srcs])


def zero_tensor(ring, n):
    z = RatFun.const(ring, 0)
    return tuple(tuple((z,) * n for _ in range(n)) for _ in range(n))


def toy_spec():
    """Diagonal product, zero connection, identity metric on R^2."""
    return StructureSpec(2, ("u1", "u2"), ConnectionData(zero_tensor(R2, 2)),
                         ProductStructure(diagonal_product(R2)), MetricData.constant(R2, [[1, 0], [0, 1]]))


# -- epsilon-system ----------------------------------------------------------------------

def test_epsilon_connection_entries():
    g = EPS3.connection.gamma
    assert g[0][1][0] == rf("1/(u1-u2)")
    assert g[0][0][1] == rf("1/(u1-u2)")
    assert g[0][1][1] == rf("-1/(u1-u2)")
    assert g[0][1][2].is_zero()
    assert g[0][0][0] == rf("-1/(u1-u2) - 1/(u1-u3)")


def test_epsilon_zero_is_flat_zero_connection():
    spec = epsilon_system(3, 0)
    assert all(x.is_zero() for m in spec.connection.gamma for r in m for x in r)
    assert spec.metric is None


def test_epsilon_dimension_error():
    with pytest.raises(InputError):
        epsilon_system(1)


def test_epsilon_structure_checks():
    assert all(r.passed for r in check_fmanifold(EPS3))
    assert check_flat(EPS3.metric)[0]
    assert EPS3.metric.check_compatibility()[0]
    assert check_metric_connection(EPS3).passed


def test_epsilon_other_parameters():
    spec = epsilon_system(4, Fraction(-1, 2))
    assert all(r.passed for r in check_fmanifold(spec))


def test_epsilon_metric_not_invariant():
    assert not check_invariance(EPS3.metric, EPS3.product).passed


# -- structure checks ------------------------------------------------------------------------

def test_toy_spec_passes():
    assert all(r.passed for r in check_fmanifold(toy_spec()))


def test_broken_commutativity():
    c = [[list(r) for r in m] for m in diagonal_product(R2)]
    c[0][0][1] = RatFun.const(R2, 1)
    spec = StructureSpec(2, ("u1", "u2"), ConnectionData(zero_tensor(R2, 2)), ProductStructure(c))
    results = {r.name: r.passed for r in check_fmanifold(spec)}
    assert results["commutativity"] is False


def test_asymmetric_connection_rejected():
    g = [[list(r) for r in m] for m in zero_tensor(R2, 2)]
    g[0][0][1] = RatFun.const(R2, 1)
    with pytest.raises(InputError):
        ConnectionData(g)


def test_invariance_examples():
    R1 = PolyRing(["u"])
    one = RatFun.const(R1, 1)
    assert check_invariance(MetricData.constant(R1, [[1]]), ProductStructure((((one,),),))).passed
    M = MetricData.from_contravariant([[rf("u1", R2), rf("0", R2)], [rf("0", R2), rf("u2^2 + 1", R2)]])
    assert check_invariance(M, ProductStructure(diagonal_product(R2))).passed


# -- pullback metrics ---------------------------------------------------------------------------

def test_pullback_identity_map():
    M = pullback_metric([rf("u1"), rf("u2"), rf("u3")], [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    assert M.g_cov == MetricData.constant(R3, [[0, 0, 1], [0, 1, 0], [1, 0, 0]]).g_cov
    assert all(x.is_zero() for m in M.gamma_lc for r in m for x in r)


def test_pullback_one_dimensional():
    R1 = PolyRing(["u"])
    M = pullback_metric([parse_ratfun("u^2/2", R1)], [[1]])
    assert M.g_cov[0][0] == parse_ratfun("u^2", R1)
    assert M.g_contra[0][0] == parse_ratfun("1/u^2", R1)


def test_pullback_singular_jacobian():
    with pytest.raises(SingularMatrixError):
        pullback_metric([rf("u1 + u2", R2), rf("2*u1 + 2*u2", R2)], [[1, 0], [0, 1]])


def _golden_table(name):
    return {k: rf(v) for k, v in GOLDEN[name].items()}


def _idx(key):
    return int(key[0]) - 1, int(key[1]) - 1


def test_covariant_table_against_pullback():
    # Four entries agree; g_12 and g_23 are printed with the opposite sign.
    table = _golden_table("metric_covariant")
    g = EPS3.metric.g_cov
    for key, val in table.items():
        i, j = _idx(key)
        if key in ("12", "23"):
            assert g[i][j] == -val
        else:
            assert g[i][j] == val


def test_contravariant_table_against_inverse():
    # All entries but g^33 agree; g^33 carries 4/3 where 14/3 belongs on u1*u2*u3^4.
    table = _golden_table("metric_contravariant")
    gi = matrix_inverse(EPS3.metric.g_cov)
    for key, val in table.items():
        i, j = _idx(key)
        if key == "33":
            assert gi[i][j] - val == rf("10/3*u1*u2*u3^4")
        else:
            assert gi[i][j] == val


def test_pullback_metric_oracle_at_points():
    # Direct evaluation of J^T eta J at rational points, independent of the symbolic path.
    J = [[t.diff(i) for i in range(3)] for t in EPS3.map]
    eta = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    for pt in ([Fraction(1), Fraction(3), Fraction(-2)], [Fraction(1, 2), Fraction(-5), Fraction(7, 3)]):
        Jn = [[x.evaluate(pt) for x in r] for r in J]
        for i in range(3):
            for j in range(3):
                expected = sum(Jn[a][i] * eta[a][b] * Jn[b][j] for a in range(3) for b in range(3))
                assert EPS3.metric.g_cov[i][j].evaluate(pt) == expected


# -- hierarchy data --------------------------------------------------------------------------------

def test_omega_1_0_is_scaled_gradient_of_t3():
    t3 = EPS3.map[2]
    for i, c in enumerate(golden_form("omega_1_0").components):
        assert c.as_ratfun() == 3 * t3.diff(i)


def test_recursion_first_step():
    assert verify_recursion(EPS3, hf("omega_1_1"), hf("omega_1_0")).passed


def test_recursion_broken_instance():
    comps = list(golden_form("omega_1_1").components)
    comps[0] = comps[0] * 2
    broken = HierarchyForm((1, 1), OneForm.from_components(comps))
    assert not verify_recursion(EPS3, broken, hf("omega_1_0")).passed


def test_omega_1_1_raises_to_half_sum_field():
    X = raise_index(EPS3.metric, golden_form("omega_1_1"))
    assert X == field("(u2+u3)/2", "(u1+u3)/2", "(u1+u2)/2")


def test_field_level_recursion():
    half = field("(u2+u3)/2", "(u1+u3)/2", "(u1+u2)/2")
    assert verify_recursion(EPS3, half, field("1", "1", "1")).passed
    assert not verify_recursion(EPS3, half * 2, field("1", "1", "1")).passed


def test_printed_omega_1_2_is_not_recursion_linked():
    # The listed second form does not solve the recursion from omega_1_1; only its
    # third component matches g(X) for X = (u2+u3, u1+u3, u1+u2).
    assert not verify_recursion(EPS3, hf("omega_1_2"), hf("omega_1_1")).passed
    g = EPS3.metric.g_cov
    X = [rf("u2+u3"), rf("u1+u3"), rf("u1+u2")]
    gX = [sum((g[i][l] * X[i] for i in range(3)), rf("0")) for l in range(3)]
    w12 = [c.as_ratfun() for c in golden_form("omega_1_2").components]
    assert [a == b for a, b in zip(w12, gX)] == [False, False, True]


def test_flows():
    M = EPS3.metric
    assert apply_P(M, golden_form("omega_1_1")) == field("u1_1", "u2_1", "u3_1")
    assert apply_P(M, golden_form("omega_1_2")) != field("(u2+u3)*u1_1", "(u1+u3)*u2_1", "(u1+u2)*u3_1")


def test_exactness_dichotomy():
    assert all(x.is_zero() for r in exactness_defect(golden_form("omega_1_1")) for x in r)
    assert not all(x.is_zero() for r in exactness_defect(golden_form("omega_1_2")) for x in r)


def test_build_flow_examples():
    c = EPS3.product
    assert build_flow(c, field("1", "1", "1")) == field("u1_1", "u2_1", "u3_1")
    X = field("u2+u3", "u1+u3", "u1+u2")
    assert build_flow(c, X) == field("(u2+u3)*u1_1", "(u1+u3)*u2_1", "(u1+u2)*u3_1")
    assert build_flow(c, EvField.zero(R3)).is_zero()


def test_flow_of_recursion_linked_form():
    # P(omega_next) = c(g^{-1} omega_prev) u_x on the first step of the chain.
    X10 = raise_index(EPS3.metric, golden_form("omega_1_0"))
    assert apply_P(EPS3.metric, golden_form("omega_1_1")) == build_flow(EPS3.product, X10)


def test_av_symmetry():
    assert check_av_symmetry(EPS3, field("1", "1", "1")).passed
    assert check_av_symmetry(EPS3, field("(u2+u3)/2", "(u1+u3)/2", "(u1+u2)/2")).passed
    assert not check_av_symmetry(EPS3, field("u1^2", "u3", "u1*u2")).passed


def test_involution_examples():
    M = EPS3.metric
    assert involution_check(M, hf("omega_1_1"), hf("omega_1_1")).is_zero()
    assert involution_check(M, hf("omega_1_1"), hf("omega_1_2")).is_zero()
    # omega_1_1 generates x-translations, which commute with every flow, so the
    # perturbation goes on omega_1_1 rather than omega_1_2.
    comps = list(golden_form("omega_1_1").components)
    comps[1] = comps[1] + parse_expr("u1", R3)
    perturbed = HierarchyForm((1, 1), OneForm.from_components(comps))
    assert not involution_check(M, perturbed, hf("omega_1_2")).is_zero()


def test_toy_chain_invariance_closedness_and_involution():
    spec = toy_spec()
    assert check_invariance(spec.metric, spec.product).passed
    chain = [point_form(s, R2) for s in (["1", "1"], ["u1", "u2"], ["u1^2/2", "u2^2/2"])]
    for prev, nxt in zip(chain, chain[1:]):
        assert verify_recursion(spec, nxt, prev).passed
        assert all(x.is_zero() for r in exactness_defect(nxt) for x in r)
    assert involution_check(spec.metric, chain[1], chain[2]).is_zero()


def test_hierarchy_form_rejects_jets():
    with pytest.raises(InputError):
        HierarchyForm((1, 0), point_form(["u1_1", "0", "0"]))


def test_hierarchy_form_coefficients():
    h = hf("omega_1_0")
    assert all(isinstance(c, RatFun) for c in h.coefficients)
    assert JetExpression.from_ratfun(h.coefficients[2]) == golden_form("omega_1_0").components[2]
