"""Exact symbolic calculus for hydrodynamic Poisson brackets on loop-space 1-forms."""

from .errors import (
    ContextError,
    DivisionError,
    InputError,
    LoopFormsError,
    ModeError,
    ParseError,
    SemanticError,
    SingularMatrixError,
    UnsupportedInputError,
)
from .fields import EvField, ev_commutator
from .fmanifold import (
    ConnectionData,
    HierarchyForm,
    ProductStructure,
    StructureSpec,
    build_flow,
    check_av_symmetry,
    check_fmanifold,
    check_invariance,
    epsilon_system,
    involution_check,
    pullback_metric,
    verify_recursion,
)
from .forms import FunctionalDensity, OneForm, TwoFormRep, contract, delta_form, exactness_defect, pairing, reduce_form
from .jet import JetExpression, is_total_derivative, jet_partial, total_derivative, variational_derivative
from .linalg import matrix_inverse
from .parser import parse_expr
from .poisson import (
    MetricData,
    antihom_defect,
    apply_P,
    bracket,
    check_flat,
    functional_bracket,
    jacobi_defect,
    lie_derivative_P,
)
from .poly import PolyRing, SparsePoly
from .ratfun import RatFun, ratfun_equal, ratfun_normalize

__version__ = "0.1.0"

__all__ = [
    "ConnectionData",
    "ContextError",
    "DivisionError",
    "EvField",
    "FunctionalDensity",
    "HierarchyForm",
    "InputError",
    "JetExpression",
    "LoopFormsError",
    "MetricData",
    "ModeError",
    "OneForm",
    "ParseError",
    "PolyRing",
    "ProductStructure",
    "RatFun",
    "SemanticError",
    "SingularMatrixError",
    "SparsePoly",
    "StructureSpec",
    "TwoFormRep",
    "UnsupportedInputError",
    "antihom_defect",
    "apply_P",
    "bracket",
    "build_flow",
    "check_av_symmetry",
    "check_flat",
    "check_fmanifold",
    "check_invariance",
    "contract",
    "delta_form",
    "epsilon_system",
    "ev_commutator",
    "exactness_defect",
    "functional_bracket",
    "involution_check",
    "is_total_derivative",
    "jacobi_defect",
    "jet_partial",
    "lie_derivative_P",
    "matrix_inverse",
    "pairing",
    "parse_expr",
    "pullback_metric",
    "ratfun_equal",
    "ratfun_normalize",
    "reduce_form",
    "total_derivative",
    "variational_derivative",
    "verify_recursion",
]
