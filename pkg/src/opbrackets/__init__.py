"""Exact Poisson brackets built from operational vector fields on l2 x R.

The engine works over the rationals: sequence vectors with finite,
geometric or power-law tails, diagonal-plus-finite-rank operator
symbols, polynomial observables in coordinate and quadratic atoms, and
a second-order operational vector that differentiates twice and pays
only at infinity.  Brackets of commuting fields come with exact axiom
checks, pointwise bivectors, queerness certificates, and a
finite-dimensional oracle for everything a truncation can see.
"""

from .errors import (
    AxiomViolation,
    DomainError,
    EngineError,
    NonCommutingFields,
    ParseError,
    QueerAtPoint,
    ToleranceExceeded,
    UnsupportedDiagSum,
    WitnessNotFound,
)
from .seqvec import (
    FiniteSupport,
    Geometric,
    Power,
    VecComb,
    ZERO_VEC,
    basis,
    comb,
    dot,
    finite,
    format_vec,
    format_veccomb,
    frac,
    pointwise_product,
)
from .opsym import (
    IDENTITY,
    OperatorSymbol,
    ZERO_OP,
    format_operator,
    op_add,
    op_apply,
    op_scale,
    op_symmetrize,
    op_transpose,
    operator,
)
from .expr import (
    Const,
    Expression,
    Lin,
    ONE,
    Point,
    Prod,
    Quad,
    RHO,
    Scale,
    Sum,
    X,
    ZERO,
    canonicalize,
    constant_value,
    eval_expr,
    expressions_equal,
    is_zero_expr,
    point,
    print_expr,
)
from .parser import (
    parse_expr,
    parse_field,
    parse_mu,
    parse_operator,
    parse_point,
    parse_vec,
)
from .jets import (
    DualVector,
    HessianSymbol,
    ZERO_HESSIAN,
    ZERO_JET,
    ddx,
    delta_ell,
    dirderiv,
    gradient,
    hessian,
)
from .poisson import (
    AxiomReport,
    AxiomRow,
    BracketSpec,
    DDX_FIELD,
    DX,
    DxMarker,
    DELTA_ELL_FIELD,
    FieldValue,
    OperationalField,
    Order,
    TensorAtPoint,
    Witness,
    apply_field,
    bracket,
    bracket_spec,
    check_axioms,
    commute_check,
    extension_obstruction_demo,
    field,
    field_scale,
    field_sub,
    field_value_at,
    format_field,
    hamiltonian_field,
    kinematic_field,
    order_at,
    queer_witness,
    sharp,
    tensor_at,
)
from .sampling import Sampler
from .truncation import (
    ConvergenceRow,
    FdReport,
    FlowRow,
    IllPosednessReport,
    Truncation,
    ell_convergence,
    fd_check,
    ill_posedness_demo,
    rk4_flow,
    truncate,
    truncate_point,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "AxiomRow",
    "AxiomViolation",
    "BracketSpec",
    "DX",
    "DxMarker",
    "Const",
    "ConvergenceRow",
    "DDX_FIELD",
    "DELTA_ELL_FIELD",
    "DomainError",
    "DualVector",
    "EngineError",
    "Expression",
    "FdReport",
    "FieldValue",
    "FiniteSupport",
    "FlowRow",
    "Geometric",
    "HessianSymbol",
    "IDENTITY",
    "IllPosednessReport",
    "Lin",
    "NonCommutingFields",
    "ONE",
    "OperationalField",
    "OperatorSymbol",
    "Order",
    "ParseError",
    "Point",
    "Power",
    "Prod",
    "Quad",
    "QueerAtPoint",
    "RHO",
    "Sampler",
    "Scale",
    "Sum",
    "TensorAtPoint",
    "ToleranceExceeded",
    "Truncation",
    "UnsupportedDiagSum",
    "VecComb",
    "Witness",
    "WitnessNotFound",
    "X",
    "ZERO",
    "ZERO_HESSIAN",
    "ZERO_JET",
    "ZERO_OP",
    "ZERO_VEC",
    "apply_field",
    "basis",
    "bracket",
    "bracket_spec",
    "canonicalize",
    "check_axioms",
    "comb",
    "commute_check",
    "constant_value",
    "dot",
    "ddx",
    "delta_ell",
    "dirderiv",
    "ell_convergence",
    "eval_expr",
    "expressions_equal",
    "extension_obstruction_demo",
    "fd_check",
    "field",
    "field_scale",
    "field_sub",
    "field_value_at",
    "finite",
    "format_field",
    "format_operator",
    "format_vec",
    "format_veccomb",
    "frac",
    "gradient",
    "hamiltonian_field",
    "hessian",
    "ill_posedness_demo",
    "is_zero_expr",
    "kinematic_field",
    "op_add",
    "op_apply",
    "op_scale",
    "op_symmetrize",
    "op_transpose",
    "operator",
    "order_at",
    "parse_expr",
    "parse_field",
    "parse_mu",
    "parse_operator",
    "parse_point",
    "parse_vec",
    "point",
    "pointwise_product",
    "print_expr",
    "queer_witness",
    "rk4_flow",
    "sharp",
    "tensor_at",
    "truncate",
    "truncate_point",
]
