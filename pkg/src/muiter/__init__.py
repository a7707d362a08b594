"""Initial algebras of finite-set functors via size-indexed iteration.

The packages computes least fixpoints of functor expressions by iterating
stage colimits over a well-founded directed index order, with numeric and
tree-order backends, plus the dual chain, free algebras, parameterized
fixpoints, and a small script language driving it all.
"""

from ._kernel import KERNEL_IMPL
from .errors import (
    BudgetExceeded,
    DslError,
    DslNameError,
    DslSyntaxError,
    IllTypedArrow,
    IndexMismatch,
    IntegrityError,
    MuiterError,
    NoAlgebra,
    NonFunctorialDiagram,
    NonInvertibleGroupoidArrow,
    NoSuchIndex,
    ShapeMismatch,
)
from .finset import FiniteFn, FiniteSet, Relation, exponential, kernel, quotient
from .signature import (
    Signature,
    WTree,
    container_apply,
    container_map,
    signature_sum,
    wtype_enumerate,
)
from .size import (
    filtered_sample_check,
    height,
    kappa_sigma,
    nat_backend,
    plump_compare,
)
from .colimit import (
    Cocone,
    Diagram,
    canonical_product_map,
    colimit_commutes_with_finite_limits_check,
    connecting_map,
    finite_cat_colimit,
    subdiagram_colimit,
)
from .functors import (
    ColimOver,
    Compose,
    Constant,
    Container,
    FunctorExpr,
    Groupoid,
    Identity,
    MuParam,
    Pairing,
    Product,
    Projection,
    Sum,
    SymContainer,
    eval_functor,
    eval_functor_mor,
    infer_signature,
    swap_groupoid,
)
from .iteration import (
    AlgebraSpec,
    FreeResult,
    IterationState,
    MuResult,
    NuResult,
    catamorphism,
    deflationary_nu,
    fold_equation_holds,
    free_algebra,
    inflationary_iterate,
    mu_initial_algebra,
    mu_parameterized,
)
from .dsl import format_script, lower_expr, parse_script
from .checks import run_checks
from .size import successor_tower

__version__ = "0.1.0"

__all__ = [
    "KERNEL_IMPL",
    "__version__",
    "MuiterError",
    "ShapeMismatch",
    "NonFunctorialDiagram",
    "NoSuchIndex",
    "IllTypedArrow",
    "IndexMismatch",
    "NonInvertibleGroupoidArrow",
    "NoAlgebra",
    "BudgetExceeded",
    "IntegrityError",
    "DslError",
    "DslSyntaxError",
    "DslNameError",
    "FiniteSet",
    "FiniteFn",
    "Relation",
    "exponential",
    "quotient",
    "kernel",
    "Signature",
    "WTree",
    "signature_sum",
    "container_apply",
    "container_map",
    "wtype_enumerate",
    "nat_backend",
    "kappa_sigma",
    "plump_compare",
    "filtered_sample_check",
    "height",
    "Diagram",
    "Cocone",
    "subdiagram_colimit",
    "connecting_map",
    "finite_cat_colimit",
    "canonical_product_map",
    "colimit_commutes_with_finite_limits_check",
    "FunctorExpr",
    "Identity",
    "Projection",
    "Constant",
    "Pairing",
    "Sum",
    "Product",
    "Compose",
    "Container",
    "SymContainer",
    "ColimOver",
    "MuParam",
    "Groupoid",
    "swap_groupoid",
    "eval_functor",
    "eval_functor_mor",
    "infer_signature",
    "IterationState",
    "AlgebraSpec",
    "inflationary_iterate",
    "mu_initial_algebra",
    "catamorphism",
    "free_algebra",
    "mu_parameterized",
    "deflationary_nu",
    "MuResult",
    "FreeResult",
    "NuResult",
    "fold_equation_holds",
    "successor_tower",
    "parse_script",
    "format_script",
    "lower_expr",
    "run_checks",
]
