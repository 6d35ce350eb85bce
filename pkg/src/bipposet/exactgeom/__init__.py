from bipposet.exactgeom.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    DimensionMismatchError,
    LPResult,
    lp_solve,
    solve_standard,
)
from bipposet.exactgeom.polytope import (
    FacialOrientationError,
    GenericityError,
    NotAVertexError,
    RationalPolytope,
    UndefinedDimensionError,
    UnknownLabelError,
    affine_rank,
    bruhat_interval_polytope,
    parse_cost,
    parse_rational,
)

__all__ = [
    "INFEASIBLE",
    "OPTIMAL",
    "UNBOUNDED",
    "Constraint",
    "DimensionMismatchError",
    "FacialOrientationError",
    "GenericityError",
    "LPResult",
    "NotAVertexError",
    "RationalPolytope",
    "UndefinedDimensionError",
    "UnknownLabelError",
    "affine_rank",
    "bruhat_interval_polytope",
    "lp_solve",
    "parse_cost",
    "parse_rational",
    "solve_standard",
]
