"""Polynomial vector fields tangent to the boundary of a convex polytope."""

from .arrangement import (
    DegenerateArrangementError,
    Polytope,
    PolytopeError,
    build_cone,
    facet_tangency_check,
    is_tangent,
    jacobian,
    validate_polytope,
)
from .fitting import (
    FitResult,
    Observation,
    ObservationError,
    apply_operator,
    constraint_nullspace,
    design_matrix,
    exact_interpolant,
    fit_with_degree,
    fit_with_error_bound,
    least_squares_min_norm,
)
from .groebner import ModuleVector, buchberger, free_resolution, syzygies_of_tuple
from .polycore import Polynomial
from .tangentbasis import (
    TangentBasis,
    dimension_by_resolution,
    oracle_tangent_basis,
    tangent_basis,
)

__version__ = "0.1.0"
