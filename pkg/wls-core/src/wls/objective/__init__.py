"""Objective function, analytic derivatives and their numeric validators."""

from wls.objective.gradcheck import (
    DerivativeCheck,
    check_derivatives,
    finite_difference_gradient,
    finite_difference_hessian,
    max_relative_error,
    near_branch_boundary,
)
from wls.objective.objective import ObjectiveContext

__all__ = [
    "DerivativeCheck",
    "ObjectiveContext",
    "check_derivatives",
    "finite_difference_gradient",
    "finite_difference_hessian",
    "max_relative_error",
    "near_branch_boundary",
]
