"""Weight function family of the exponentially weighted least squares objective."""

from wls.weightfn.weights import (
    WeightParams,
    alpha_star,
    psi,
    tail_constant,
    weight,
    weight_d1,
    weight_d2,
)

__all__ = [
    "WeightParams",
    "alpha_star",
    "psi",
    "tail_constant",
    "weight",
    "weight_d1",
    "weight_d2",
]
