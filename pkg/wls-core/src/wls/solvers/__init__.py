"""Estimators compared by the benchmark: LS, LTS and the WLS conjugate-gradient solver."""

from wls.solvers.breakdown import rbp_theoretical
from wls.solvers.cgm import fit_wls
from wls.solvers.config import FitConfig, InitializerKind, LineSearch
from wls.solvers.ls import fit_ls, qr_solve
from wls.solvers.lts import default_h, fit_lts
from wls.solvers.registry import (
    Estimator,
    EstimatorRegistry,
    LeastSquares,
    LeastTrimmedSquares,
    WeightedLeastSquares,
    default_registry,
)
from wls.solvers.result import FitResult

__all__ = [
    "Estimator",
    "EstimatorRegistry",
    "FitConfig",
    "FitResult",
    "InitializerKind",
    "LeastSquares",
    "LeastTrimmedSquares",
    "LineSearch",
    "WeightedLeastSquares",
    "default_h",
    "default_registry",
    "fit_ls",
    "fit_lts",
    "fit_wls",
    "qr_solve",
    "rbp_theoretical",
]
