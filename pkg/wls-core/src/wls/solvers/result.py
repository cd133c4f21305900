"""Fit outcome shared by all estimators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from wls.core.types import Coefficients


@dataclass(frozen=True, slots=True)
class FitResult:
    """Coefficients with convergence diagnostics.

    ``converged`` implies ``gradient_norm`` is below the run tolerance for the
    iterative WLS solver; the closed-form and LTS fits always report True.
    """

    estimator: str
    beta: Coefficients
    objective: float
    gradient_norm: float
    iterations: int
    converged: bool
    wall_time: float
    cstar: float | None = None
    objective_trace: tuple[float, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        beta = np.array(self.beta, dtype=np.float64, copy=True)
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)

    def summary(self) -> dict[str, Any]:
        """JSON-friendly view with full-precision coefficients."""
        return {
            "estimator": self.estimator,
            "beta": [float(value) for value in self.beta],
            "objective": self.objective,
            "gradient_norm": self.gradient_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "wall_time_s": self.wall_time,
            "cstar": self.cstar,
        }
