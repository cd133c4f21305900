"""Accuracy metrics for Monte-Carlo studies."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from wls.core.errors import ContractViolation
from wls.core.types import FloatArray


def squared_deviations(fits: Sequence[npt.ArrayLike], beta0: npt.ArrayLike) -> FloatArray:
    """‖β̂ᵢ − β₀‖² for each fit, in input order."""
    if len(fits) == 0:
        msg = "at least one fit is required"
        raise ContractViolation(msg)
    target = np.asarray(beta0, dtype=np.float64)
    stacked = np.asarray([np.asarray(b, dtype=np.float64) for b in fits])
    if stacked.ndim != 2 or stacked.shape[1] != target.shape[0]:
        msg = f"fits of shape {stacked.shape} do not match beta0 of length {target.shape[0]}"
        raise ContractViolation(msg)
    return np.asarray(np.sum((stacked - target) ** 2, axis=1), dtype=np.float64)


def emse(fits: Sequence[npt.ArrayLike], beta0: npt.ArrayLike) -> float:
    """Empirical mean squared error (1/R)·Σ‖β̂ᵢ − β₀‖²."""
    return float(np.mean(squared_deviations(fits, beta0)))


def relative_efficiency(emse_ls: float, emse_proc: float) -> float:
    """EMSE_LS / EMSE_proc; NaN for 0/0 and +inf when only the procedure is exact."""
    if emse_ls < 0.0 or emse_proc < 0.0:
        msg = f"EMSE values must be non-negative, got {emse_ls!r} and {emse_proc!r}"
        raise ContractViolation(msg)
    if emse_proc == 0.0:
        return math.nan if emse_ls == 0.0 else math.inf
    return emse_ls / emse_proc


@dataclass(frozen=True, slots=True)
class EstimatorMetrics:
    estimator: str
    emse: float
    total_time: float
    re: float
    fits: int
    failures: int
    replicates: tuple[int, ...] = ()
    squared_deviations: tuple[float, ...] = ()


@dataclass(frozen=True, slots=True)
class MetricsReport:
    """One study cell: per-estimator metrics in the order the estimators were given."""

    p: int
    n: int
    epsilon: float
    replications: int
    rows: tuple[EstimatorMetrics, ...]
    valid: bool = True
    label: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    def get(self, estimator: str) -> EstimatorMetrics:
        for row in self.rows:
            if row.estimator == estimator:
                return row
        msg = f"no metrics recorded for estimator '{estimator}'"
        raise KeyError(msg)

    def estimators(self) -> list[str]:
        return [row.estimator for row in self.rows]
