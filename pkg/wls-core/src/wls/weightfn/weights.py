"""Exponential down-weighting function w, its derivatives and the penalised square ψ.

For |x| > c, with s = c/|x|, the weight

    w(x) = (exp(−k(1−s)²) − exp(−k)) / (1 − exp(−k))

is evaluated as expm1(k·s·(2−s)) / expm1(k), which is the same quantity
without the cancellation of the direct form for large |x|. All evaluations
are double precision.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import overload

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from wls.core.errors import ContractViolation
from wls.core.logs import log_event
from wls.core.types import FloatArray

logger = logging.getLogger(__name__)


class WeightParams(BaseModel):
    """Tuning constants: steepness ``k`` and cutoff ``c``."""

    model_config = ConfigDict(frozen=True)

    k: float = Field(default=5.0, gt=0.0)
    c: float = Field(default=100.0, gt=0.0)

    @model_validator(mode="after")
    def _warn_outside_suggested_range(self) -> WeightParams:
        if not (1.0 <= self.k <= 10.0) or self.c <= 1.0:
            message = f"weight params k={self.k}, c={self.c} outside suggested k∈[1,10], c>1"
            warnings.warn(message, UserWarning, stacklevel=2)
            log_event(
                logger,
                "weight_params_outside_suggested_range",
                level=logging.WARNING,
                k=self.k,
                c=self.c,
            )
        return self

    @property
    def expm1_k(self) -> float:
        return math.expm1(self.k)


def alpha_star(params: WeightParams) -> float:
    """α* = −2kc / (1 − e^{−k})."""
    return -2.0 * params.k * params.c / -math.expm1(-params.k)


@overload
def weight(params: WeightParams, x: float) -> float: ...
@overload
def weight(params: WeightParams, x: npt.NDArray[np.float64]) -> FloatArray: ...
def weight(params: WeightParams, x: float | npt.NDArray[np.float64]) -> float | FloatArray:
    """w(x): 1 inside the cutoff, exponential decay towards 0 outside; even in x."""
    a, scalar = _abs_input(x)
    out = np.ones_like(a)
    outer = a > params.c
    s = params.c / a[outer]
    out[outer] = np.expm1(params.k * s * (2.0 - s)) / params.expm1_k
    return _restore(out, scalar)


@overload
def weight_d1(params: WeightParams, x: float) -> float: ...
@overload
def weight_d1(params: WeightParams, x: npt.NDArray[np.float64]) -> FloatArray: ...
def weight_d1(params: WeightParams, x: float | npt.NDArray[np.float64]) -> float | FloatArray:
    """w′(x) = α*·e^{−k(1−c/|x|)²}·(1−c/|x|)·sgn(x)/x² for |x| > c, else 0."""
    a, scalar = _abs_input(x)
    sign = np.sign(np.asarray(x, dtype=np.float64)).reshape(a.shape)
    out = np.zeros_like(a)
    outer = a > params.c
    ao = a[outer]
    s = params.c / ao
    t = 1.0 - s
    # e^{−k t²}/(1 − e^{−k}) = e^{k s (2−s)}/(e^{k} − 1)
    scaled_exp = np.exp(params.k * s * (2.0 - s)) / params.expm1_k
    out[outer] = -2.0 * params.k * params.c * scaled_exp * t * sign[outer] / ao**2
    return _restore(out, scalar)


@overload
def weight_d2(params: WeightParams, x: float) -> float: ...
@overload
def weight_d2(params: WeightParams, x: npt.NDArray[np.float64]) -> FloatArray: ...
def weight_d2(params: WeightParams, x: float | npt.NDArray[np.float64]) -> float | FloatArray:
    """w″(x) for |x| > c; 0 on |x| ≤ c, including the pinned value w″(±c) = 0.

    The right limit at |x| = c is α*/c³, not 0: w″ jumps at the cutoff.
    """
    a, scalar = _abs_input(x)
    out = np.zeros_like(a)
    outer = a > params.c
    ao = a[outer]
    s = params.c / ao
    t = 1.0 - s
    scaled_exp = np.exp(params.k * s * (2.0 - s)) / params.expm1_k
    bracket = -2.0 * params.k * params.c * t**2 / ao - (2.0 - 3.0 * s)
    out[outer] = -2.0 * params.k * params.c * scaled_exp * bracket / ao**3
    return _restore(out, scalar)


@overload
def psi(params: WeightParams, cstar: float, r: float) -> float: ...
@overload
def psi(params: WeightParams, cstar: float, r: npt.NDArray[np.float64]) -> FloatArray: ...
def psi(
    params: WeightParams, cstar: float, r: float | npt.NDArray[np.float64]
) -> float | FloatArray:
    """ψ(r) = w(r²/c*)·r², one observation's contribution to the objective."""
    _require_positive_cstar(cstar)
    r2 = np.square(np.asarray(r, dtype=np.float64))
    values = weight(params, r2 / cstar) * r2
    if np.ndim(r) == 0:
        return float(values)
    return np.asarray(values, dtype=np.float64)


def tail_constant(params: WeightParams, cstar: float) -> float:
    """lim_{r→∞} ψ(r) = 2·c·k·c*/(eᵏ − 1)."""
    _require_positive_cstar(cstar)
    return 2.0 * params.c * params.k * cstar / params.expm1_k


def _abs_input(x: float | npt.NDArray[np.float64]) -> tuple[FloatArray, bool]:
    array = np.asarray(x, dtype=np.float64)
    scalar = array.ndim == 0
    return np.abs(np.atleast_1d(array)), scalar


def _restore(out: FloatArray, scalar: bool) -> float | FloatArray:
    if scalar:
        return float(out[0])
    return out


def _require_positive_cstar(cstar: float) -> None:
    if not cstar > 0.0:
        msg = f"c* must be positive, got {cstar!r}"
        raise ContractViolation(msg)
