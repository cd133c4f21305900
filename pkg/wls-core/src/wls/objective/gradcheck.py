"""Central finite-difference validators for the hand-coded derivatives."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from wls.core.types import FloatArray
from wls.objective.objective import ObjectiveContext

logger = logging.getLogger(__name__)

DEFAULT_REL_STEP = 1e-6


def _steps(beta: FloatArray, rel_step: float) -> FloatArray:
    return rel_step * (1.0 + np.abs(beta))


def finite_difference_gradient(
    func: Callable[[FloatArray], float],
    beta: npt.ArrayLike,
    rel_step: float = DEFAULT_REL_STEP,
) -> FloatArray:
    """Centered differences with hⱼ = rel_step·(1 + |βⱼ|)."""
    x0 = np.asarray(beta, dtype=np.float64).copy()
    steps = _steps(x0, rel_step)
    grad = np.zeros_like(x0)
    for j, h in enumerate(steps):
        x = x0.copy()
        x[j] = x0[j] + h
        fplus = func(x)
        x[j] = x0[j] - h
        fminus = func(x)
        grad[j] = (fplus - fminus) / (2.0 * h)
    return grad


def finite_difference_hessian(
    grad: Callable[[FloatArray], FloatArray],
    beta: npt.ArrayLike,
    rel_step: float = DEFAULT_REL_STEP,
) -> FloatArray:
    """Column j is the centered difference of ``grad`` along coordinate j, symmetrised."""
    x0 = np.asarray(beta, dtype=np.float64).copy()
    steps = _steps(x0, rel_step)
    hess = np.zeros((x0.size, x0.size))
    for j, h in enumerate(steps):
        x = x0.copy()
        x[j] = x0[j] + h
        gplus = grad(x)
        x[j] = x0[j] - h
        gminus = grad(x)
        hess[:, j] = (gplus - gminus) / (2.0 * h)
    return 0.5 * (hess + hess.T)


def max_relative_error(analytic: npt.ArrayLike, numeric: npt.ArrayLike) -> float:
    """‖a − n‖∞ scaled by ‖n‖∞, so near-zero components do not dominate."""
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    scale = max(float(np.max(np.abs(n))) if n.size else 0.0, 1e-300)
    return float(np.max(np.abs(a - n))) / scale if a.size else 0.0


def near_branch_boundary(ctx: ObjectiveContext, beta: npt.ArrayLike, collar: float = 1e-4) -> bool:
    """True when a perturbation of size ``collar`` in β could move some rᵢ² across c·c*."""
    r = np.abs(ctx.residuals(beta))
    edge = np.sqrt(ctx.params.c * ctx.cstar)
    reach = collar * (1.0 + np.sum(np.abs(ctx.design), axis=1))
    return bool(np.any(np.abs(r - edge) < reach))


@dataclass(frozen=True, slots=True)
class DerivativeCheck:
    gradient_error: float
    hessian_error: float
    near_boundary: bool


def check_derivatives(
    ctx: ObjectiveContext,
    beta: npt.ArrayLike,
    rel_step: float = DEFAULT_REL_STEP,
) -> DerivativeCheck:
    """Compare analytic gradient/Hessian with finite differences at ``beta``."""
    b = np.asarray(beta, dtype=np.float64)
    grad_error = max_relative_error(
        ctx.gradient(b), finite_difference_gradient(ctx.value, b, rel_step)
    )
    hess_error = max_relative_error(
        ctx.hessian(b), finite_difference_hessian(ctx.gradient, b, rel_step)
    )
    check = DerivativeCheck(
        gradient_error=grad_error,
        hessian_error=hess_error,
        near_boundary=near_branch_boundary(ctx, b),
    )
    logger.debug(
        "derivative_check gradient_error=%.3e hessian_error=%.3e near_boundary=%s",
        check.gradient_error,
        check.hessian_error,
        check.near_boundary,
    )
    return check
