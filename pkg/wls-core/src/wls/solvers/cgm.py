"""Nonlinear conjugate-gradient solver for the weighted least squares objective."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from wls.core.design import as_coefficients, require_general_position
from wls.core.errors import ContractViolation, NonFinite
from wls.core.logs import log_event
from wls.core.scale import compute_cstar
from wls.core.types import Coefficients, Dataset
from wls.objective.objective import ObjectiveContext
from wls.solvers.config import FitConfig, LineSearch
from wls.solvers.ls import fit_ls
from wls.solvers.lts import fit_lts
from wls.solvers.result import FitResult
from wls.weightfn.weights import WeightParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class _Step:
    length: float
    value: float


def fit_wls(d: Dataset, cfg: FitConfig | None = None) -> FitResult:
    """Minimise O(β) = Σ w(rᵢ²/c*)rᵢ² from a robust start.

    Fletcher–Reeves directions are restarted from steepest descent every p
    iterations, for at most ``max_outer_cycles`` cycles. Accepted steps never
    increase the objective, so the result is never worse than the start.

    The run counts as converged once ‖∇O‖ < tolerance·(1 + ‖Xᵀy‖); that
    threshold is reported as ``metadata["gradient_tolerance"]``.
    """
    config = cfg or FitConfig()
    start_time = time.perf_counter()
    require_general_position(d)

    initial, lts_result = _initial_beta(d, config)
    ctx = _objective_context(d, config, initial, lts_result)

    f0 = ctx.value(initial)
    if not math.isfinite(f0):
        msg = f"objective is not finite at the initializer ({f0!r})"
        raise NonFinite(msg)

    threshold = gradient_tolerance(ctx, config.tolerance)
    beta = initial.copy()
    f = f0
    g = ctx.gradient(beta)
    trace = [f0]
    iterations = 0
    cycles = 0
    converged = bool(np.linalg.norm(g) < threshold)

    while not converged and cycles < config.max_outer_cycles:
        cycles += 1
        cycle_start = f
        v = -g
        for _ in range(d.p):
            step = _step_length(ctx, beta, f, g, v, config.line_search)
            if step is None:
                break
            beta = beta + step.length * v
            f = step.value
            g_new = ctx.gradient(beta)
            trace.append(f)
            iterations += 1
            if np.linalg.norm(g_new) < threshold:
                g = g_new
                converged = True
                break
            ratio = float(g_new @ g_new) / float(g @ g)
            g = g_new
            v = -g + ratio * v
            if float(g @ v) >= 0.0:
                break
        logger.debug(
            "cgm_cycle cycle=%d objective=%.12g gradient_norm=%.3e iterations=%d",
            cycles,
            f,
            float(np.linalg.norm(g)),
            iterations,
        )
        if not converged and not f < cycle_start:
            break

    if config.keep_best_of_initializer and f0 < f:
        beta, f, g = initial.copy(), f0, ctx.gradient(initial)
        converged = bool(np.linalg.norm(g) < threshold)

    gradient_norm = float(np.linalg.norm(g))
    wall_time = time.perf_counter() - start_time
    log_event(
        logger,
        "cgm_finished",
        level=logging.DEBUG,
        objective=f,
        initial_objective=f0,
        gradient_norm=gradient_norm,
        iterations=iterations,
        cycles=cycles,
        converged=converged,
        cstar=ctx.cstar,
    )
    return FitResult(
        estimator="wls",
        beta=beta,
        objective=f,
        gradient_norm=gradient_norm,
        iterations=iterations,
        converged=converged,
        wall_time=wall_time,
        cstar=ctx.cstar,
        objective_trace=tuple(trace),
        metadata={
            "cycles": cycles,
            "c": ctx.params.c,
            "k": ctx.params.k,
            "gradient_tolerance": threshold,
        },
    )


def gradient_tolerance(ctx: ObjectiveContext, tolerance: float) -> float:
    """tolerance·(1 + ‖Xᵀy‖), the gradient scale of the least-squares part."""
    design_y = ctx.design.T @ ctx.dataset.y
    return tolerance * (1.0 + float(np.linalg.norm(design_y)))

def _initial_beta(d: Dataset, cfg: FitConfig) -> tuple[Coefficients, FitResult | None]:
    if cfg.initializer == "given":
        assert cfg.initial_beta is not None
        return as_coefficients(cfg.initial_beta, d.p), None
    if cfg.initializer == "ls":
        return np.array(fit_ls(d).beta), None
    lts = _fit_lts(d, cfg)
    return np.array(lts.beta), lts


def _fit_lts(d: Dataset, cfg: FitConfig) -> FitResult:
    return fit_lts(d, cfg.lts_h, cfg.lts_starts, cfg.rng_seed, workers=cfg.lts_workers)


def _objective_context(
    d: Dataset,
    cfg: FitConfig,
    initial: Coefficients,
    lts_result: FitResult | None,
) -> ObjectiveContext:
    """Resolve c* (and optionally the cutoff) once for the whole run."""
    reference = initial
    if cfg.scale_mode.needs_reference_fit:
        if cfg.scale_mode.reference == "ls":
            reference = np.array(fit_ls(d).beta)
        elif cfg.scale_mode.reference == "lts":
            lts = lts_result if lts_result is not None else _fit_lts(d, cfg)
            reference = np.array(lts.beta)

    cstar = compute_cstar(d, cfg.scale_mode, reference, floor=cfg.scale_floor)
    params = cfg.weight_params
    if cfg.cutoff_quantile is not None:
        u = (d.y - d.design_matrix() @ reference) ** 2 / cstar
        cutoff = float(np.quantile(u, cfg.cutoff_quantile))
        if not cutoff > 0.0:
            msg = f"cutoff quantile {cfg.cutoff_quantile} resolved to non-positive c={cutoff!r}"
            raise ContractViolation(msg)
        params = WeightParams.model_construct(k=params.k, c=cutoff)
    return ObjectiveContext(dataset=d, params=params, cstar=cstar)


def _step_length(
    ctx: ObjectiveContext,
    beta: Coefficients,
    f: float,
    g: Coefficients,
    v: Coefficients,
    rule: LineSearch,
) -> _Step | None:
    """Newton step −∇Oᵀv/vᵀHv when the curvature is positive, else backtracking.

    Every returned step satisfies O(β+αv) ≤ O(β) + armijo·α·∇Oᵀv.
    """
    slope = float(g @ v)
    if not slope < 0.0:
        return None

    length = 1.0
    if rule.kind == "newton":
        curvature = float(v @ ctx.hessian(beta) @ v)
        if math.isfinite(curvature) and curvature > 0.0:
            length = -slope / curvature

    for _ in range(rule.max_backtracks):
        trial = beta + length * v
        if np.all(np.isfinite(trial)):
            value = ctx.value(trial)
            if math.isfinite(value) and value <= f + rule.armijo * length * slope:
                return _Step(length=length, value=value)
        length *= rule.shrink
    return None
