"""Monte-Carlo study runner: generate replicates, fit every estimator, aggregate EMSE/TT/RE."""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TypeVar

import numpy as np

from wls.bench.generators import gen_contaminated, replicate_seed
from wls.bench.metrics import (
    EstimatorMetrics,
    MetricsReport,
    relative_efficiency,
    squared_deviations,
)
from wls.bench.spec import SimulationSpec
from wls.core.errors import ContractViolation, WLSError
from wls.core.logs import log_event
from wls.core.types import Coefficients, Dataset
from wls.solvers.config import FitConfig
from wls.solvers.registry import Estimator, EstimatorRegistry, default_registry

logger = logging.getLogger(__name__)

MAX_FAILURE_RATE = 0.05
"""A cell with more failed fits than this share of replications is reported invalid."""

_T = TypeVar("_T")


@dataclass(frozen=True, slots=True)
class _Attempt:
    beta: Coefficients | None
    elapsed: float
    error: str | None = None


def resolve_estimators(
    estimators: Sequence[Estimator | str],
    cfg: FitConfig | None = None,
    registry: EstimatorRegistry | None = None,
) -> list[Estimator]:
    if not estimators:
        msg = "at least one estimator is required"
        raise ContractViolation(msg)
    lookup = registry or default_registry()
    resolved: list[Estimator] = []
    for item in estimators:
        resolved.append(lookup.get(item, cfg) if isinstance(item, str) else item)
    names = [est.name for est in resolved]
    if len(set(names)) != len(names):
        msg = f"estimator names must be unique, got {names}"
        raise ContractViolation(msg)
    return resolved


def run_study(
    spec: SimulationSpec,
    estimators: Sequence[Estimator | str],
    cfg: FitConfig | None = None,
    *,
    threads: int = 1,
    registry: EstimatorRegistry | None = None,
) -> MetricsReport:
    """Run ``spec.replications`` replicates and aggregate per estimator.

    Every estimator sees the identical dataset for a given replicate. Results
    are combined in replicate order, so the report does not depend on
    ``threads`` (wall-clock timings aside).
    """
    ests = resolve_estimators(estimators, cfg, registry)

    def replicate(rep: int) -> list[_Attempt]:
        data = gen_contaminated(spec, rep)
        return [_timed_fit(est, data) for est in ests]

    outcomes = _map_ordered(replicate, range(spec.replications), threads)
    return _aggregate(
        ests,
        outcomes,
        beta0=spec.true_beta,
        p=spec.p,
        n=spec.n,
        epsilon=spec.epsilon,
        label=spec.label(),
    )


def run_grid(
    specs: Iterable[SimulationSpec],
    estimators: Sequence[Estimator | str],
    cfg: FitConfig | None = None,
    *,
    threads: int = 1,
    registry: EstimatorRegistry | None = None,
) -> list[MetricsReport]:
    """One report per cell, in the order the cells are given."""
    ests = resolve_estimators(estimators, cfg, registry)
    reports = []
    for spec in specs:
        report = run_study(spec, ests, threads=threads)
        log_event(
            logger,
            "study_cell_finished",
            label=report.label,
            valid=report.valid,
            emse={row.estimator: row.emse for row in report.rows},
        )
        reports.append(report)
    return reports


def run_stability(
    d: Dataset,
    estimators: Sequence[Estimator | str],
    cfg: FitConfig | None = None,
    *,
    replications: int = 100,
    seed: int = 0,
    threads: int = 1,
    registry: EstimatorRegistry | None = None,
) -> MetricsReport:
    """Refit one real dataset under different estimator seeds.

    There is no true β here, so the EMSE of each estimator is measured against
    the mean of its own fits; LS is deterministic and scores 0.
    """
    if replications < 1:
        msg = f"replications must be >= 1, got {replications}"
        raise ContractViolation(msg)
    ests = resolve_estimators(estimators, cfg, registry)

    def replicate(rep: int) -> list[_Attempt]:
        rep_seed = replicate_seed(seed, rep)
        return [_timed_fit(est, d, rep_seed) for est in ests]

    outcomes = _map_ordered(replicate, range(replications), threads)
    return _aggregate(
        ests,
        outcomes,
        beta0=None,
        p=d.p,
        n=d.n,
        epsilon=0.0,
        label=f"stability n={d.n} p={d.p}",
    )


def _timed_fit(est: Estimator, data: Dataset, seed: int | None = None) -> _Attempt:
    start = time.perf_counter()
    try:
        result = est.fit(data, seed)
    except (WLSError, np.linalg.LinAlgError) as exc:
        return _Attempt(beta=None, elapsed=time.perf_counter() - start, error=str(exc))
    return _Attempt(beta=np.array(result.beta), elapsed=time.perf_counter() - start)


def _map_ordered(func: Callable[[int], _T], indices: Iterable[int], threads: int) -> list[_T]:
    if threads < 1:
        msg = f"threads must be >= 1, got {threads}"
        raise ContractViolation(msg)
    if threads == 1:
        return [func(i) for i in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, indices))


def _aggregate(
    ests: Sequence[Estimator],
    outcomes: Sequence[Sequence[_Attempt]],
    *,
    beta0: Coefficients | None,
    p: int,
    n: int,
    epsilon: float,
    label: str,
) -> MetricsReport:
    replications = len(outcomes)
    partial: list[tuple[str, float, float, list[int], list[float], int]] = []
    notes: list[str] = []
    valid = True

    for position, est in enumerate(ests):
        reps: list[int] = []
        betas: list[Coefficients] = []
        total_time = 0.0
        failures = 0
        for rep, attempts in enumerate(outcomes):
            attempt = attempts[position]
            total_time += attempt.elapsed
            if attempt.beta is None:
                failures += 1
                log_event(
                    logger,
                    "study_fit_failed",
                    level=logging.WARNING,
                    estimator=est.name,
                    replicate=rep,
                    error=attempt.error,
                )
                continue
            reps.append(rep)
            betas.append(attempt.beta)

        if betas:
            target = beta0 if beta0 is not None else np.mean(np.asarray(betas), axis=0)
            deviations = [float(v) for v in squared_deviations(betas, target)]
            value = float(np.mean(deviations))
        else:
            deviations = []
            value = math.nan

        if failures > MAX_FAILURE_RATE * replications:
            valid = False
            note = f"{est.name}: {failures}/{replications} fits failed"
            notes.append(note)
            log_event(
                logger,
                "study_invalid",
                level=logging.WARNING,
                label=label,
                estimator=est.name,
                failures=failures,
                replications=replications,
            )
        partial.append((est.name, value, total_time, reps, deviations, failures))

    reference = next((item[1] for item in partial if item[0] == "ls"), None)
    rows = []
    for name, value, total_time, reps, deviations, failures in partial:
        re = math.nan
        if reference is not None and not (math.isnan(reference) or math.isnan(value)):
            re = relative_efficiency(reference, value)
        rows.append(
            EstimatorMetrics(
                estimator=name,
                emse=value,
                total_time=total_time,
                re=re,
                fits=len(reps),
                failures=failures,
                replicates=tuple(reps),
                squared_deviations=tuple(deviations),
            )
        )
    return MetricsReport(
        p=p,
        n=n,
        epsilon=epsilon,
        replications=replications,
        rows=tuple(rows),
        valid=valid,
        label=label,
        notes=tuple(notes),
    )
