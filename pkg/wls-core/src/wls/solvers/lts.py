"""Least trimmed squares by random elemental starts and concentration steps."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import numpy.typing as npt

from wls.core.errors import ContractViolation, RankDeficient
from wls.core.types import Coefficients, Dataset, FloatArray
from wls.solvers.ls import fit_ls
from wls.solvers.result import FitResult

logger = logging.getLogger(__name__)

INITIAL_CSTEPS = 2
REFINED_CANDIDATES = 10
SUBSET_RETRY_CAP = 50


def default_h(n: int, p: int) -> int:
    """⌊(n + p + 1)/2⌋, the maximal-breakdown coverage."""
    return (n + p + 1) // 2


@dataclass(frozen=True, slots=True)
class _Candidate:
    start: int
    objective: float
    beta: Coefficients
    subset: npt.NDArray[np.intp]
    csteps: int

    @property
    def rank_key(self) -> tuple[float, int]:
        return (self.objective, self.start)


def fit_lts(
    d: Dataset,
    h: int | None = None,
    n_starts: int = 200,
    seed: int = 0,
    *,
    max_csteps: int = 100,
    workers: int = 1,
) -> FitResult:
    """Approximate minimiser of the sum of the h smallest squared residuals.

    Every start fits a random p-subset exactly and runs two C-steps; the best
    ten candidates are iterated until their h-subset stops changing. Starts
    draw from ``SeedSequence(seed).spawn`` children, so the result does not
    depend on evaluation order; ties go to the lowest start index.
    """
    start_time = time.perf_counter()
    n, p = d.n, d.p
    coverage = default_h(n, p) if h is None else h
    if not p <= coverage <= n:
        msg = f"LTS coverage h={coverage} must satisfy p={p} <= h <= n={n}"
        raise ContractViolation(msg)
    if n_starts < 1:
        msg = f"n_starts must be positive, got {n_starts}"
        raise ContractViolation(msg)

    if coverage == n:
        full = fit_ls(d)
        return replace(full, estimator="lts", wall_time=time.perf_counter() - start_time)

    design = d.design_matrix()
    children = np.random.SeedSequence(seed).spawn(n_starts)

    def run_start(index: int) -> _Candidate:
        rng = np.random.default_rng(children[index])
        beta = _elemental_fit(design, d.y, rng)
        return _concentrate(design, d.y, coverage, index, beta, steps=INITIAL_CSTEPS)

    candidates = _map_ordered(run_start, range(n_starts), workers)
    shortlist = sorted(candidates, key=lambda cand: cand.rank_key)[:REFINED_CANDIDATES]
    refined = [
        _concentrate(design, d.y, coverage, cand.start, cand.beta, steps=max_csteps, base=cand)
        for cand in shortlist
    ]
    best = min(refined, key=lambda cand: cand.rank_key)

    rs = d.y[best.subset] - design[best.subset] @ best.beta
    wall_time = time.perf_counter() - start_time
    logger.debug(
        "lts_finished h=%d starts=%d best_start=%d objective=%.6g csteps=%d",
        coverage,
        n_starts,
        best.start,
        best.objective,
        best.csteps,
    )
    return FitResult(
        estimator="lts",
        beta=best.beta,
        objective=best.objective,
        gradient_norm=float(np.linalg.norm(-2.0 * design[best.subset].T @ rs)),
        iterations=best.csteps,
        converged=True,
        wall_time=wall_time,
        metadata={"h": coverage, "best_start": best.start, "subset": best.subset.tolist()},
    )


def _map_ordered(
    func: Callable[[int], _Candidate],
    indices: Iterable[int],
    workers: int,
) -> list[_Candidate]:
    if workers <= 1:
        return [func(index) for index in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, indices))


def _elemental_fit(design: FloatArray, y: FloatArray, rng: np.random.Generator) -> Coefficients:
    n, p = design.shape
    rank = 0
    for _ in range(SUBSET_RETRY_CAP):
        idx = rng.choice(n, size=p, replace=False)
        block = design[idx]
        rank = int(np.linalg.matrix_rank(block))
        if rank == p:
            return np.asarray(np.linalg.solve(block, y[idx]), dtype=np.float64)
    raise RankDeficient(rank, p, f"every one of {SUBSET_RETRY_CAP} sampled p-subsets")


def _trimmed_sum(r2: FloatArray, h: int) -> float:
    return float(np.sum(np.sort(r2)[:h]))


def _concentrate(
    design: FloatArray,
    y: FloatArray,
    h: int,
    start: int,
    beta: Coefficients,
    *,
    steps: int,
    base: _Candidate | None = None,
) -> _Candidate:
    """Run up to ``steps`` C-steps (LS on the current h best-residual points)."""
    done = base.csteps if base is not None else 0
    subset = base.subset if base is not None else np.empty(0, dtype=np.intp)
    current = beta
    for _ in range(steps):
        r2 = (y - design @ current) ** 2
        new_subset = np.sort(np.argsort(r2, kind="stable")[:h])
        if np.array_equal(new_subset, subset):
            break
        subset = new_subset
        solution, *_ = np.linalg.lstsq(design[subset], y[subset], rcond=None)
        current = np.asarray(solution, dtype=np.float64)
        done += 1
    objective = _trimmed_sum((y - design @ current) ** 2, h)
    return _Candidate(start=start, objective=objective, beta=current, subset=subset, csteps=done)
