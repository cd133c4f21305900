"""Closed-form least squares through a column-pivoted QR factorisation."""

from __future__ import annotations

import time

import numpy as np
import scipy.linalg

from wls.core.errors import RankDeficient
from wls.core.types import Coefficients, Dataset, FloatArray
from wls.solvers.result import FitResult


def qr_solve(design: FloatArray, y: FloatArray, *, context: str = "design matrix") -> Coefficients:
    """Least-squares solution of design·β ≈ y; refuses rank-deficient systems.

    Rank is read from the pivoted R diagonal with the usual
    max(n, p)·eps·|R₀₀| threshold.
    """
    n, p = design.shape
    if n < p:
        raise RankDeficient(n, p, context)
    q, r, piv = scipy.linalg.qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    threshold = max(n, p) * np.finfo(np.float64).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.count_nonzero(diag > threshold))
    if rank < p:
        raise RankDeficient(rank, p, context)
    z = scipy.linalg.solve_triangular(r, q.T @ y)
    beta = np.empty(p)
    beta[piv] = z
    return beta


def fit_ls(d: Dataset) -> FitResult:
    """β̂_ls = argmin Σ rᵢ²."""
    start = time.perf_counter()
    design = d.design_matrix()
    beta = qr_solve(design, d.y)
    r = d.y - design @ beta
    return FitResult(
        estimator="ls",
        beta=beta,
        objective=float(r @ r),
        gradient_norm=float(np.linalg.norm(-2.0 * design.T @ r)),
        iterations=1,
        converged=True,
        wall_time=time.perf_counter() - start,
    )
