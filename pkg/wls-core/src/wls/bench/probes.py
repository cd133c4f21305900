"""Robustness probes: finite-sample breakdown and the three equivariance identities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from wls.core.errors import ContractViolation
from wls.core.types import Coefficients, Dataset
from wls.solvers.registry import Estimator

logger = logging.getLogger(__name__)

BREAKDOWN_PATTERNS = ("leverage", "vertical")


def breakdown_probe(
    d: Dataset,
    estimator: Estimator,
    m: int,
    magnitude: float,
    *,
    seed: int = 0,
) -> float:
    """Largest ‖β̂(contaminated) − β̂(clean)‖ over the adversarial patterns.

    ``leverage`` overwrites m rows with (M, …, M, −M); ``vertical`` keeps the
    carriers of those rows and sets their response to M. The same uniformly
    chosen rows are used for both patterns.
    """
    if not 0 <= m < d.n:
        msg = f"m must satisfy 0 <= m < n={d.n}, got {m}"
        raise ContractViolation(msg)
    if m == 0:
        return 0.0

    clean = np.array(estimator.fit(d).beta)
    rows = np.sort(np.random.default_rng(seed).choice(d.n, size=m, replace=False))
    worst = 0.0
    for pattern in BREAKDOWN_PATTERNS:
        contaminated = d.replace_rows(rows, _adversarial_block(d, rows, pattern, magnitude))
        deviation = float(np.linalg.norm(estimator.fit(contaminated).beta - clean))
        logger.debug("breakdown_probe pattern=%s m=%d deviation=%.6g", pattern, m, deviation)
        worst = max(worst, deviation)
    return worst


def _adversarial_block(
    d: Dataset, rows: np.ndarray, pattern: str, magnitude: float
) -> np.ndarray:
    if pattern == "leverage":
        point = np.append(np.full(d.p - 1, magnitude), -magnitude)
        return np.tile(point, (rows.size, 1))
    return np.column_stack([d.x[rows], np.full(rows.size, magnitude)])


@dataclass(frozen=True, slots=True)
class EquivarianceReport:
    """Max scaled deviations; NaN for identities that were not checked."""

    regression: float
    scale: float
    affine: float
    transforms: int

    def as_dict(self) -> dict[str, float]:
        return {"regression": self.regression, "scale": self.scale, "affine": self.affine}

    def worst(self) -> float:
        checked = [v for v in self.as_dict().values() if not math.isnan(v)]
        return max(checked) if checked else math.nan


def equivariance_probe(
    d: Dataset,
    estimator: Estimator,
    *,
    transforms: int = 20,
    seed: int = 0,
    checks: tuple[str, ...] = ("regression", "scale", "affine"),
) -> EquivarianceReport:
    """Check T(y + Xb) = T + b, T(s·y) = s·T and T(XA) = A⁻¹T on random transforms.

    Deviations are max-norm differences divided by max(1, ‖expected‖∞).
    ``A`` keeps the intercept column, so the transformed data is again a
    dataset with an intercept.
    """
    unknown = set(checks) - {"regression", "scale", "affine"}
    if unknown:
        msg = f"unknown equivariance checks: {sorted(unknown)}"
        raise ContractViolation(msg)
    if transforms < 1:
        msg = f"transforms must be >= 1, got {transforms}"
        raise ContractViolation(msg)

    rng = np.random.default_rng(seed)
    base = np.array(estimator.fit(d).beta)
    design = d.design_matrix()
    names = ("regression", "scale", "affine")
    worst = {name: (0.0 if name in checks else math.nan) for name in names}

    for _ in range(transforms):
        if "regression" in checks:
            shift = rng.normal(scale=2.0, size=d.p)
            fitted = estimator.fit(d.with_response(d.y + design @ shift)).beta
            worst["regression"] = max(worst["regression"], _scaled(fitted, base + shift))
        if "scale" in checks:
            s = float(rng.uniform(0.5, 5.0)) * float(rng.choice([-1.0, 1.0]))
            fitted = estimator.fit(d.with_response(s * d.y)).beta
            worst["scale"] = max(worst["scale"], _scaled(fitted, s * base))
        if "affine" in checks:
            transform = _intercept_preserving_transform(rng, d.p)
            moved = Dataset(x=(design @ transform)[:, 1:], y=d.y)
            fitted = estimator.fit(moved).beta
            expected = np.linalg.solve(transform, base)
            worst["affine"] = max(worst["affine"], _scaled(fitted, expected))

    return EquivarianceReport(
        regression=worst["regression"],
        scale=worst["scale"],
        affine=worst["affine"],
        transforms=transforms,
    )


def _intercept_preserving_transform(rng: np.random.Generator, p: int) -> np.ndarray:
    """A = [[1, aᵀ], [0, B]] with B well conditioned, so (1, xᵀ)A = (1, x'ᵀ)."""
    transform = np.eye(p)
    if p == 1:
        return transform
    transform[0, 1:] = rng.normal(scale=0.5, size=p - 1)
    block = np.eye(p - 1) + 0.3 * rng.standard_normal((p - 1, p - 1))
    while np.linalg.cond(block) > 1e3:
        block = np.eye(p - 1) + 0.3 * rng.standard_normal((p - 1, p - 1))
    transform[1:, 1:] = block
    return transform


def _scaled(actual: Coefficients, expected: Coefficients) -> float:
    gap = float(np.max(np.abs(np.asarray(actual) - expected)))
    return gap / max(1.0, float(np.max(np.abs(expected))))
