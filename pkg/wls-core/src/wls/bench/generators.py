"""Deterministic data generators for the Monte-Carlo studies and probes."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import numpy.typing as npt

from wls.bench.spec import FixedBeta, JointNormalShift, SimulationSpec
from wls.core.errors import ContractViolation
from wls.core.types import Dataset, FloatArray


def replicate_rng(seed: int, rep_index: int) -> np.random.Generator:
    """Independent stream per (seed, replicate); the pair fully determines the draws."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep_index,)))


def replicate_seed(seed: int, rep_index: int) -> int:
    """Integer seed derived from (seed, replicate), for estimators with their own RNG."""
    state = np.random.SeedSequence(seed, spawn_key=(rep_index,)).generate_state(1)
    return int(state[0])


@lru_cache(maxsize=64)
def _symmetric_root(p: int, rho: float) -> FloatArray:
    cov = (1.0 - rho) * np.eye(p) + rho * np.ones((p, p))
    eigvals, eigvecs = np.linalg.eigh(cov)
    root = (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T
    root.setflags(write=False)
    return root


def correlated_normals(
    rng: np.random.Generator, n: int, p: int, rho: float
) -> FloatArray:
    """n draws from N(0, Σ) via the symmetric square root of Σ."""
    return np.asarray(rng.standard_normal((n, p)) @ _symmetric_root(p, rho), dtype=np.float64)


def gen_contaminated(spec: SimulationSpec, rep_index: int) -> Dataset:
    """Sample for replicate ``rep_index`` with m = ⌈nε⌉ uniformly chosen rows replaced."""
    rng = replicate_rng(spec.seed, rep_index)
    scheme = spec.scheme
    if isinstance(scheme, FixedBeta):
        beta0 = spec.true_beta
        x = rng.standard_normal((spec.n, spec.p - 1))
        errors = rng.standard_normal(spec.n)
        y = beta0[0] + x @ beta0[1:] + errors
        z = np.column_stack([x, y])
    else:
        z = correlated_normals(rng, spec.n, spec.p, spec.rho)

    m = spec.contamination_count
    if m > 0:
        rows = rng.choice(spec.n, size=m, replace=False)
        if isinstance(scheme, JointNormalShift):
            z[rows] = spec.replacement_point + scheme.spread * rng.standard_normal((m, spec.p))
        else:
            z[rows] = spec.replacement_point
    return Dataset(x=z[:, :-1], y=z[:, -1])


def clean_line_dataset(
    n: int,
    p: int,
    seed: int = 0,
    *,
    noise: float = 0.1,
    beta: npt.ArrayLike | None = None,
) -> Dataset:
    """yᵢ = (1, xᵢᵀ)β + noise·eᵢ with xᵢ ~ N(0, I); β defaults to all ones."""
    if n < 1 or p < 1:
        msg = f"need n >= 1 and p >= 1, got n={n}, p={p}"
        raise ContractViolation(msg)
    coefficients = np.ones(p) if beta is None else np.asarray(beta, dtype=np.float64)
    if coefficients.shape != (p,):
        msg = f"beta must have length p={p}"
        raise ContractViolation(msg)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, p - 1))
    y = coefficients[0] + x @ coefficients[1:] + noise * rng.standard_normal(n)
    return Dataset(x=x, y=y)
