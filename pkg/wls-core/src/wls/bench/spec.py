"""Simulation recipes: clean generator plus contamination scheme."""

from __future__ import annotations

import math
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from wls.core.types import FloatArray


class JointNormalReplace(BaseModel):
    """zᵢ ~ N(0, Σ) in ℝᵖ (last coordinate is y); m rows overwritten by ``point``.

    ``point`` defaults to (3, …, 3, −3).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["joint_normal_replace"] = "joint_normal_replace"
    point: tuple[float, ...] | None = None


class FixedBeta(BaseModel):
    """yᵢ = (1, xᵢᵀ)β₀ + eᵢ with standard normal xᵢ and eᵢ; m rows become ``point``.

    ``point`` defaults to (3.5, …, 3.5).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["fixed_beta"] = "fixed_beta"
    beta0: tuple[float, ...]
    point: tuple[float, ...] | None = None


class JointNormalShift(BaseModel):
    """As ``JointNormalReplace`` but replaced rows are drawn from N(center, spread²·I)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["joint_normal_shift"] = "joint_normal_shift"
    center: tuple[float, ...] | None = None
    spread: float = Field(default=0.5, gt=0.0)


Scheme = Annotated[
    JointNormalReplace | FixedBeta | JointNormalShift,
    Field(discriminator="kind"),
]

EmseTarget = Literal["zero", "population"]


class SimulationSpec(BaseModel):
    """One study cell: sample size, dimension, contamination level and replications."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    p: int = Field(ge=1)
    epsilon: float = Field(default=0.0, ge=0.0, lt=0.5)
    rho: float = 0.9
    replications: int = Field(default=1000, ge=1)
    scheme: Scheme = Field(default_factory=JointNormalReplace)
    seed: int = Field(default=0, ge=0)
    target: EmseTarget = "zero"

    @model_validator(mode="after")
    def _check_shapes(self) -> SimulationSpec:
        if self.p > 1 and not (-1.0 / (self.p - 1) < self.rho < 1.0):
            msg = f"rho={self.rho} must lie in (-1/(p-1), 1) = ({-1.0 / (self.p - 1):.6g}, 1)"
            raise ValueError(msg)
        if self.p == 1 and not (-1.0 < self.rho < 1.0):
            msg = f"rho={self.rho} must lie in (-1, 1)"
            raise ValueError(msg)
        scheme = self.scheme
        vectors: dict[str, tuple[float, ...] | None] = {}
        if isinstance(scheme, FixedBeta):
            vectors = {"beta0": scheme.beta0, "point": scheme.point}
        elif isinstance(scheme, JointNormalReplace):
            vectors = {"point": scheme.point}
        else:
            vectors = {"center": scheme.center}
        for name, vector in vectors.items():
            if vector is not None and len(vector) != self.p:
                msg = f"scheme {name} has length {len(vector)}, expected p={self.p}"
                raise ValueError(msg)
        if self.contamination_count > self.n:
            msg = f"contamination count {self.contamination_count} exceeds n={self.n}"
            raise ValueError(msg)
        return self

    @property
    def contamination_count(self) -> int:
        """m = ⌈n·ε⌉ (n·ε is rounded to 12 decimals first so 50·0.1 stays 5)."""
        return math.ceil(round(self.n * self.epsilon, 12))

    @property
    def true_beta(self) -> FloatArray:
        """β₀ that every fit is scored against.

        Fixed-β uses its own β₀. The joint-normal schemes use 0 (``target="zero"``)
        or, with ``target="population"``, the population regression of y on x:
        intercept 0 and slopes Σₓₓ⁻¹Σₓᵧ.
        """
        if isinstance(self.scheme, FixedBeta):
            return np.asarray(self.scheme.beta0, dtype=np.float64)
        if self.target == "zero" or self.p == 1:
            return np.zeros(self.p)
        sigma = self.covariance()
        slopes = np.linalg.solve(sigma[:-1, :-1], sigma[:-1, -1])
        return np.concatenate([[0.0], slopes])

    @property
    def replacement_point(self) -> FloatArray:
        """Fixed contamination point, or the shift centre for ``JointNormalShift``."""
        scheme = self.scheme
        if isinstance(scheme, FixedBeta):
            default = np.full(self.p, 3.5)
            chosen = scheme.point
        else:
            default = np.append(np.full(self.p - 1, 3.0), -3.0)
            chosen = scheme.point if isinstance(scheme, JointNormalReplace) else scheme.center
        return default if chosen is None else np.asarray(chosen, dtype=np.float64)

    def covariance(self) -> FloatArray:
        """Σ with unit diagonal and ``rho`` off the diagonal."""
        return (1.0 - self.rho) * np.eye(self.p) + self.rho * np.ones((self.p, self.p))

    def label(self) -> str:
        return f"p={self.p} n={self.n} eps={self.epsilon:g} {self.scheme.kind}"
