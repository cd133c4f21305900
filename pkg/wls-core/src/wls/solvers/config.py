"""Solver configuration models."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wls.core.config import Settings
from wls.core.scale import ScaleMode
from wls.weightfn.weights import WeightParams

InitializerKind = Literal["lts", "ls", "given"]


class LineSearch(BaseModel):
    """Step-length rule.

    ``newton`` uses α = −∇Oᵀv / vᵀHv and backtracks (starting from that α)
    when the curvature is not positive or the step fails the sufficient
    decrease test. ``backtracking`` always starts from a unit step.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["newton", "backtracking"] = "newton"
    armijo: float = Field(default=0.3, gt=0.0, le=0.5)
    shrink: float = Field(default=0.8, gt=0.0, lt=1.0)
    max_backtracks: int = Field(default=200, ge=1)


class FitConfig(BaseModel):
    """Everything ``fit_wls`` needs besides the data."""

    model_config = ConfigDict(frozen=True)

    weight_params: WeightParams = Field(default_factory=WeightParams)
    scale_mode: ScaleMode = Field(default_factory=ScaleMode)
    scale_floor: bool = False
    cutoff_quantile: float | None = Field(default=None, gt=0.0, lt=1.0)
    tolerance: float = Field(default=1e-8, gt=0.0)
    max_outer_cycles: int = Field(default=50, ge=1)
    line_search: LineSearch = Field(default_factory=LineSearch)
    initializer: InitializerKind = "lts"
    initial_beta: tuple[float, ...] | None = None
    keep_best_of_initializer: bool = True
    rng_seed: int = Field(default=0, ge=0)
    lts_h: int | None = Field(default=None, ge=1)
    lts_starts: int = Field(default=200, ge=1)
    lts_workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _given_needs_beta(self) -> FitConfig:
        if self.initializer == "given" and self.initial_beta is None:
            msg = "initializer='given' requires initial_beta"
            raise ValueError(msg)
        return self

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: object) -> FitConfig:
        """Defaults from ``Settings`` (``WLS_*`` env), then explicit overrides."""
        base: dict[str, object] = {
            "weight_params": WeightParams(k=settings.weight_k, c=settings.weight_c),
            "tolerance": settings.tolerance,
            "max_outer_cycles": settings.max_outer_cycles,
            "lts_starts": settings.lts_starts,
        }
        base.update(overrides)
        return cls.model_validate(base)

    def with_seed(self, seed: int) -> FitConfig:
        return self.model_copy(update={"rng_seed": seed})
