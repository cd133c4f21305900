"""Estimator contracts and a name-based registry used by the bench and the CLI."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Protocol

from wls.core.errors import ContractViolation
from wls.core.types import Dataset
from wls.solvers.cgm import fit_wls
from wls.solvers.config import FitConfig
from wls.solvers.ls import fit_ls
from wls.solvers.lts import fit_lts
from wls.solvers.result import FitResult


class Estimator(Protocol):
    @property
    def name(self) -> str: ...

    def fit(self, d: Dataset, seed: int | None = None) -> FitResult: ...


@dataclass(frozen=True, slots=True)
class LeastSquares:
    name: str = "ls"

    def fit(self, d: Dataset, seed: int | None = None) -> FitResult:
        return fit_ls(d)


@dataclass(frozen=True, slots=True)
class LeastTrimmedSquares:
    config: FitConfig = field(default_factory=FitConfig)
    name: str = "lts"

    def fit(self, d: Dataset, seed: int | None = None) -> FitResult:
        cfg = self.config
        return fit_lts(
            d,
            cfg.lts_h,
            cfg.lts_starts,
            cfg.rng_seed if seed is None else seed,
            workers=cfg.lts_workers,
        )


@dataclass(frozen=True, slots=True)
class WeightedLeastSquares:
    config: FitConfig = field(default_factory=FitConfig)
    name: str = "wls"

    def fit(self, d: Dataset, seed: int | None = None) -> FitResult:
        cfg = self.config if seed is None else self.config.with_seed(seed)
        return fit_wls(d, cfg)


EstimatorFactory = Callable[[FitConfig], Estimator]


@dataclass(slots=True)
class EstimatorRegistry:
    """Maps estimator names to factories; lookup order is registration order."""

    _factories: dict[str, EstimatorFactory] = field(default_factory=dict)

    def register(self, name: str, factory: EstimatorFactory) -> None:
        if name in self._factories:
            msg = f"estimator '{name}' is already registered"
            raise ContractViolation(msg)
        self._factories[name] = factory

    def names(self) -> list[str]:
        return list(self._factories)

    def get(self, name: str, config: FitConfig | None = None) -> Estimator:
        factory = self._factories.get(name)
        if factory is None:
            msg = f"unknown estimator '{name}'; expected one of {', '.join(self._factories)}"
            raise ContractViolation(msg)
        return factory(config or FitConfig())

    def build(self, names: Iterable[str], config: FitConfig | None = None) -> list[Estimator]:
        return [self.get(name, config) for name in names]


def default_registry() -> EstimatorRegistry:
    registry = EstimatorRegistry()
    registry.register("ls", lambda _cfg: LeastSquares())
    registry.register("lts", lambda cfg: LeastTrimmedSquares(config=cfg))
    registry.register("wls", lambda cfg: WeightedLeastSquares(config=cfg))
    return registry
