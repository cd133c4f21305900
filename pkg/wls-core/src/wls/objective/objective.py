"""Objective O(β) = Σ w(rᵢ²/c*)·rᵢ² with analytic gradient and Hessian."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from wls.core.design import as_coefficients
from wls.core.errors import ContractViolation
from wls.core.scale import ScaleMode, compute_cstar
from wls.core.types import Coefficients, Dataset, FloatArray
from wls.weightfn.weights import WeightParams, weight, weight_d1, weight_d2


@dataclass(frozen=True, slots=True)
class ObjectiveContext:
    """Dataset, weight constants and a c* frozen for one optimisation run."""

    dataset: Dataset
    params: WeightParams
    cstar: float
    design: FloatArray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (np.isfinite(self.cstar) and self.cstar > 0.0):
            msg = f"c* must be a positive finite number, got {self.cstar!r}"
            raise ContractViolation(msg)
        design = self.dataset.design_matrix()
        design.setflags(write=False)
        object.__setattr__(self, "design", design)

    @classmethod
    def from_dataset(
        cls,
        dataset: Dataset,
        params: WeightParams,
        scale_mode: ScaleMode,
        reference_beta: npt.ArrayLike | None = None,
        *,
        floor: bool = False,
    ) -> ObjectiveContext:
        cstar = compute_cstar(dataset, scale_mode, reference_beta, floor=floor)
        return cls(dataset=dataset, params=params, cstar=cstar)

    def residuals(self, beta: npt.ArrayLike) -> FloatArray:
        b = as_coefficients(beta, self.dataset.p)
        return self.dataset.y - self.design @ b

    def scaled_squares(self, beta: npt.ArrayLike) -> FloatArray:
        """uᵢ = rᵢ²/c*."""
        return self.residuals(beta) ** 2 / self.cstar

    def weights(self, beta: npt.ArrayLike) -> FloatArray:
        """Per-observation weights w(rᵢ²/c*)."""
        return weight(self.params, self.scaled_squares(beta))

    def value(self, beta: npt.ArrayLike) -> float:
        r = self.residuals(beta)
        r2 = r**2
        return float(np.sum(weight(self.params, r2 / self.cstar) * r2))

    def gradient(self, beta: npt.ArrayLike) -> Coefficients:
        """∇O = Σ −2rᵢ(w′(uᵢ)uᵢ + w(uᵢ))wᵢ."""
        r = self.residuals(beta)
        u = r**2 / self.cstar
        factor = -2.0 * r * (weight_d1(self.params, u) * u + weight(self.params, u))
        return np.asarray(self.design.T @ factor, dtype=np.float64)

    def hessian(self, beta: npt.ArrayLike) -> FloatArray:
        """∇²O = XᵀDX with Dᵢᵢ = 2γᵢ.

        γᵢ = 5uᵢw′(uᵢ) + w(uᵢ) + 2uᵢ²w″(uᵢ).

        In the unit-weight region γᵢ = 1, so the Hessian is 2XᵀX.
        """
        u = self.scaled_squares(beta)
        gamma = (
            5.0 * u * weight_d1(self.params, u)
            + weight(self.params, u)
            + 2.0 * u**2 * weight_d2(self.params, u)
        )
        weighted = self.design * (2.0 * gamma)[:, None]
        hess = self.design.T @ weighted
        return np.asarray(0.5 * (hess + hess.T), dtype=np.float64)
