"""Scale constant c* used to normalise squared residuals."""

from __future__ import annotations

import logging
from typing import Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict

from wls.core.design import residuals
from wls.core.errors import ContractViolation, DegenerateScale
from wls.core.logs import log_event
from wls.core.types import Dataset

logger = logging.getLogger(__name__)

ScaleKind = Literal["median_y_squared", "median_initial_residual_squared"]
ScaleReference = Literal["initializer", "ls", "lts"]

SCALE_FLOOR_FACTOR = 1e-12


class ScaleMode(BaseModel):
    """How c* is resolved for one optimisation run.

    ``median_y_squared`` is Med{yᵢ²}. ``median_initial_residual_squared`` is
    the median of squared residuals at a reference fit; ``reference`` names
    which fit supplies it when a solver resolves the mode.
    """

    model_config = ConfigDict(frozen=True)

    kind: ScaleKind = "median_y_squared"
    reference: ScaleReference = "initializer"

    @classmethod
    def median_y_squared(cls) -> ScaleMode:
        return cls(kind="median_y_squared")

    @classmethod
    def median_initial_residual_squared(
        cls, reference: ScaleReference = "initializer"
    ) -> ScaleMode:
        return cls(kind="median_initial_residual_squared", reference=reference)

    @property
    def needs_reference_fit(self) -> bool:
        return self.kind == "median_initial_residual_squared"


def compute_cstar(
    d: Dataset,
    mode: ScaleMode,
    initial_beta: npt.ArrayLike | None = None,
    *,
    floor: bool = False,
) -> float:
    """Resolve c* for ``d``; even-n medians average the two middle order statistics.

    Raises:
        ContractViolation: residual mode requested without a reference fit.
        DegenerateScale: resolved value is not positive and ``floor`` is off.
    """
    if mode.kind == "median_y_squared":
        squares = d.y**2
    else:
        if initial_beta is None:
            msg = "median_initial_residual_squared needs the reference fit coefficients"
            raise ContractViolation(msg)
        squares = residuals(d, initial_beta) ** 2

    cstar = float(np.median(squares))
    if cstar > 0.0:
        return cstar
    if not floor:
        raise DegenerateScale(cstar, mode.kind)

    floored = max(cstar, SCALE_FLOOR_FACTOR * (1.0 + float(np.max(d.y**2))))
    log_event(
        logger,
        "scale_floor_applied",
        level=logging.WARNING,
        mode=mode.kind,
        cstar=cstar,
        floored=floored,
    )
    return floored
