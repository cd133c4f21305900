"""Residuals and design-matrix screens."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from wls.core.errors import ContractViolation, RankDeficient
from wls.core.types import Coefficients, Dataset, FloatArray


def as_coefficients(beta: npt.ArrayLike, p: int) -> Coefficients:
    """Validate a coefficient vector against the model dimension ``p``."""
    array = np.asarray(beta, dtype=np.float64).ravel()
    if array.shape != (p,):
        msg = f"coefficient vector must have length p={p}, got {array.shape[0]}"
        raise ContractViolation(msg)
    if not np.all(np.isfinite(array)):
        msg = "coefficient vector must be finite"
        raise ContractViolation(msg)
    return array


def residuals(d: Dataset, beta: npt.ArrayLike) -> FloatArray:
    """rᵢ(β) = yᵢ − (1, xᵢᵀ)β for every observation."""
    b = as_coefficients(beta, d.p)
    return d.y - b[0] - d.x @ b[1:]


@dataclass(frozen=True, slots=True)
class GeneralPositionHint:
    """Outcome of the rank screen; ``ok`` is advisory only."""

    ok: bool
    rank: int
    p: int
    diagnostic: str

    def __bool__(self) -> bool:
        return self.ok


def check_general_position_hint(d: Dataset) -> GeneralPositionHint:
    """Screen the full design matrix for numerical rank below p.

    This is a necessary condition for every p-subset to determine β
    uniquely; the exhaustive subset check is not attempted.
    """
    design = d.design_matrix()
    rank = int(np.linalg.matrix_rank(design))
    if rank < d.p:
        diagnostic = (
            f"design matrix (with intercept column) has numerical rank {rank} < p={d.p}; "
            "observations are not in general position"
        )
        return GeneralPositionHint(ok=False, rank=rank, p=d.p, diagnostic=diagnostic)
    return GeneralPositionHint(ok=True, rank=rank, p=d.p, diagnostic="full column rank")


def require_general_position(d: Dataset) -> None:
    """Raise ``RankDeficient`` when the rank screen rejects the design."""
    hint = check_general_position_hint(d)
    if not hint:
        raise RankDeficient(hint.rank, hint.p, "general position screen: design matrix")
