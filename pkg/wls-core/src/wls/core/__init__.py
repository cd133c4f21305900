"""Core data model: datasets, residuals, scale constant, errors and settings."""

from wls.core.design import (
    GeneralPositionHint,
    as_coefficients,
    check_general_position_hint,
    require_general_position,
    residuals,
)
from wls.core.errors import (
    ContractViolation,
    DatasetFormatError,
    DegenerateScale,
    NonFinite,
    RankDeficient,
    StudyPlanError,
    WLSError,
)
from wls.core.scale import ScaleMode, compute_cstar
from wls.core.types import Coefficients, Dataset, FloatArray

__all__ = [
    "Coefficients",
    "ContractViolation",
    "Dataset",
    "DatasetFormatError",
    "DegenerateScale",
    "FloatArray",
    "GeneralPositionHint",
    "NonFinite",
    "RankDeficient",
    "ScaleMode",
    "StudyPlanError",
    "WLSError",
    "as_coefficients",
    "check_general_position_hint",
    "compute_cstar",
    "require_general_position",
    "residuals",
]
