"""Exception hierarchy shared by every WLS layer."""

from __future__ import annotations


class WLSError(Exception):
    """Base class for all library errors."""


class ContractViolation(WLSError, ValueError):
    """An argument broke an operation precondition (shape, range, type)."""


class DegenerateScale(WLSError):
    """The resolved scale constant c* is not strictly positive."""

    def __init__(self, cstar: float, mode: str) -> None:
        self.cstar = cstar
        self.mode = mode
        super().__init__(
            f"scale constant c*={cstar!r} from mode '{mode}' is not positive; "
            "more than half of the squared values are zero (use the scale floor to override)"
        )


class RankDeficient(WLSError):
    """The design matrix (or a required subset of it) has numerical rank below p."""

    def __init__(self, rank: int, p: int, context: str = "design matrix") -> None:
        self.rank = rank
        self.p = p
        super().__init__(f"{context} has numerical rank {rank} < p={p}")


class NonFinite(WLSError):
    """An objective evaluation produced NaN or infinity where a finite value is required."""


class DatasetFormatError(WLSError, ValueError):
    """A CSV input could not be turned into a Dataset."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class StudyPlanError(WLSError, ValueError):
    """A study plan document failed schema or semantic validation."""
