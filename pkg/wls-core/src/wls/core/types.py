"""Canonical data types shared across WLS layers."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from wls.core.errors import ContractViolation

FloatArray: TypeAlias = npt.NDArray[np.float64]
Coefficients: TypeAlias = FloatArray
"""Length-p vector; entry 0 is the intercept, the rest the slope part."""


def _frozen(values: npt.ArrayLike, *, ndim: int) -> FloatArray:
    array = np.array(values, dtype=np.float64, copy=True, ndmin=ndim)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, slots=True)
class Dataset:
    """Immutable sample z^(n): carriers ``x`` (n×(p−1)) and responses ``y`` (n).

    Design rows are implied as (1, xᵢᵀ); ``x`` may have zero columns for the
    intercept-only model (p = 1).
    """

    x: FloatArray
    y: FloatArray

    def __post_init__(self) -> None:
        y = _frozen(self.y, ndim=1)
        x = np.array(self.x, dtype=np.float64, copy=True)
        if x.ndim == 1:
            x = x.reshape(-1, 1) if x.size == y.size else x.reshape(y.size, -1)
        if x.ndim != 2 or y.ndim != 1:
            msg = f"x must be 2-D and y 1-D, got shapes {x.shape} and {y.shape}"
            raise ContractViolation(msg)
        if x.shape[0] != y.shape[0]:
            msg = f"row count of x ({x.shape[0]}) differs from length of y ({y.shape[0]})"
            raise ContractViolation(msg)
        if y.shape[0] < 1:
            msg = "dataset needs at least one observation"
            raise ContractViolation(msg)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            msg = "dataset entries must be finite (no NaN/Inf)"
            raise ContractViolation(msg)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_arrays(cls, x: npt.ArrayLike, y: npt.ArrayLike) -> Dataset:
        """Build a dataset; a 1-D ``x`` is read as a single carrier column."""
        return cls(x=np.asarray(x, dtype=np.float64), y=np.asarray(y, dtype=np.float64))

    @classmethod
    def intercept_only(cls, y: npt.ArrayLike) -> Dataset:
        responses = np.asarray(y, dtype=np.float64).ravel()
        return cls(x=np.empty((responses.size, 0)), y=responses)

    @property
    def n(self) -> int:
        return int(self.y.shape[0])

    @property
    def p(self) -> int:
        return int(self.x.shape[1]) + 1

    def design_matrix(self) -> FloatArray:
        """Return Xₙ with rows wᵢᵀ = (1, xᵢᵀ)."""
        return np.column_stack([np.ones(self.n), self.x])

    def replace_rows(
        self, rows: Sequence[int] | npt.NDArray[np.intp], point: FloatArray
    ) -> Dataset:
        """Return a copy where the given rows are overwritten.

        ``point`` is either one full observation (x₁..x_{p−1}, y) of length p
        or a matrix with one such observation per replaced row.
        """
        index = np.asarray(rows, dtype=np.intp)
        values = np.asarray(point, dtype=np.float64)
        if values.ndim == 1:
            values = np.broadcast_to(values, (index.size, values.size))
        if values.shape != (index.size, self.p):
            msg = f"replacement block must have shape ({index.size}, {self.p}), got {values.shape}"
            raise ContractViolation(msg)
        x = np.array(self.x, copy=True)
        y = np.array(self.y, copy=True)
        x[index] = values[:, :-1]
        y[index] = values[:, -1]
        return Dataset(x=x, y=y)

    def with_response(self, y: npt.ArrayLike) -> Dataset:
        return Dataset(x=self.x, y=np.asarray(y, dtype=np.float64))
