"""Finite-sample replacement breakdown point of the WLS estimator."""

from __future__ import annotations

from fractions import Fraction

from wls.core.errors import ContractViolation


def rbp_theoretical(n: int, p: int) -> Fraction:
    """⌊(n+1)/2⌋/n for p = 1, (⌊(n−p)/2⌋+1)/n for p > 1."""
    if p < 1 or n <= p:
        msg = f"breakdown point needs n > p >= 1, got n={n}, p={p}"
        raise ContractViolation(msg)
    if p == 1:
        return Fraction((n + 1) // 2, n)
    return Fraction((n - p) // 2 + 1, n)
