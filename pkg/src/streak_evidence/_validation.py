"""Exceptions and small input checks shared across the package."""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np


class EvidenceInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class CromwellError(EvidenceInputError):
    """Raised when a probability of exactly 0 or 1 would make evidence moot.

    A prior or likelihood of 0 (or 1) cannot be revised by any evidence,
    so such inputs are rejected rather than propagated.
    """


class NumericalError(ArithmeticError):
    """Raised when a computation leaves the representable floating-point range."""


def check_finite(value: float, name: str) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise EvidenceInputError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise EvidenceInputError(f"{name} must be finite, got {value!r}")
    return value


def check_open_probability(value: float, name: str) -> float:
    """Return ``value`` as float if it lies strictly inside (0, 1)."""
    value = check_finite(value, name)
    if value <= 0.0 or value >= 1.0:
        raise CromwellError(
            f"{name} must lie strictly in (0, 1), got {value!r} "
            "(Cromwell's rule: 0 and 1 admit no update from evidence)"
        )
    return value


def check_probability_vector(values: Iterable[float], name: str = "qs") -> np.ndarray:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    if arr.ndim != 1:
        raise EvidenceInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise EvidenceInputError(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise EvidenceInputError(f"{name} contains non-finite entries")
    bad = np.flatnonzero((arr <= 0.0) | (arr >= 1.0))
    if bad.size:
        raise CromwellError(
            f"{name}[{bad[0]}] = {arr[bad[0]]!r} is not strictly in (0, 1) "
            "(Cromwell's rule: 0 and 1 admit no update from evidence)"
        )
    return arr


def check_int(value, name: str, *, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise EvidenceInputError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise EvidenceInputError(f"{name} must be >= {minimum}, got {value}")
    return value

