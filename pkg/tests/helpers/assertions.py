"""Custom assertion helpers for numerical lab tests."""

from typing import Optional, Sequence

import numpy as np


def assert_relative_close(
    actual: float,
    expected: float,
    rel_tol: float,
    msg: Optional[str] = None,
) -> None:
    """Assert that |actual − expected| <= rel_tol·|expected|.

    Raises:
        AssertionError: If the relative difference exceeds rel_tol
    """
    diff = abs(actual - expected)
    if diff > rel_tol * abs(expected):
        error_msg = (
            f"{actual!r} not within relative tolerance {rel_tol:g} of {expected!r}. "
            f"Relative difference: {diff / abs(expected) if expected else float('inf'):.3e}"
        )
        if msg:
            error_msg = f"{msg}: {error_msg}"
        raise AssertionError(error_msg)


def assert_strictly_increasing(values: Sequence[float], msg: Optional[str] = None) -> None:
    """Assert every consecutive difference is positive."""
    array = np.asarray(values, dtype=float)
    steps = np.diff(array)
    if not np.all(steps > 0.0):
        first = int(np.flatnonzero(steps <= 0.0)[0])
        error_msg = (
            f"values are not strictly increasing at index {first}: "
            f"{array[first]!r} -> {array[first + 1]!r}"
        )
        if msg:
            error_msg = f"{msg}: {error_msg}"
        raise AssertionError(error_msg)


def assert_mean_zero(integral: float, area: float, tol: float = 1e-12) -> None:
    """Assert a domain integral vanishes relative to the domain area."""
    if abs(integral) > tol * area:
        raise AssertionError(f"domain integral {integral!r} is not zero (area {area!r})")
