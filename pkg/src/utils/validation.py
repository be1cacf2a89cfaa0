"""Shared argument validation utilities.

Small guards used across layers to reject non-finite arrays and
out-of-range scalars before any numerical work starts.
"""

import math
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from src.geometry.exceptions import NonFiniteValueError


def require_finite(
    values: ArrayLike, what: str, nodes: Optional[np.ndarray] = None
) -> np.ndarray:
    """Return ``values`` as a float array, rejecting NaN/inf entries.

    Args:
        values: Nodal values (any array-like)
        what: Name used in the error message
        nodes: Restrict the check to these indices (e.g. boundary nodes)

    Raises:
        NonFiniteValueError: If a checked entry is not finite (first index reported)
    """
    array = np.asarray(values, dtype=float)
    checked = array.ravel() if nodes is None else array.ravel()[nodes]
    bad = np.flatnonzero(~np.isfinite(checked))
    if bad.size:
        node = int(bad[0]) if nodes is None else int(nodes[bad[0]])
        value = float(array.flat[node])
        raise NonFiniteValueError(
            f"{what} has non-finite value {value!r} at node {node}", node=node, value=value
        )
    return array


def require_open_interval(value: float, low: float, high: float, name: str) -> float:
    """Validate ``low < value < high``.

    Raises:
        ValueError: If validation fails
    """
    if not (math.isfinite(value) and low < value < high):
        raise ValueError(f"{name} must lie in ({low}, {high}), got {value}")
    return float(value)


def require_positive(value: float, name: str, allow_zero: bool = False) -> float:
    """Validate ``value > 0`` (or ``>= 0`` with ``allow_zero``).

    Raises:
        ValueError: If validation fails
    """
    ok = value >= 0 if allow_zero else value > 0
    if not (math.isfinite(value) and ok):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be {bound}, got {value}")
    return float(value)


def require_min_int(value: int, minimum: int, name: str, maximum: Optional[int] = None) -> int:
    """Validate an integer lower (and optional upper) bound.

    Raises:
        ValueError: If validation fails
    """
    if int(value) != value or value < minimum or (maximum is not None and value > maximum):
        upper = f" and <= {maximum}" if maximum is not None else ""
        raise ValueError(f"{name} must be an integer >= {minimum}{upper}, got {value}")
    return int(value)
