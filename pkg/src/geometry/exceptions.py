"""
Custom exceptions for the geometry layer.

Hierarchy:
    GeometryError (base)
    ├── DimensionError — dimension or exponent outside the admissible range
    ├── MeshError — malformed triangulation or mesh file
    └── NonFiniteValueError — NaN/inf nodal value reaching a quadrature
"""

from typing import Optional


class GeometryError(Exception):
    """Base exception for geometry layer errors."""

    pass


class DimensionError(GeometryError):
    """Dimension n (or exponent p) outside the admissible range."""

    pass


class MeshError(GeometryError):
    """Triangulation violates an invariant (orientation, loops, format)."""

    pass


class NonFiniteValueError(GeometryError):
    """
    A nodal value entering a quadrature is NaN or infinite.

    Carries the offending node index so scans can report it.
    """

    def __init__(self, message: str, node: Optional[int] = None, value: float = float("nan")):
        super().__init__(message)
        self.node = node
        self.value = value
