"""
Custom exceptions for the extremal-sequence layer.

Hierarchy:
    ExtremalError (base)
    ├── UnderResolvedMeshError — mesh too coarse around the concentration point
    └── TraceBoundaryError — concentration point not on the trace boundary
"""


class ExtremalError(Exception):
    """Base exception for extremal-sequence errors."""

    pass


class UnderResolvedMeshError(ExtremalError):
    """
    Local mesh size near the concentration point exceeds r/4.

    Carries the required and the measured local mesh size.
    """

    def __init__(self, message: str, required_h: float, actual_h: float):
        super().__init__(message)
        self.required_h = required_h
        self.actual_h = actual_h


class TraceBoundaryError(ExtremalError):
    """Concentration point requested on the trace boundary lies elsewhere."""

    pass
