"""
Custom exceptions for the torsion solver.

Hierarchy:
    SolverError (base)
    ├── IterationLimitError — iteration cap reached before the tolerance
    ├── LineSearchError — backtracking found no acceptable step
    └── NonFiniteEnergyError — NaN energy or search direction
"""

from typing import TYPE_CHECKING, Any, Optional

if TYPE_CHECKING:
    from src.solver.torsion import SolveReport


class SolverError(Exception):
    """Base exception for solver errors."""

    pass


class IterationLimitError(SolverError):
    """Iteration cap exceeded; carries the best iterate as a SolveReport."""

    def __init__(self, message: str, report: Optional["SolveReport"] = None):
        super().__init__(message)
        self.report = report


class LineSearchError(SolverError):
    """Step halving reached the minimum step without an acceptable decrease."""

    def __init__(self, message: str, report: Optional["SolveReport"] = None):
        super().__init__(message)
        self.report = report


class NonFiniteEnergyError(SolverError):
    """Energy or direction became non-finite; carries the step trace."""

    def __init__(self, message: str, trace: Optional[list[dict[str, Any]]] = None):
        super().__init__(message)
        self.trace = trace or []
