"""
Custom exceptions for the reporting layer.

Hierarchy:
    ReportingError (base)
    └── UsageError — invalid command-line input or configuration
"""

from typing import Optional


class ReportingError(Exception):
    """Base exception for reporting errors."""

    pass


class UsageError(ReportingError):
    """Invalid run input; carries the offending field name."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field
