"""
Custom exceptions for the unit-disk layer.

Hierarchy:
    DiskError (base)
    ├── BeurlingParameterError — Beurling parameter a outside (0, 1)
    ├── InsufficientTermsError — series truncated before the requested accuracy
    └── SampleCountError — boundary sample count not a power of two >= 16
"""


class DiskError(Exception):
    """Base exception for unit-disk errors."""

    pass


class BeurlingParameterError(DiskError):
    """Beurling parameter a must satisfy 0 < a < 1."""

    pass


class InsufficientTermsError(DiskError):
    """Too few series terms; carries the count that meets the tolerance."""

    def __init__(self, message: str, needed_terms: int):
        super().__init__(message)
        self.needed_terms = needed_terms


class SampleCountError(DiskError):
    """Boundary samples must number a power of two, at least 16."""

    pass
