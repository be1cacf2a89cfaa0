"""Argument validators shared by the numerical layers."""

from src.utils.validation import (
    require_finite,
    require_min_int,
    require_open_interval,
    require_positive,
)

__all__ = ["require_finite", "require_min_int", "require_open_interval", "require_positive"]
