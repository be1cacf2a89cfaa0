"""
Unit tests for the shared argument validators.

Tests cover:
- require_finite on whole arrays and on a node subset
- Open-interval, positivity and integer-range guards
"""

import math

import numpy as np
import pytest

from src.geometry.exceptions import NonFiniteValueError
from src.utils.validation import (
    require_finite,
    require_min_int,
    require_open_interval,
    require_positive,
)


class TestRequireFinite:
    def test_returns_float_array(self) -> None:
        array = require_finite([1, 2, 3], "u")

        assert array.dtype == float
        np.testing.assert_array_equal(array, [1.0, 2.0, 3.0])

    def test_reports_first_bad_node(self) -> None:
        with pytest.raises(NonFiniteValueError, match="u has non-finite value") as excinfo:
            require_finite([0.0, np.nan, np.inf], "u")

        assert excinfo.value.node == 1

    def test_subset_ignores_other_nodes(self) -> None:
        values = np.array([np.nan, 1.0, 2.0, np.inf])

        require_finite(values, "u", nodes=np.array([1, 2]))

        with pytest.raises(NonFiniteValueError) as excinfo:
            require_finite(values, "u", nodes=np.array([1, 3]))
        assert excinfo.value.node == 3


class TestScalarGuards:
    @pytest.mark.parametrize("value", [0.0, 1.0, math.nan, math.inf])
    def test_open_interval_excludes_ends(self, value: float) -> None:
        with pytest.raises(ValueError, match=r"r must lie in \(0.0, 1.0\)"):
            require_open_interval(value, 0.0, 1.0, "r")

    def test_open_interval_accepts_inside(self) -> None:
        assert require_open_interval(0.5, 0.0, 1.0, "r") == 0.5

    def test_positive(self) -> None:
        assert require_positive(2.0, "tol") == 2.0
        assert require_positive(0.0, "alpha", allow_zero=True) == 0.0

        with pytest.raises(ValueError, match="tol must be > 0"):
            require_positive(0.0, "tol")
        with pytest.raises(ValueError, match=">= 0"):
            require_positive(-1.0, "alpha", allow_zero=True)

    @pytest.mark.parametrize("value", [1, 9, 2.5])
    def test_integer_range(self, value: float) -> None:
        with pytest.raises(ValueError, match="refinement must be an integer >= 2 and <= 8"):
            require_min_int(value, 2, "refinement", maximum=8)  # type: ignore[arg-type]

    def test_integer_without_upper_bound(self) -> None:
        assert require_min_int(100, 2, "terms") == 100
