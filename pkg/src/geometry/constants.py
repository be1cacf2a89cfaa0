"""
Dimensional constants of the trace inequality.

Provides the surface measure ω_{n-1} of the unit sphere S^{n-1}, the interior
Moser constant α_n = n ω^{1/(n-1)}, the sharp trace constant
β_n = (n-1)(ω/2)^{1/(n-1)} and the Sobolev conjugate p* (1/p* = 1/p - 1/n).

Γ is evaluated with a Lanczos approximation (g = 7, nine coefficients), which
is accurate to ~15 digits for the half-integer arguments that occur here.

Functions:
    lanczos_gamma — Γ(x) for real x
    sphere_measure — ω_{n-1} = 2 π^{n/2} / Γ(n/2)
    unit_ball_volume — volume of the unit k-ball
    moser_constant — α_n
    trace_constant — β_n
    interior_trace_gap_constant — n (ω/2)^{1/(n-1)}
    sobolev_conjugate — p*
"""

import math
from dataclasses import dataclass

from src.geometry.exceptions import DimensionError


# =============================================================================
# CONSTANTS
# =============================================================================

_LANCZOS_G = 7
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


# =============================================================================
# Γ FUNCTION
# =============================================================================


def lanczos_gamma(x: float) -> float:
    """
    Evaluate Γ(x) with the Lanczos approximation.

    Uses the reflection formula Γ(x)Γ(1-x) = π / sin(πx) for x < 1/2.

    Args:
        x: Real argument, not a non-positive integer.

    Returns:
        Γ(x).

    Raises:
        ValueError: At the poles x = 0, -1, -2, ...
    """
    if x <= 0 and float(x).is_integer():
        raise ValueError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))

    z = x - 1.0
    series = _LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * series


# =============================================================================
# SPHERE AND BALL MEASURES
# =============================================================================


def _require_dimension(n: int, minimum: int = 2) -> int:
    if int(n) != n or n < minimum:
        raise DimensionError(f"dimension must be an integer >= {minimum}, got {n}")
    return int(n)


def sphere_measure(n: int) -> float:
    """
    Surface measure ω_{n-1} of the unit sphere S^{n-1} ⊂ ℝ^n.

    Args:
        n: Ambient dimension (n >= 2).

    Returns:
        2 π^{n/2} / Γ(n/2), e.g. 2π for n = 2 and 4π for n = 3.

    Raises:
        DimensionError: If n < 2.
    """
    n = _require_dimension(n)
    return 2.0 * math.pi ** (n / 2.0) / lanczos_gamma(n / 2.0)


def unit_ball_volume(k: int) -> float:
    """Volume of the unit ball in ℝ^k (k >= 1): π^{k/2} / Γ(k/2 + 1)."""
    k = _require_dimension(k, minimum=1)
    return math.pi ** (k / 2.0) / lanczos_gamma(k / 2.0 + 1.0)


def moser_constant(n: int) -> float:
    """Interior Moser constant α_n = n ω_{n-1}^{1/(n-1)} (4π for n = 2)."""
    n = _require_dimension(n)
    return n * sphere_measure(n) ** (1.0 / (n - 1))


def trace_constant(n: int) -> float:
    """
    Sharp trace constant β_n = (n-1)(ω_{n-1}/2)^{1/(n-1)}.

    β_2 = π, β_3 = 2 (2π)^{1/2}.
    """
    n = _require_dimension(n)
    return (n - 1) * (sphere_measure(n) / 2.0) ** (1.0 / (n - 1))


def interior_trace_gap_constant(n: int) -> float:
    """Ceiling n (ω_{n-1}/2)^{1/(n-1)} for α p* in the boundary-to-interior conversion."""
    n = _require_dimension(n)
    return n * (sphere_measure(n) / 2.0) ** (1.0 / (n - 1))


def sobolev_conjugate(p: float, n: int) -> float:
    """
    Sobolev conjugate p* with 1/p* = 1/p - 1/n.

    Raises:
        DimensionError: Unless 1 < p < n.
    """
    n = _require_dimension(n)
    if not (1.0 < p < n):
        raise DimensionError(f"p must lie in (1, {n}), got {p}")
    return n * p / (n - p)


# =============================================================================
# CONSTANT BUNDLE
# =============================================================================


@dataclass(frozen=True)
class DimensionConstants:
    """
    The constants appearing in every formula for a given (n, p).

    Attributes:
        n: Dimension (>= 2)
        omega: ω_{n-1}, surface measure of the unit (n-1)-sphere
        alpha_n: Interior Moser constant
        beta_n: Sharp trace constant
        p: Exponent of the trace-function energy, 1 < p < n
        p_star: Sobolev conjugate of p
    """

    n: int
    omega: float
    alpha_n: float
    beta_n: float
    p: float
    p_star: float

    @classmethod
    def build(cls, n: int, p: float) -> "DimensionConstants":
        """Compute the bundle for dimension ``n`` and exponent ``p``."""
        p_star = sobolev_conjugate(p, n)
        return cls(
            n=int(n),
            omega=sphere_measure(n),
            alpha_n=moser_constant(n),
            beta_n=trace_constant(n),
            p=float(p),
            p_star=p_star,
        )

    @property
    def critical_exponent(self) -> float:
        """n/(n-1), the exponent of |u| inside the exponential."""
        return self.n / (self.n - 1.0)

    def to_dict(self) -> dict[str, float]:
        """Serialize to dictionary for report envelopes."""
        return {
            "n": self.n,
            "omega": self.omega,
            "alpha_n": self.alpha_n,
            "beta_n": self.beta_n,
            "p": self.p,
            "p_star": self.p_star,
        }
