"""
Unit-disk objects behind the Chang–Marshall inequality.

Beurling's function

    B_a(z) = log(1/(1 − a z)) / √(log 1/(1 − a²)),   0 < a < 1,

has Dirichlet integral exactly π and f(0) = 0; its boundary values satisfy
the level-set estimate |{θ : |f(e^{iθ})| ≥ s}| / 2π ≤ e^{1−s²}. The
Chang–Marshall functional is evaluated with the probability normalization

    CM_α(f, z) = ∫_0^{2π} e^{α|f(e^{iθ}) − f(z)|²} P_z(θ) dθ/2π,

so f ≡ 0 gives 1 (the dθ/π form found elsewhere is twice this value).
f(z) is the discrete Poisson extension of the boundary samples.

Boundary functions are sampled at θ_j = 2πj/m with m a power of two;
integrals over θ use the trapezoid rule, which is spectrally accurate for
smooth periodic integrands. Exponentials are summed in log space.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy.special import logsumexp

from src.disk.exceptions import (
    BeurlingParameterError,
    DiskError,
    InsufficientTermsError,
    SampleCountError,
)
from src.trace.functional import exp_or_inf
from src.trace.scan import CSV_FLOAT_FORMAT, ScanReport, Verdict

logger = logging.getLogger(__name__)

MIN_SAMPLES = 16
DEFAULT_SAMPLES = 2**16
MAX_RADIUS = 1.0 - 1e-9
SERIES_TOLERANCE = 1e-14
CM_BOUNDED_SPREAD = 1.5
CM_COLUMNS = ["a", "alpha", "z_re", "z_im", "cm_integral", "dirichlet_norm_sq"]


# =============================================================================
# TYPES
# =============================================================================


@dataclass(frozen=True, eq=False)
class BoundaryFunction1D:
    """
    Samples f(e^{iθ_j}) at θ_j = 2πj/m.

    Attributes:
        values: m real or complex samples, m >= 16 a power of two
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if not np.iscomplexobj(values):
            values = values.astype(float)
        m = values.size
        if values.ndim != 1 or m < MIN_SAMPLES or m & (m - 1):
            raise SampleCountError(
                f"sample count must be a power of two >= {MIN_SAMPLES}, got {m}"
            )
        if not np.all(np.isfinite(values)):
            raise DiskError("boundary samples must be finite")
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return int(self.values.size)

    @property
    def theta(self) -> np.ndarray:
        return theta_grid(self.m)

    @property
    def real(self) -> "BoundaryFunction1D":
        return BoundaryFunction1D(np.real(self.values).copy())

    def shifted(self, steps: int) -> "BoundaryFunction1D":
        """Rotation by 2π·steps/m."""
        return BoundaryFunction1D(np.roll(self.values, steps))

    def scaled(self, factor: float) -> "BoundaryFunction1D":
        return BoundaryFunction1D(factor * self.values)


@dataclass(frozen=True)
class DiskPoint:
    """Point of the open unit disk with |z| <= 1 − 1e-9."""

    z: complex

    def __post_init__(self) -> None:
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) > MAX_RADIUS:
            raise DiskError(f"disk point must satisfy |z| <= 1 - 1e-9, got {z}")
        object.__setattr__(self, "z", z)


def theta_grid(m: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(m) / m


def default_z_grid() -> list[DiskPoint]:
    """The centre plus 8 angles on each of the rings 0.3, 0.6, 0.9 (25 points)."""
    angles = 2.0 * np.pi * np.arange(8) / 8
    points = [DiskPoint(0j)]
    for radius in (0.3, 0.6, 0.9):
        points.extend(DiskPoint(complex(radius * np.exp(1j * t))) for t in angles)
    return points


# =============================================================================
# BEURLING FUNCTION
# =============================================================================


def _require_beurling_parameter(a: float) -> float:
    if not (math.isfinite(a) and 0.0 < a < 1.0):
        raise BeurlingParameterError(f"Beurling parameter a must lie in (0, 1), got {a}")
    return float(a)


def _log_normalizer(a: float) -> float:
    """log 1/(1 − a²)."""
    return -math.log1p(-a * a)


def beurling_values(a: float, theta: ArrayLike) -> np.ndarray:
    """
    B_a(e^{iθ}) on arbitrary angles (principal branch).

    1 − a e^{iθ} has real part (1 − a) + 2a sin²(θ/2) > 0, so the branch cut
    is never crossed; writing it this way keeps precision for a → 1, θ → 0.
    """
    a = _require_beurling_parameter(a)
    t = np.asarray(theta, dtype=float)
    re = (1.0 - a) + 2.0 * a * np.sin(0.5 * t) ** 2
    im = -a * np.sin(t)
    log_w = np.log(np.hypot(re, im)) + 1j * np.arctan2(im, re)
    return -log_w / math.sqrt(_log_normalizer(a))


def beurling_boundary(a: float, m: int = DEFAULT_SAMPLES) -> BoundaryFunction1D:
    """B_a sampled at m equispaced boundary points."""
    return BoundaryFunction1D(beurling_values(a, theta_grid(m)))


def _series_tail(a: float, terms: int) -> float:
    """Bound a^{2(T+1)} / ((T+1)(1 − a²)) on Σ_{k>T} a^{2k}/k."""
    k = terms + 1
    return math.exp(2.0 * k * math.log(a)) / (k * (1.0 - a * a))


def required_terms(a: float, tolerance: float = SERIES_TOLERANCE) -> int:
    """Smallest T whose series tail is <= tolerance · log 1/(1 − a²)."""
    a = _require_beurling_parameter(a)
    target = tolerance * _log_normalizer(a)
    high = 1
    while _series_tail(a, high) > target:
        high *= 2
    low = high // 2
    while high - low > 1:
        middle = (low + high) // 2
        if _series_tail(a, middle) > target:
            low = middle
        else:
            high = middle
    return high


def beurling_dirichlet_norm_sq(
    a: float, terms: Optional[int] = None, tolerance: float = SERIES_TOLERANCE
) -> float:
    """
    ∫∫_D |B_a'|² dx dy = π Σ_{k>=1} a^{2k}/k / log(1/(1 − a²)) by its series.

    Args:
        a: Beurling parameter in (0, 1)
        terms: Number of series terms (the minimal sufficient count if None)
        tolerance: Relative tail allowance

    Raises:
        BeurlingParameterError: If a is outside (0, 1)
        InsufficientTermsError: If ``terms`` leaves a tail above the tolerance
    """
    needed = required_terms(a, tolerance)
    if terms is None:
        terms = needed
    elif terms < needed:
        raise InsufficientTermsError(
            f"a={a:g} needs {needed} series terms for tolerance {tolerance:g}, got {terms}",
            needed_terms=needed,
        )
    k = np.arange(1, terms + 1, dtype=float)
    series = math.fsum(np.exp(2.0 * k * math.log(a)) / k)
    return math.pi * series / _log_normalizer(a)


def beurling_dirichlet_norm_sq_quadrature(
    a: float, radial_nodes: int = 200, angular_nodes: int = 4096
) -> float:
    """
    Tensor quadrature of |B_a'(z)|² = a² / (|1 − a z|² log 1/(1−a²)) over the disk.

    Gauss-Legendre in the radius, trapezoid in the angle.
    """
    a = _require_beurling_parameter(a)
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    rho = 0.5 * (x + 1.0)
    rho_weights = 0.5 * w
    theta = theta_grid(angular_nodes)
    z = rho[:, None] * np.exp(1j * theta)[None, :]
    density = a * a / (np.abs(1.0 - a * z) ** 2 * _log_normalizer(a))
    angular = density.mean(axis=1) * 2.0 * np.pi
    return float(np.sum(rho_weights * rho * angular))


# =============================================================================
# LEVEL SETS AND POISSON EXTENSION
# =============================================================================


def level_set_measure(f: BoundaryFunction1D, s: float) -> float:
    """Arc length (2π/m)·#{j : |f_j| >= s}."""
    if not s >= 0.0:
        raise ValueError(f"level s must be >= 0, got {s}")
    return 2.0 * math.pi * int(np.count_nonzero(np.abs(f.values) >= s)) / f.m


def level_set_bound(s: float) -> float:
    """e^{1 − s²}, the bound on the normalized level-set measure."""
    return math.exp(1.0 - s * s)


def distribution_bound(alpha: float) -> float:
    """
    1 + αe/(1 − α): the bound on ∫ e^{α|f|²} dθ/2π implied by the level-set estimate.

    Valid for 0 <= α < 1.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"the distribution bound needs 0 <= alpha < 1, got {alpha}")
    return 1.0 + alpha * math.e / (1.0 - alpha)


def poisson_kernel(z: DiskPoint, theta: ArrayLike) -> np.ndarray:
    """(1 − |z|²)/|e^{iθ} − z|², with mean 1 over the circle."""
    t = np.asarray(theta, dtype=float)
    return (1.0 - abs(z.z) ** 2) / np.abs(np.exp(1j * t) - z.z) ** 2


def poisson_extension(f: BoundaryFunction1D, z: DiskPoint) -> Union[float, complex]:
    """Harmonic extension of the samples at z (trapezoid rule)."""
    value = np.mean(poisson_kernel(z, f.theta) * f.values)
    return complex(value) if np.iscomplexobj(f.values) else float(value)


def harmonic_dirichlet_norm_sq(f: BoundaryFunction1D) -> float:
    """∫∫_D |∇u|² of the harmonic extension u: 2π Σ_k |k| |f̂_k|²."""
    coefficients = np.fft.fft(f.values) / f.m
    frequencies = np.abs(np.fft.fftfreq(f.m, d=1.0 / f.m))
    return float(2.0 * np.pi * np.sum(frequencies * np.abs(coefficients) ** 2))


def rescale_to_dirichlet(f: BoundaryFunction1D, target: float = math.pi) -> BoundaryFunction1D:
    """Scale f so that its harmonic Dirichlet integral equals ``target``."""
    current = harmonic_dirichlet_norm_sq(f)
    if current == 0.0:
        raise DiskError("cannot rescale a function with zero Dirichlet integral")
    return f.scaled(math.sqrt(target / current))


# =============================================================================
# CHANG–MARSHALL INTEGRAL
# =============================================================================


def log_cm_integral(f: BoundaryFunction1D, alpha: float, z: DiskPoint) -> float:
    """log ∫ e^{α|f − f(z)|²} P_z dθ/2π."""
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
    kernel = poisson_kernel(z, f.theta)
    centre = poisson_extension(f, z)
    exponents = alpha * np.abs(f.values - centre) ** 2
    return float(logsumexp(exponents + np.log(kernel))) - math.log(f.m)


def cm_integral(f: BoundaryFunction1D, alpha: float, z: DiskPoint) -> float:
    """∫_0^{2π} e^{α|f(e^{iθ}) − f(z)|²} P_z(θ) dθ/2π (+inf on overflow)."""
    return exp_or_inf(log_cm_integral(f, alpha, z))


def _graded_half_circle(
    a: float, nodes_per_panel: int, ratio: float
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes on [0, π], panels geometric away from θ = 0."""
    first = 0.01 * (1.0 - a)
    count = int(math.ceil(math.log(math.pi / first) / math.log(ratio)))
    edges = np.concatenate([[0.0], first * ratio ** np.arange(count), [math.pi]])
    edges = np.unique(np.append(edges[edges < math.pi], math.pi))
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    left, right = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (right - left) * x[None, :] + 0.5 * (right + left)
    weights = 0.5 * (right - left) * w[None, :]
    return nodes.ravel(), weights.ravel()


def beurling_cm_integral(
    a: float, alpha: float, nodes_per_panel: int = 8, ratio: float = 1.2
) -> float:
    """
    CM_α(Re B_a, 0) with θ-panels graded toward the peak at θ = 0.

    Re B_a is even in θ, so the integral is (1/π)∫_0^π. Resolves 1 − a down
    to about 1e-14, far past what equispaced samples reach.
    """
    a = _require_beurling_parameter(a)
    theta, weights = _graded_half_circle(a, nodes_per_panel, ratio)
    exponents = alpha * np.real(beurling_values(a, theta)) ** 2
    log_value = float(logsumexp(exponents + np.log(weights))) - math.log(math.pi)
    return exp_or_inf(log_value)


def cm_verdict(alpha: float, centre_values: Sequence[float]) -> Verdict:
    """
    Classify z = 0 values ordered by increasing a.

    α > 1: blow-up when strictly increasing. α < 1: bounded when the values
    stay within a factor 1.5. α = 1 is never classified.
    """
    values = np.asarray(centre_values, dtype=float)
    if values.size < 2 or alpha == 1.0:
        return Verdict.INCONCLUSIVE
    if alpha > 1.0:
        return Verdict.BLOW_UP if bool(np.all(np.diff(values) > 0.0)) else Verdict.INCONCLUSIVE
    if values.max() <= CM_BOUNDED_SPREAD * values.min():
        return Verdict.BOUNDED
    return Verdict.INCONCLUSIVE


def cm_scan(
    a_values: Iterable[float],
    alpha: float,
    z_points: Optional[Sequence[DiskPoint]] = None,
    m: int = DEFAULT_SAMPLES,
    target_norm_sq: Optional[float] = math.pi,
    max_workers: int = 1,
) -> ScanReport:
    """
    Chang–Marshall integrals of Re B_a over an a-grid and a z-grid.

    Args:
        a_values: Beurling parameters (rows follow a ascending, then z order)
        alpha: Exponent constant α >= 0
        z_points: Evaluation points (default_z_grid() if None)
        m: Boundary samples
        target_norm_sq: Rescale each f to this Dirichlet integral (None keeps Re B_a)
        max_workers: Threads evaluating a-values

    Returns:
        ScanReport "cm_scan" with columns a, alpha, z_re, z_im, cm_integral,
        dirichlet_norm_sq, log_cm_integral. The verdict reads the z = 0 column
        (cm_verdict); details carry the empirical cap over all rows.
    """
    points = list(z_points) if z_points is not None else default_z_grid()
    parameters = sorted({_require_beurling_parameter(float(a)) for a in a_values})

    def rows_for(a: float) -> list[dict[str, float]]:
        f = beurling_boundary(a, m).real
        if target_norm_sq is not None:
            f = rescale_to_dirichlet(f, target_norm_sq)
        norm_sq = harmonic_dirichlet_norm_sq(f)
        rows = []
        for point in points:
            log_value = log_cm_integral(f, alpha, point)
            rows.append(
                {
                    "a": a,
                    "alpha": alpha,
                    "z_re": point.z.real,
                    "z_im": point.z.imag,
                    "cm_integral": exp_or_inf(log_value),
                    "dirichlet_norm_sq": norm_sq,
                    "log_cm_integral": log_value,
                }
            )
        logger.debug("cm_scan a=%g: %d points, norm_sq=%.12g", a, len(points), norm_sq)
        return rows

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        blocks = list(pool.map(rows_for, parameters))

    table = pd.DataFrame(
        [row for block in blocks for row in block], columns=CM_COLUMNS + ["log_cm_integral"]
    )
    at_centre = table[(table["z_re"] == 0.0) & (table["z_im"] == 0.0)]
    verdict = cm_verdict(alpha, at_centre["cm_integral"].to_numpy(dtype=float))
    details: dict[str, Any] = {
        "alpha": alpha,
        "m": m,
        "empirical_cap": float(table["cm_integral"].max()) if len(table) else 0.0,
    }
    if len(at_centre) >= 2:
        centre = at_centre["cm_integral"].to_numpy(dtype=float)
        details["growth_factor"] = float(centre[-1] / centre[0])
    if 0.0 <= alpha < 1.0:
        details["distribution_bound"] = distribution_bound(alpha)
    logger.info("cm_scan alpha=%g over %d a-values: %s", alpha, len(parameters), verdict.value)
    return ScanReport(name="cm_scan", table=table, verdict=verdict, baseline=1.0, details=details)


def boundary_frame(f: BoundaryFunction1D) -> pd.DataFrame:
    """Samples as ``theta, value_re, value_im`` columns."""
    return pd.DataFrame(
        {"theta": f.theta, "value_re": np.real(f.values), "value_im": np.imag(f.values)}
    )


def export_boundary_csv(f: BoundaryFunction1D, path: Union[str, Path]) -> Path:
    """Write ``theta,value_re,value_im`` rows."""
    path = Path(path)
    boundary_frame(f).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path
