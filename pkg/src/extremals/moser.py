"""
Moser-type concentrating sequence on planar meshes.

    u_r(x) = 1                          |x − y| ≤ r
             log(1/|x−y|) / log(1/r)    r < |x − y| < 1
             0                          |x − y| ≥ 1

With y on a flat piece of the boundary, only half of every circle around y
lies in Ω, so ‖∇u_r‖_n^n = ½ ω_{n-1} (log 1/r)^{-(n-1)} exactly in the
half-space. Normalizing u_r to mean zero and unit L^n gradient norm puts a
plateau value of roughly (2/ω_{n-1})^{1/n} (log 1/r)^{(n-1)/n} on a trace
disk of radius r, so

    ∫_∂Ω e^{α|u|^{n/(n-1)}}  ≳  r^{n-1} (1/r)^{α (ω_{n-1}/2)^{-1/(n-1)}},

which diverges as r → 0 exactly when α exceeds the trace constant β_n.

Functions:
    moser_profile — the truncated-logarithm profile as a function of distance
    moser_function — nodal interpolant of u_r (optionally mollified)
    moser_norm_predicted / moser_norm_measured — ‖∇u_r‖_n^n
    normalized_test_sequence — (u_r − mean)/‖∇u_r‖_n over a list of radii
    sharpness_experiment — trace integrals against the diverging lower bound
    growth_exponent / predicted_growth_exponent — log-log slope of a scan
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from src.energy.p_energy import MeshFunction, dirichlet_norm, mean_zero_project
from src.extremals.exceptions import TraceBoundaryError, UnderResolvedMeshError
from src.geometry.constants import sphere_measure, trace_constant
from src.geometry.exceptions import DimensionError
from src.geometry.mesh import TRACE_TAG, TriMesh, boundary_measure
from src.trace.functional import exp_or_inf
from src.trace.scan import (
    DOMINANCE_FRACTION,
    SCAN_COLUMNS,
    ScanReport,
    Verdict,
    dominance_verdict,
    evaluate_member,
)
from src.utils.validation import require_open_interval, require_positive

logger = logging.getLogger(__name__)

RESOLUTION_FRACTION = 0.25
ON_BOUNDARY_TOLERANCE = 1e-12
SHARPNESS_COLUMNS = SCAN_COLUMNS + [
    "log_trace_integral",
    "lower_bound",
    "log_lower_bound",
    "plateau",
]

_MOLLIFIER_NODES, _MOLLIFIER_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class MoserParams:
    """
    Parameters of one member u_r.

    Attributes:
        r: Plateau radius, 0 < r < 1 (outer radius is 1)
        center: Concentration point y
        n: Dimension of the L^n normalization (2 on planar meshes)
        mollification: Width ε of the radial smoothing, 0 <= ε <= r/2
        on_trace_boundary: Require y on the "trace" boundary segment
    """

    r: float
    center: tuple[float, float] = (0.0, 0.0)
    n: int = 2
    mollification: float = 0.0
    on_trace_boundary: bool = True

    def __post_init__(self) -> None:
        require_open_interval(self.r, 0.0, 1.0, "r")
        if int(self.n) != self.n or self.n < 2:
            raise DimensionError(f"dimension must be an integer >= 2, got {self.n}")
        if not (0.0 <= self.mollification <= 0.5 * self.r):
            raise ValueError(
                f"mollification must lie in [0, r/2] = [0, {0.5 * self.r:g}], "
                f"got {self.mollification}"
            )
        x, y = self.center
        object.__setattr__(self, "center", (float(x), float(y)))

    def with_radius(self, r: float) -> "MoserParams":
        return replace(self, r=r)

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "center": list(self.center),
            "n": self.n,
            "mollification": self.mollification,
            "on_trace_boundary": self.on_trace_boundary,
        }


# =============================================================================
# PROFILE
# =============================================================================


def moser_profile(distance: ArrayLike, r: float) -> np.ndarray:
    """clip(log(1/d)/log(1/r), 0, 1) elementwise (1 at d = 0)."""
    d = np.asarray(distance, dtype=float)
    with np.errstate(divide="ignore"):
        values = -np.log(d) / math.log(1.0 / r)
    return np.clip(values, 0.0, 1.0)


def _mollified_profile(distance: np.ndarray, r: float, width: float) -> np.ndarray:
    if width == 0.0:
        return moser_profile(distance, r)
    # Average of the profile over [d − ε, d + ε] (16-point Gauss-Legendre).
    shifted = np.abs(distance[:, None] + width * _MOLLIFIER_NODES[None, :])
    return moser_profile(shifted, r) @ (0.5 * _MOLLIFIER_WEIGHTS)


def _check_mesh(params: MoserParams, mesh: TriMesh) -> None:
    if params.n != 2:
        raise DimensionError(
            f"planar meshes carry n = 2 only (got n = {params.n}); use the radial model"
        )
    if params.on_trace_boundary:
        if TRACE_TAG not in mesh.tags:
            raise TraceBoundaryError(f"mesh has no {TRACE_TAG!r} boundary")
        trace_edges = mesh.boundary_edges[mesh.boundary_edge_mask([TRACE_TAG])]
        gap = float(mesh.distance_to_edges(params.center, trace_edges).min())
        if gap > ON_BOUNDARY_TOLERANCE:
            raise TraceBoundaryError(
                f"center {params.center} is {gap:.3e} away from the {TRACE_TAG!r} boundary"
            )
    required = RESOLUTION_FRACTION * params.r
    actual = mesh.max_edge_length_near(params.center, params.r)
    if actual > required:
        raise UnderResolvedMeshError(
            f"r={params.r:g} needs local mesh size <= {required:.3e} near {params.center}, "
            f"mesh has {actual:.3e}",
            required_h=required,
            actual_h=actual,
        )


def moser_function(params: MoserParams, mesh: TriMesh) -> MeshFunction:
    """
    Nodal interpolant of u_r centred at ``params.center``.

    Raises:
        DimensionError: If params.n != 2
        TraceBoundaryError: If the center must be on the trace boundary but is not
        UnderResolvedMeshError: If edges within r of the center exceed r/4
    """
    _check_mesh(params, mesh)
    distance = np.linalg.norm(mesh.vertices - np.asarray(params.center), axis=1)
    return MeshFunction(mesh, _mollified_profile(distance, params.r, params.mollification))


# =============================================================================
# DIRICHLET NORMS
# =============================================================================


def moser_norm_predicted(r: float, n: int) -> float:
    """½ ω_{n-1} (log 1/r)^{-(n-1)}."""
    require_open_interval(r, 0.0, 1.0, "r")
    return 0.5 * sphere_measure(n) * math.log(1.0 / r) ** (-(n - 1))


def moser_norm_measured(params: MoserParams, mesh: TriMesh) -> float:
    """‖∇u_r‖_{L^n}^n of the interpolant on ``mesh``."""
    return dirichlet_norm(moser_function(params, mesh), params.n) ** params.n


def _normalized_member(params: MoserParams, mesh: TriMesh) -> MeshFunction:
    centred = mean_zero_project(moser_function(params, mesh))
    return centred * (1.0 / dirichlet_norm(centred, params.n))


def normalized_test_sequence(
    r_values: Sequence[float], mesh: TriMesh, base: Optional[MoserParams] = None
) -> list[MeshFunction]:
    """
    (u_r − (1/|Ω|)∫u_r) / ‖∇u_r‖_{L^n} for every r, in input order.

    ``base`` supplies center, dimension, mollification and the trace-boundary
    requirement; its radius is replaced by each r.
    """
    template = base if base is not None else MoserParams(r=0.5)
    return [_normalized_member(template.with_radius(r), mesh) for r in r_values]


# =============================================================================
# SHARPNESS
# =============================================================================


def predicted_growth_exponent(alpha: float, n: int) -> float:
    """α(ω_{n-1}/2)^{-1/(n-1)} − (n−1): the power of 1/r in the lower bound."""
    return (n - 1) * (alpha / trace_constant(n) - 1.0)


def log_lower_bound(alpha: float, r: float, n: int) -> float:
    """log of r^{n-1} (1/r)^{α(ω_{n-1}/2)^{-1/(n-1)}}."""
    return predicted_growth_exponent(alpha, n) * math.log(1.0 / r)


def fit_growth_slope(radii: np.ndarray, log_values: np.ndarray) -> float:
    """Least-squares slope of log values against log(1/r)."""
    return float(np.polyfit(-np.log(radii), log_values, 1)[0])


def growth_exponent(report: ScanReport) -> float:
    """Slope of log(trace_integral) against log(1/r) by least squares."""
    if len(report.table) < 2:
        raise ValueError("growth exponent needs at least two rows")
    return fit_growth_slope(report.column("param"), report.column("log_trace_integral"))


def sorted_radii(r_values: Iterable[float]) -> list[float]:
    """Distinct radii in (0, 1), largest first."""
    radii = sorted({float(r) for r in r_values}, reverse=True)
    for r in radii:
        require_open_interval(r, 0.0, 1.0, "r")
    return radii


def _sharpness_details(
    report_rows: pd.DataFrame, alpha: float, n: int, verdict: Verdict, baseline: float
) -> dict[str, Any]:
    details: dict[str, Any] = {
        "alpha": alpha,
        "alpha_over_beta": alpha / trace_constant(n),
        "n": n,
        "predicted_exponent": predicted_growth_exponent(alpha, n),
        "baseline": baseline,
    }
    if len(report_rows) >= 2:
        y = report_rows["log_trace_integral"].to_numpy(dtype=float)
        radii = report_rows["param"].to_numpy(dtype=float)
        details["fitted_exponent"] = fit_growth_slope(radii, y)
        details["max_log10_over_baseline"] = float(
            (np.max(y) - math.log(baseline)) / math.log(10.0)
        )
    logger.info(
        "Sharpness alpha=%g (%.3g x beta_%d): %s",
        alpha,
        details["alpha_over_beta"],
        n,
        verdict.value,
    )
    return details


def sharpness_experiment(
    alpha: float,
    r_values: Sequence[float],
    mesh: TriMesh,
    base: Optional[MoserParams] = None,
    tags: Optional[Iterable[str]] = (TRACE_TAG,),
    max_workers: int = 1,
    fraction: float = DOMINANCE_FRACTION,
) -> ScanReport:
    """
    Trace integrals of the normalized sequence against the blow-up lower bound.

    Args:
        alpha: α > 0
        r_values: Plateau radii (rows are emitted with r descending)
        mesh: Mesh resolving every r around the center (graded meshes do)
        base: Template parameters (center on the trace boundary, n = 2)
        tags: Boundary part carrying the integral
        max_workers: Threads evaluating radii
        fraction: Share of the lower bound the values must reach for blow-up

    Returns:
        ScanReport "sharpness" with columns param, trace_integral, grad_norm,
        mean, exponent_max, log_trace_integral, lower_bound, log_lower_bound,
        plateau
    """
    require_positive(alpha, "alpha")
    template = base if base is not None else MoserParams(r=0.5)
    n = template.n
    tag_list = None if tags is None else list(tags)
    radii = sorted_radii(r_values)

    def row(r: float) -> dict[str, float]:
        params = template.with_radius(r)
        member = _normalized_member(params, mesh)
        values = evaluate_member(member, alpha, n, tag_list)
        log_bound = log_lower_bound(alpha, r, n)
        offsets = mesh.vertices - np.asarray(params.center)
        nearest = int(np.argmin(np.linalg.norm(offsets, axis=1)))
        values.update(
            param=r,
            lower_bound=exp_or_inf(log_bound),
            log_lower_bound=log_bound,
            plateau=float(member.values[nearest]),
        )
        logger.debug(
            "sharpness r=%.3e: log T=%.6g log bound=%.6g",
            r,
            values["log_trace_integral"],
            log_bound,
        )
        return values

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        rows = list(pool.map(row, radii))

    table = pd.DataFrame(rows, columns=SHARPNESS_COLUMNS)
    baseline = boundary_measure(mesh, tag_list)
    verdict = dominance_verdict(
        table["log_trace_integral"].to_numpy(dtype=float),
        table["log_lower_bound"].to_numpy(dtype=float),
        predicted_growth_exponent(alpha, n),
        fraction,
    )
    if verdict is Verdict.INCONCLUSIVE:
        logger.warning("Sharpness scan alpha=%g is inconclusive", alpha)
    details = _sharpness_details(table, alpha, n, verdict, baseline)
    return ScanReport(
        name="sharpness", table=table, verdict=verdict, baseline=baseline, details=details
    )
