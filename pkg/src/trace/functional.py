"""
Boundary exponential integrals and the boundary-to-interior conversion.

    T_α(u) = ∫_{∂Ω} exp(α |u|^{n/(n-1)}) ds

is evaluated with the edgewise trapezoid rule. Every sum is formed in log
space (logsumexp over edge endpoints), so blow-up magnitudes stay comparable
far beyond the double-precision range of exp; the plain value is returned as
+inf once it overflows, and the overflow is logged with the offending node.

The conversion check compares T_α(u) with the interior integral

    ∫_Ω div(e^G F) = ∫_Ω e^G (∇G·F + |∂Ω|/|Ω|),   G = α|u|^{n/(n-1)},
    F = |∇w|^{p-2}∇w,   ∇G = (αn/(n-1)) |u|^{1/(n-1)} sgn(u) ∇u,

where w is the trace function (div F = |∂Ω|/|Ω|, F·n = 1).
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Iterable, Optional

import numpy as np
from scipy.special import logsumexp

from src.energy.p_energy import EnergyConfig, MeshFunction, cell_flux, cell_gradients
from src.geometry.constants import interior_trace_gap_constant, sobolev_conjugate
from src.geometry.mesh import TriMesh
from src.solver.torsion import weak_defect
from src.utils.validation import require_finite

logger = logging.getLogger(__name__)

_LOG_MAX_FLOAT = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class TraceEvalResult:
    """
    Boundary integral with optional interior reconstruction.

    Attributes:
        alpha: Exponent constant α
        boundary_integral: ∫_∂Ω e^{α|u|^{n/(n-1)}}
        log_boundary_integral: Its logarithm (always finite)
        interior_integral: ∫_Ω div(e^G F) via the expanded integrand
        relative_defect: |boundary − interior| / boundary
        discrete_defect: Weak-identity defect tested with φ = I_h e^G, relative
    """

    alpha: float
    boundary_integral: float
    log_boundary_integral: float
    interior_integral: Optional[float] = None
    relative_defect: Optional[float] = None
    discrete_defect: Optional[float] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "boundary_integral": self.boundary_integral,
            "log_boundary_integral": self.log_boundary_integral,
            "interior_integral": self.interior_integral,
            "relative_defect": self.relative_defect,
            "discrete_defect": self.discrete_defect,
        }


# =============================================================================
# EXPONENTS
# =============================================================================


def _check_alpha_n(alpha: float, n: int) -> None:
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")


def exponent_values(values: np.ndarray, alpha: float, n: int) -> np.ndarray:
    """α |u|^{n/(n-1)} elementwise."""
    return alpha * np.abs(values) ** (n / (n - 1.0))


def boundary_exponent_max(
    u: MeshFunction, alpha: float, n: int, tags: Optional[Iterable[str]] = None
) -> float:
    """Largest exponent α|u|^{n/(n-1)} over the selected boundary nodes."""
    nodes = np.unique(u.mesh.boundary_edges[u.mesh.boundary_edge_mask(tags)])
    return float(np.max(exponent_values(u.values[nodes], alpha, n)))


# =============================================================================
# TRACE INTEGRAL
# =============================================================================


def log_trace_integral(
    u: MeshFunction, alpha: float, n: int, tags: Optional[Iterable[str]] = None
) -> float:
    """
    log ∫_∂Ω exp(α|u|^{n/(n-1)}) ds with the edgewise trapezoid rule.

    Args:
        u: P1 function
        alpha: α >= 0
        n: Dimension (sets the exponent n/(n-1))
        tags: Restrict to boundary edges with these tags

    Raises:
        NonFiniteValueError: If u is not finite at a boundary node
    """
    _check_alpha_n(alpha, n)
    mesh = u.mesh
    mask = mesh.boundary_edge_mask(tags)
    edges = mesh.boundary_edges[mask]
    require_finite(u.values, "trace integrand", nodes=np.unique(edges))
    exponents = exponent_values(u.values, alpha, n)
    log_half = np.log(0.5 * mesh.boundary_lengths[mask])
    terms = np.concatenate([log_half + exponents[edges[:, 0]], log_half + exponents[edges[:, 1]]])
    return float(logsumexp(terms))


def exp_or_inf(log_value: float) -> float:
    """exp(log_value), or +inf past the double-precision range."""
    return math.exp(log_value) if log_value <= _LOG_MAX_FLOAT else math.inf


def trace_integral(
    u: MeshFunction, alpha: float, n: int, tags: Optional[Iterable[str]] = None
) -> float:
    """
    ∫_∂Ω exp(α|u|^{n/(n-1)}) ds.

    Overflow is not an error: the value is +inf, and the node with the
    largest exponent is logged at WARNING. Use log_trace_integral to compare
    overflowing values.
    """
    log_value = log_trace_integral(u, alpha, n, tags)
    if log_value <= _LOG_MAX_FLOAT:
        return math.exp(log_value)
    mesh = u.mesh
    nodes = np.unique(mesh.boundary_edges[mesh.boundary_edge_mask(tags)])
    exponents = exponent_values(u.values[nodes], alpha, n)
    worst = int(np.argmax(exponents))
    logger.warning(
        "Trace integral overflows double precision: node %d has exponent %.6g (log value %.6g)",
        int(nodes[worst]),
        float(exponents[worst]),
        log_value,
    )
    return math.inf


# =============================================================================
# INTERIOR QUADRATURE (edge-midpoint rule, exact for quadratics)
# =============================================================================


def _midpoint_values(mesh: TriMesh, values: np.ndarray) -> np.ndarray:
    """(M, 3) values of the P1 function at the three edge midpoints of each cell."""
    cell_values = values[mesh.cells]
    return 0.5 * (cell_values[:, [1, 2, 0]] + cell_values[:, [2, 0, 1]])


def _log_domain_integral(mesh: TriMesh, log_integrand: np.ndarray) -> float:
    """log ∫_Ω exp(log_integrand) for (M, 3) midpoint samples."""
    log_weights = np.log(mesh.cell_areas / 3.0)[:, None]
    return float(logsumexp(log_integrand + log_weights))


def interior_moser_integral(u: MeshFunction, alpha: float, n: int) -> float:
    """(1/|Ω|) ∫_Ω exp(α|u|^{n/(n-1)}) dx; +inf on overflow."""
    _check_alpha_n(alpha, n)
    mesh = u.mesh
    midpoint = _midpoint_values(mesh, u.values)
    log_integral = _log_domain_integral(mesh, exponent_values(midpoint, alpha, n))
    return exp_or_inf(log_integral - math.log(mesh.area))


def holder_term(u: MeshFunction, alpha: float, n: int, p: float) -> float:
    """
    (∫_Ω e^{p* α|u|^{n/(n-1)}} |u|^{p*/(n-1)})^{1/p*}.

    The interior factor bounding the gradient term of the conversion after a
    Hölder split with exponents (p*, p/(p-1)). Requires 1 < p < n.
    """
    _check_alpha_n(alpha, n)
    p_star = sobolev_conjugate(p, n)
    mesh = u.mesh
    midpoint = _midpoint_values(mesh, u.values)
    magnitude = np.abs(midpoint)
    with np.errstate(divide="ignore"):
        log_power = (p_star / (n - 1.0)) * np.log(magnitude)
    log_integrand = p_star * exponent_values(midpoint, alpha, n) + log_power
    if not np.any(np.isfinite(log_integrand)):
        return 0.0
    return exp_or_inf(_log_domain_integral(mesh, log_integrand) / p_star)


def holder_admissible(alpha: float, n: int, p: float, epsilon: float = 0.0) -> bool:
    """Whether α p* + ε ≤ n(ω_{n-1}/2)^{1/(n-1)}, where the interior bound applies."""
    return alpha * sobolev_conjugate(p, n) + epsilon <= interior_trace_gap_constant(n)


# =============================================================================
# CONVERSION CHECK
# =============================================================================


def conversion_identity_check(
    u: MeshFunction, w: MeshFunction, alpha: float, n: int, cfg: EnergyConfig
) -> TraceEvalResult:
    """
    Compare ∫_∂Ω e^G with ∫_Ω e^G (∇G·F + |∂Ω|/|Ω|).

    Args:
        u: Function in the exponent
        w: Trace function on the same mesh
        alpha: α >= 0
        n: Dimension of the exponent n/(n-1)
        cfg: Energy parameters of w

    Returns:
        TraceEvalResult with both sides and their relative defect
    """
    if u.mesh is not w.mesh:
        raise ValueError("u and w must live on the same mesh")
    _check_alpha_n(alpha, n)
    mesh = u.mesh

    log_boundary = log_trace_integral(u, alpha, n)
    boundary = trace_integral(u, alpha, n)

    midpoint = _midpoint_values(mesh, u.values)
    g_mid = exponent_values(midpoint, alpha, n)
    ratio = mesh.perimeter / mesh.area
    coefficient = alpha * n / (n - 1.0)
    radial = np.sign(midpoint) * np.abs(midpoint) ** (1.0 / (n - 1.0))
    drift = np.sum(cell_gradients(u) * cell_flux(w, cfg), axis=1)[:, None]
    factor = coefficient * radial * drift + ratio

    # Shift by the largest exponent so e^G stays representable.
    shift = float(np.max(g_mid))
    weights = (mesh.cell_areas / 3.0)[:, None]
    scaled_interior = float(np.sum(weights * np.exp(g_mid - shift) * factor))
    log_scaled_boundary = log_boundary - shift
    scaled_boundary = math.exp(log_scaled_boundary)
    relative = abs(scaled_boundary - scaled_interior) / scaled_boundary
    interior = scaled_interior * math.exp(shift) if shift <= _LOG_MAX_FLOAT else math.inf

    phi = np.exp(exponent_values(u.values, alpha, n) - shift)
    discrete = abs(float(np.dot(weak_defect(w, cfg), phi))) / scaled_boundary

    logger.info(
        "Conversion check alpha=%g: boundary=%.10g interior=%.10g defect=%.3e",
        alpha,
        boundary,
        interior,
        relative,
    )
    return TraceEvalResult(
        alpha=alpha,
        boundary_integral=boundary,
        log_boundary_integral=log_boundary,
        interior_integral=interior,
        relative_defect=relative,
        discrete_defect=discrete,
    )
