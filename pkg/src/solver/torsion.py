"""
Trace function solver.

Computes the mean-zero minimizer w of

    E(u) = ∫_Ω |∇u|^p − p ∫_{∂Ω} u,    ∫_Ω u = 0,

and certifies its Euler–Lagrange identities. w solves the p-Laplacian
torsion problem div(|∇w|^{p-2}∇w) = |∂Ω|/|Ω| with unit Neumann flux
(|∇w|^{p-2}∇w)·n = 1.

Optimizer:
    Projected descent from u₀ ≡ 0. The search direction minimizes a local
    quadratic model under the constraint m·d = 0 (m = lumped mass):

        none              d = −(projected gradient)
        lumped_mass       d = −(g/m − Σg/|Ω|)
        lagged_diffusion  [H m; mᵀ 0][d; λ] = [−g; 0],
                          H = p Σ_cells area·max(|∇u|, floor)^{p-2} ∇φ∇φᵀ

    followed by Armijo backtracking (c = 1e-4, halving) against the slope
    pg·d. Once the predicted decrease t·|pg·d| falls below the round-off
    level of E, energy values can no longer rank trial points; a trial is
    then accepted when E stays within round-off and the projected-gradient
    norm decreases. When no step along d qualifies, the iteration retries
    with the lumped_mass and then the none direction before giving up.

Stopping:
    ℓ²-norm of the gradient with the m-component removed ≤ tol
    (default 1e-8·|∂Ω|_h), at most 10⁵ iterations.

Functions:
    solve_trace_function — the minimizer as a SolveReport
    energy_roundoff — energy change below which trial points are ranked by |pg|
    weak_defect — per-hat defect of the weak Euler–Lagrange identity
    variational_residual — sup-norm defect of the weak identity over all hats
    boundary_flux_total — variationally consistent boundary flux
    pointwise_flux_deviation — cell-gradient flux vs 1 on the boundary
    radial_trace_function — closed form on the n-ball
    radial_oracle_error — distance of a disk solution to the closed form
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np
from scipy.sparse import bmat, csc_matrix, diags
from scipy.sparse.linalg import spsolve

from src.energy.p_energy import (
    EnergyConfig,
    MeshFunction,
    cell_flux,
    cell_gradients,
    energy,
    energy_gradient,
    mean_zero_project,
)
from src.geometry.mesh import TriMesh
from src.geometry.radial import RadialGrid, RadialProfile
from src.solver.exceptions import IterationLimitError, LineSearchError, NonFiniteEnergyError
from src.utils.validation import require_positive

logger = logging.getLogger(__name__)

DEFAULT_TOL_FACTOR = 1e-8
DEFAULT_MAX_ITERATIONS = 100_000
ARMIJO_C = 1e-4
MIN_STEP = 2.0**-50
ROUNDOFF_FACTOR = 64.0
WEIGHT_FLOOR_FRACTION = 1e-3


class Preconditioner(str, Enum):
    """Metric used to turn the gradient into a descent direction."""

    NONE = "none"
    LUMPED_MASS = "lumped_mass"
    LAGGED_DIFFUSION = "lagged_diffusion"


# =============================================================================
# REPORT
# =============================================================================


@dataclass(frozen=True, eq=False)
class SolveReport:
    """
    Result of a trace-function solve.

    Attributes:
        w: Mean-zero minimizer (best iterate when not converged)
        iterations: Accepted descent steps
        projected_gradient_norm: Final stopping quantity
        energy: E(w)
        interior_residual: variational_residual(w)
        boundary_flux_deviation: |Σ_∂ q − |∂Ω|_h| / |∂Ω|_h for the consistent flux q
        pointwise_flux_deviation: RMS over ∂Ω of (|∇w|^{p-2}∇w·n − 1), diagnostic only
        tolerance: Requested stopping tolerance
        converged: Whether projected_gradient_norm ≤ tolerance
        preconditioner: Direction metric used
        energy_trace: Energy after every accepted step (starting with E(u₀))
    """

    w: MeshFunction
    iterations: int
    projected_gradient_norm: float
    energy: float
    interior_residual: float
    boundary_flux_deviation: float
    pointwise_flux_deviation: float
    tolerance: float
    converged: bool
    preconditioner: Preconditioner
    energy_trace: tuple[float, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary for report envelopes (nodal values omitted)."""
        return {
            "iterations": self.iterations,
            "projected_gradient_norm": self.projected_gradient_norm,
            "energy": self.energy,
            "interior_residual": self.interior_residual,
            "boundary_flux_deviation": self.boundary_flux_deviation,
            "pointwise_flux_deviation": self.pointwise_flux_deviation,
            "tolerance": self.tolerance,
            "converged": self.converged,
            "preconditioner": self.preconditioner.value,
            "n_vertices": self.w.mesh.n_vertices,
        }


# =============================================================================
# DIRECTIONS
# =============================================================================


def _project_out(g: np.ndarray, mass: np.ndarray) -> np.ndarray:
    return g - (np.dot(g, mass) / np.dot(mass, mass)) * mass


def _lagged_diffusion_direction(u: MeshFunction, g: np.ndarray, cfg: EnergyConfig) -> np.ndarray:
    mesh = u.mesh
    grad_x, grad_y = mesh.gradient_operators
    norms = np.linalg.norm(cell_gradients(u), axis=1)
    peak = float(np.max(norms))
    if peak == 0.0 or cfg.p == 2.0:
        weights = np.ones_like(norms)
    else:
        weights = np.maximum(norms, WEIGHT_FLOOR_FRACTION * peak) ** (cfg.p - 2.0)
    scale = diags(cfg.p * mesh.cell_areas * weights)
    stiffness = grad_x.T @ scale @ grad_x + grad_y.T @ scale @ grad_y
    mass = csc_matrix(mesh.lumped_mass[:, None])
    system = bmat([[stiffness, mass], [mass.T, None]], format="csc")
    rhs = np.concatenate([-g, [0.0]])
    solution = spsolve(system, rhs)
    return np.asarray(solution[:-1])


def _direction(
    u: MeshFunction, g: np.ndarray, cfg: EnergyConfig, preconditioner: Preconditioner
) -> np.ndarray:
    mass = u.mesh.lumped_mass
    if preconditioner is Preconditioner.NONE:
        return -_project_out(g, mass)
    if preconditioner is Preconditioner.LUMPED_MASS:
        return -(g / mass - np.sum(g) / u.mesh.area)
    return _lagged_diffusion_direction(u, g, cfg)


def _direction_chain(preconditioner: Preconditioner) -> tuple[Preconditioner, ...]:
    fallbacks = (Preconditioner.LUMPED_MASS, Preconditioner.NONE)
    return (preconditioner, *(m for m in fallbacks if m is not preconditioner))


def _projected_gradient(u: MeshFunction, cfg: EnergyConfig) -> np.ndarray:
    return _project_out(energy_gradient(u, cfg).values, u.mesh.lumped_mass)


def energy_roundoff(value: float) -> float:
    """Smallest energy change the solver treats as resolved at energy ``value``."""
    return ROUNDOFF_FACTOR * float(np.finfo(float).eps) * max(abs(value), 1.0)


# =============================================================================
# SOLVER
# =============================================================================


def solve_trace_function(
    mesh: TriMesh,
    cfg: EnergyConfig,
    tol: Optional[float] = None,
    preconditioner: Preconditioner = Preconditioner.LAGGED_DIFFUSION,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    u0: Optional[MeshFunction] = None,
) -> SolveReport:
    """
    Minimize E over mean-zero P1 functions.

    Args:
        mesh: Domain triangulation
        cfg: Energy parameters
        tol: Projected-gradient tolerance (default 1e-8·|∂Ω|_h)
        preconditioner: Direction metric
        max_iterations: Iteration cap
        u0: Start iterate (projected to mean zero; default u ≡ 0)

    Returns:
        SolveReport with the certified minimizer

    Raises:
        IterationLimitError: Cap reached; ``.report`` holds the best iterate
        LineSearchError: No acceptable step; ``.report`` holds the best iterate
        NonFiniteEnergyError: NaN energy or direction; ``.trace`` holds the steps
    """
    preconditioner = Preconditioner(preconditioner)
    tol = DEFAULT_TOL_FACTOR * mesh.perimeter if tol is None else require_positive(tol, "tol")
    u = MeshFunction.zeros(mesh) if u0 is None else mean_zero_project(u0)
    mass = mesh.lumped_mass
    chain = _direction_chain(preconditioner)

    current = energy(u, cfg)
    energies = [current]
    trace: list[dict[str, Any]] = []
    logger.info(
        "Solving trace function: p=%g, %d vertices, tol=%.2e, preconditioner=%s",
        cfg.p,
        mesh.n_vertices,
        tol,
        preconditioner.value,
    )

    iteration = 0
    pg_norm = math.inf

    def finish(converged: bool) -> SolveReport:
        return _build_report(
            u, cfg, iteration, pg_norm, current, tol, converged, preconditioner, energies
        )

    while True:
        g = energy_gradient(u, cfg).values
        pg = _project_out(g, mass)
        pg_norm = float(np.linalg.norm(pg))
        trace.append({"iteration": iteration, "energy": current, "pg_norm": pg_norm})
        logger.debug("iter %d: E=%.16e |pg|=%.3e", iteration, current, pg_norm)

        if pg_norm <= tol:
            report = finish(converged=True)
            logger.info(
                "Converged in %d iterations: E=%.12g, residual=%.2e",
                iteration,
                current,
                report.interior_residual,
            )
            return report
        if iteration >= max_iterations:
            report = finish(converged=False)
            raise IterationLimitError(
                f"no convergence after {iteration} iterations (|pg|={pg_norm:.3e} > {tol:.3e})",
                report=report,
            )

        accepted = None
        for metric in chain:
            d = _direction(u, g, cfg, metric)
            if not np.all(np.isfinite(d)):
                raise NonFiniteEnergyError(
                    f"non-finite search direction at iteration {iteration}", trace
                )
            accepted = _backtrack(u, d, pg, pg_norm, current, cfg, trace)
            if accepted is not None:
                if metric is not preconditioner:
                    trace[-1]["direction"] = metric.value
                    logger.debug("iter %d: stepped along %s direction", iteration, metric.value)
                break
        if accepted is None:
            report = finish(converged=False)
            raise LineSearchError(
                f"line search stalled at iteration {iteration} (|pg|={pg_norm:.3e})", report=report
            )
        u, current, step = accepted
        trace[-1]["step"] = step
        energies.append(current)
        iteration += 1


def _backtrack(
    u: MeshFunction,
    d: np.ndarray,
    pg: np.ndarray,
    pg_norm: float,
    current: float,
    cfg: EnergyConfig,
    trace: list[dict[str, Any]],
) -> Optional[tuple[MeshFunction, float, float]]:
    """
    Halve t from 1 until u + t·d is acceptable; None when no t ≥ MIN_STEP is.

    Every direction satisfies m·d = 0, so the energy slope along d is pg·d.
    """
    slope = float(np.dot(pg, d))
    if not slope < 0.0:
        return None
    roundoff = energy_roundoff(current)
    step = 1.0
    while step >= MIN_STEP:
        trial = mean_zero_project(u.with_values(u.values + step * d))
        value = energy(trial, cfg)
        if math.isnan(value):
            raise NonFiniteEnergyError(f"NaN energy at step {step:.3e}", trace)
        if abs(step * slope) >= roundoff:
            if value <= current + ARMIJO_C * step * slope:
                return trial, value, step
        elif value <= current + roundoff:
            if float(np.linalg.norm(_projected_gradient(trial, cfg))) < pg_norm:
                return trial, value, step
        step *= 0.5
    return None


def _build_report(
    w: MeshFunction,
    cfg: EnergyConfig,
    iterations: int,
    pg_norm: float,
    value: float,
    tol: float,
    converged: bool,
    preconditioner: Preconditioner,
    energies: list[float],
) -> SolveReport:
    perimeter = w.mesh.perimeter
    flux = boundary_flux_total(w, cfg)
    return SolveReport(
        w=w,
        iterations=iterations,
        projected_gradient_norm=pg_norm,
        energy=value,
        interior_residual=variational_residual(w, cfg),
        boundary_flux_deviation=abs(flux - perimeter) / perimeter,
        pointwise_flux_deviation=pointwise_flux_deviation(w, cfg),
        tolerance=tol,
        converged=converged,
        preconditioner=preconditioner,
        energy_trace=tuple(energies),
    )


# =============================================================================
# EULER–LAGRANGE CERTIFICATES
# =============================================================================


def weak_defect(w: MeshFunction, cfg: EnergyConfig) -> np.ndarray:
    """Per-hat defect ∫|∇w|^{p-2}∇w·∇φ_i − ∫_∂Ω φ_i + (|∂Ω|/|Ω|)∫_Ω φ_i."""
    mesh = w.mesh
    ratio = mesh.perimeter / mesh.area
    return energy_gradient(w, cfg).values / cfg.p + ratio * mesh.lumped_mass


def variational_residual(w: MeshFunction, cfg: EnergyConfig) -> float:
    """
    Largest defect of the weak Euler–Lagrange identity over all hat functions.

    Hats are normalized in the sup norm (‖φ_i‖_∞ = 1). Zero exactly at the
    discrete minimizer; after a solve to tolerance tol it is at most about
    2·tol/p.
    """
    return float(np.max(np.abs(weak_defect(w, cfg))))


def boundary_flux_total(w: MeshFunction, cfg: EnergyConfig) -> float:
    """
    Total normal flux through ∂Ω computed from the weak form.

    The consistent flux at boundary node i is q_i = defect_i + ∫_∂Ω φ_i; its
    sum equals |∂Ω|_h exactly when the interior identity holds.
    """
    mesh = w.mesh
    q = weak_defect(w, cfg) + mesh.boundary_mass()
    return float(np.sum(q[mesh.boundary_nodes]))


def pointwise_flux_deviation(w: MeshFunction, cfg: EnergyConfig) -> float:
    """Length-weighted RMS of (|∇w|^{p-2}∇w·n − 1) using each boundary cell's gradient."""
    mesh = w.mesh
    flux = cell_flux(w, cfg)[mesh.boundary_cells]
    normal_flux = np.sum(flux * mesh.boundary_normals, axis=1)
    lengths = mesh.boundary_lengths
    return float(np.sqrt(np.sum(lengths * (normal_flux - 1.0) ** 2) / np.sum(lengths)))


# =============================================================================
# RADIAL ORACLE
# =============================================================================


def radial_trace_derivative(rho: np.ndarray, p: float, R: float = 1.0) -> np.ndarray:
    """w'(ρ) = (ρ/R)^{1/(p-1)} on the ball of radius R."""
    return (np.asarray(rho, dtype=float) / R) ** (1.0 / (p - 1.0))


def radial_trace_function(n: int, p: float, R: float, grid: RadialGrid) -> RadialProfile:
    """
    Closed-form trace function on the ball B_R ⊂ ℝ^n.

    Integrating (ρ^{n-1}|w'|^{p-2}w')' = (n/R)ρ^{n-1} gives
    w'(ρ) = (ρ/R)^{1/(p-1)}, hence unit flux at ρ = R. The additive constant
    makes the mean over the ball zero:

        w(ρ) = R(p-1)/p · [(ρ/R)^{p/(p-1)} − n/(n + p/(p-1))]
    """
    if not p > 1.0:
        raise ValueError(f"p must be > 1, got {p}")
    if p >= n:
        logger.warning("radial trace function with p=%g >= n=%d", p, n)
    if grid.n != n or grid.R != R:
        raise ValueError(f"grid is for (n={grid.n}, R={grid.R}), requested (n={n}, R={R})")
    k = p / (p - 1.0)
    amplitude = R * (p - 1.0) / p
    values = amplitude * ((grid.nodes / R) ** k - n / (n + k))
    derivative = radial_trace_derivative(grid.nodes, p, R)
    return RadialProfile(grid=grid, values=values, derivative=derivative)


def radial_oracle_error(w: MeshFunction, p: float, R: float = 1.0) -> float:
    """
    Relative L² distance between |∇w| and w'(|x|) = (|x|/R)^{1/(p-1)}.

    Evaluated cellwise at centroids; meaningful for disks centred at 0.
    """
    mesh = w.mesh
    measured = np.linalg.norm(cell_gradients(w), axis=1)
    exact = radial_trace_derivative(np.linalg.norm(mesh.cell_centroids, axis=1), p, R)
    areas = mesh.cell_areas
    return float(np.sqrt(np.sum(areas * (measured - exact) ** 2) / np.sum(areas * exact**2)))
