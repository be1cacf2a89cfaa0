"""
Discrete p-energy over piecewise-linear functions.

    E(u) = ∫_Ω |∇u|^p dx − p ∫_{∂Ω} u ds

with P1 elements: ∇u is constant on each cell, so the volume term is an exact
cellwise sum, and the boundary term is the edgewise trapezoid rule (exact for
P1 traces). Only energy_gradient regularizes the singular weight |∇u|^{p-2}
for p < 2; energy() is always the unregularized value.

Functions:
    energy — E(u)
    energy_gradient — ∂E/∂u_i as a nodal vector
    cell_gradients — per-cell ∇u
    cell_flux — per-cell |∇u|^{p-2} ∇u
    mean_zero_project — u − (∫_Ω u)/|Ω|
    domain_integral — ∫_Ω u (exact for P1)
    dirichlet_norm — ‖∇u‖_{L^q}
    lumped_mass — ∫_Ω φ_i per vertex
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.geometry.mesh import TriMesh
from src.utils.validation import require_finite

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 1e-12
MAX_DELTA_FRACTION = 1e-6


# =============================================================================
# TYPES
# =============================================================================


@dataclass(frozen=True, eq=False)
class MeshFunction:
    """
    Nodal coefficients of a P1 function.

    Attributes:
        mesh: Carrier triangulation
        values: One finite real per vertex
    """

    mesh: TriMesh
    values: np.ndarray

    def __post_init__(self) -> None:
        values = require_finite(self.values, "mesh function")
        if values.shape != (self.mesh.n_vertices,):
            raise ValueError(
                f"expected {self.mesh.n_vertices} nodal values, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(
        cls, mesh: TriMesh, f: Callable[[np.ndarray], np.ndarray]
    ) -> "MeshFunction":
        """Nodal interpolant of ``f`` evaluated on the (N, 2) vertex array."""
        return cls(mesh, np.asarray(f(mesh.vertices), dtype=float))

    @classmethod
    def zeros(cls, mesh: TriMesh) -> "MeshFunction":
        return cls(mesh, np.zeros(mesh.n_vertices))

    @classmethod
    def constant(cls, mesh: TriMesh, c: float) -> "MeshFunction":
        return cls(mesh, np.full(mesh.n_vertices, float(c)))

    def with_values(self, values: np.ndarray) -> "MeshFunction":
        return MeshFunction(self.mesh, values)

    def __add__(self, other: "MeshFunction") -> "MeshFunction":
        self._require_same_mesh(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "MeshFunction") -> "MeshFunction":
        self._require_same_mesh(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: float) -> "MeshFunction":
        return self.with_values(float(scalar) * self.values)

    __rmul__ = __mul__

    def _require_same_mesh(self, other: "MeshFunction") -> None:
        if other.mesh is not self.mesh:
            raise ValueError("mesh functions live on different meshes")

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class EnergyConfig:
    """
    Parameters of the p-energy.

    Attributes:
        p: Exponent (> 1)
        delta: Regularization of |∇u|^{p-2} on cells with |∇u| < delta (p < 2 only)
        n: Dimension the exponent is meant for; p >= n only warns
        diameter: Domain diameter bounding delta
    """

    p: float
    delta: float = DEFAULT_DELTA
    n: int = 2
    diameter: float = 2.0

    def __post_init__(self) -> None:
        if not (np.isfinite(self.p) and self.p > 1.0):
            raise ValueError(f"p must be > 1, got {self.p}")
        if not (0.0 <= self.delta <= MAX_DELTA_FRACTION * self.diameter):
            raise ValueError(
                f"delta must lie in [0, {MAX_DELTA_FRACTION * self.diameter:g}], got {self.delta}"
            )
        if self.p >= self.n:
            logger.warning(
                "p=%g is not below the dimension n=%d; the trace inequality needs 1 < p < n",
                self.p,
                self.n,
            )

    def to_dict(self) -> dict[str, float]:
        return {"p": self.p, "delta": self.delta, "n": self.n}


# =============================================================================
# CELL QUANTITIES
# =============================================================================


def lumped_mass(mesh: TriMesh) -> np.ndarray:
    """∫_Ω φ_i for every hat function (row sums of the P1 mass matrix)."""
    return mesh.lumped_mass


def cell_gradients(u: MeshFunction) -> np.ndarray:
    """(M, 2) array of the constant gradient of ``u`` on each cell."""
    grad_x, grad_y = u.mesh.gradient_operators
    return np.column_stack([grad_x @ u.values, grad_y @ u.values])


def _flux_weights(gradients: np.ndarray, cfg: EnergyConfig, regularize: bool) -> np.ndarray:
    """|∇u|^{p-2} per cell; zero where ∇u = 0 and p ≠ 2."""
    norms = np.linalg.norm(gradients, axis=1)
    if cfg.p == 2.0:
        return np.ones_like(norms)
    weights = np.zeros_like(norms)
    if regularize and cfg.p < 2.0 and cfg.delta > 0.0:
        small = norms < cfg.delta
        weights[small] = (norms[small] ** 2 + cfg.delta**2) ** ((cfg.p - 2.0) / 2.0)
        large = ~small
    else:
        large = norms > 0.0
    weights[large] = norms[large] ** (cfg.p - 2.0)
    return weights


def cell_flux(u: MeshFunction, cfg: EnergyConfig) -> np.ndarray:
    """(M, 2) array of |∇u|^{p-2} ∇u per cell (unregularized)."""
    gradients = cell_gradients(u)
    return _flux_weights(gradients, cfg, regularize=False)[:, None] * gradients


# =============================================================================
# ENERGY
# =============================================================================


def energy(u: MeshFunction, cfg: EnergyConfig) -> float:
    """
    E(u) = Σ_cells area·|∇u|^p − p·Σ_edges |e|(u_a + u_b)/2.

    Args:
        u: P1 function
        cfg: Energy parameters

    Returns:
        Discrete energy (never regularized)
    """
    norms = np.linalg.norm(cell_gradients(u), axis=1)
    volume = float(np.sum(u.mesh.cell_areas * norms**cfg.p))
    boundary = float(np.dot(u.mesh.boundary_mass(), u.values))
    return volume - cfg.p * boundary


def energy_gradient(u: MeshFunction, cfg: EnergyConfig) -> MeshFunction:
    """
    Nodal derivative of the discrete energy.

        ∂E/∂u_i = p Σ_cells area·|∇u|^{p-2} ∇u·∇φ_i − p·b_i

    where b is the boundary-mass vector. For p < 2 the weight uses
    (|∇u|² + δ²)^{(p-2)/2} on cells with |∇u| < δ.
    """
    mesh = u.mesh
    grad_x, grad_y = mesh.gradient_operators
    gradients = cell_gradients(u)
    weighted = (mesh.cell_areas * _flux_weights(gradients, cfg, regularize=True))[:, None]
    flux = weighted * gradients
    volume = grad_x.T @ flux[:, 0] + grad_y.T @ flux[:, 1]
    return MeshFunction(mesh, cfg.p * (volume - mesh.boundary_mass()))


# =============================================================================
# MEAN-ZERO SPACE AND NORMS
# =============================================================================


def domain_integral(u: MeshFunction) -> float:
    """∫_Ω u, exact for P1 functions."""
    return float(np.dot(u.mesh.lumped_mass, u.values))


def mean_zero_project(u: MeshFunction) -> MeshFunction:
    """Subtract the discrete mean so that ∫_Ω u = 0."""
    return u.with_values(u.values - domain_integral(u) / u.mesh.area)


def mean_value(u: MeshFunction) -> float:
    return domain_integral(u) / u.mesh.area


def dirichlet_norm(u: MeshFunction, q: float) -> float:
    """
    ‖∇u‖_{L^q(Ω)} = (Σ_cells area·|∇u|^q)^{1/q}.

    Raises:
        ValueError: If q < 1
    """
    if not q >= 1.0:
        raise ValueError(f"q must be >= 1, got {q}")
    norms = np.linalg.norm(cell_gradients(u), axis=1)
    return float(np.sum(u.mesh.cell_areas * norms**q)) ** (1.0 / q)
