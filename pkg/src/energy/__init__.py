"""
Energy layer.

Discrete p-energy E(u) = ∫|∇u|^p − p∫_{∂Ω} u over P1 functions, its gradient,
the mean-zero projection and Dirichlet norms.
"""

from src.energy.p_energy import (
    EnergyConfig,
    MeshFunction,
    cell_flux,
    cell_gradients,
    dirichlet_norm,
    domain_integral,
    energy,
    energy_gradient,
    lumped_mass,
    mean_value,
    mean_zero_project,
)

__all__ = [
    "EnergyConfig",
    "MeshFunction",
    "cell_flux",
    "cell_gradients",
    "dirichlet_norm",
    "domain_integral",
    "energy",
    "energy_gradient",
    "lumped_mass",
    "mean_value",
    "mean_zero_project",
]
