"""
Solver layer.

Computes the trace function w (mean-zero minimizer of the p-energy),
certifies its Euler–Lagrange identities and provides the closed-form radial
solution on balls.

Usage:
    from src.solver import solve_trace_function, radial_oracle_error

    report = solve_trace_function(build_disk_mesh(5), EnergyConfig(p=1.5, n=3))
    error = radial_oracle_error(report.w, p=1.5)
"""

from src.solver.exceptions import (
    IterationLimitError,
    LineSearchError,
    NonFiniteEnergyError,
    SolverError,
)
from src.solver.torsion import (
    Preconditioner,
    SolveReport,
    boundary_flux_total,
    pointwise_flux_deviation,
    radial_oracle_error,
    radial_trace_derivative,
    radial_trace_function,
    solve_trace_function,
    variational_residual,
    weak_defect,
)

__all__ = [
    "IterationLimitError",
    "LineSearchError",
    "NonFiniteEnergyError",
    "SolverError",
    "Preconditioner",
    "SolveReport",
    "boundary_flux_total",
    "pointwise_flux_deviation",
    "radial_oracle_error",
    "radial_trace_derivative",
    "radial_trace_function",
    "solve_trace_function",
    "variational_residual",
    "weak_defect",
]
