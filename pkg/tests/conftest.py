"""
Shared pytest fixtures for the test suite.

This module provides reusable fixtures for all test modules:
- Uniform disk and half-disk meshes at a few refinement levels
- Graded half-disk meshes resolving the default plateau radii
- Energy configurations
- A seeded random generator

Meshes are immutable, so building them once per session is safe.
"""

import numpy as np
import pytest

from src.energy.p_energy import EnergyConfig
from src.geometry.mesh import (
    TriMesh,
    build_disk_mesh,
    build_graded_half_disk_mesh,
    build_half_disk_mesh,
)

DEFAULT_RADII = (1e-1, 1e-2, 1e-3, 1e-4)

# =============================================================================
# MESH FIXTURES (Session-scoped - Build Once)
# =============================================================================


@pytest.fixture(scope="session")
def coarse_disk() -> TriMesh:
    """Unit disk, refinement 1 (37 vertices)."""
    return build_disk_mesh(1)


@pytest.fixture(scope="session")
def disk_mesh() -> TriMesh:
    """Unit disk, refinement 3."""
    return build_disk_mesh(3)


@pytest.fixture(scope="session")
def fine_disk() -> TriMesh:
    """Unit disk, refinement 4."""
    return build_disk_mesh(4)


@pytest.fixture(scope="session")
def half_disk_mesh() -> TriMesh:
    """Upper half-disk, refinement 3, flat segment tagged "trace"."""
    return build_half_disk_mesh(3)


@pytest.fixture(scope="session")
def graded_half_disk() -> TriMesh:
    """Half-disk graded toward the origin with every default radius as a ring."""
    return build_graded_half_disk_mesh(min(DEFAULT_RADII), anchor_radii=DEFAULT_RADII)


@pytest.fixture(scope="session")
def norm_half_disk() -> TriMesh:
    """Graded half-disk for the plateau radii 0.5, 0.1 and 0.01."""
    radii = (0.5, 0.1, 0.01)
    return build_graded_half_disk_mesh(min(radii), anchor_radii=radii)


# =============================================================================
# CONFIGURATION FIXTURES
# =============================================================================


@pytest.fixture
def quadratic_cfg() -> EnergyConfig:
    """p = 2 (the linear torsion problem)."""
    return EnergyConfig(p=2.0)


@pytest.fixture
def singular_cfg() -> EnergyConfig:
    """p = 1.5 (singular weight where the gradient vanishes)."""
    return EnergyConfig(p=1.5)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator; every test gets the same stream."""
    return np.random.default_rng(20240611)
