"""
Radial discretization of the n-ball.

A RadialGrid is a strictly increasing set of radii 0 = ρ_0 < ... < ρ_K = R;
a RadialProfile is a continuous piecewise-linear function of ρ on it. All
integrals are exact for the piecewise-linear profile against the radial
volume element ω_{n-1} ρ^{n-1} dρ, so arbitrary-dimension checks reduce to
1-D sums.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from src.geometry.constants import sphere_measure
from src.geometry.exceptions import DimensionError, GeometryError
from src.geometry.mesh import graded_radii
from src.utils.validation import require_finite, require_min_int, require_positive


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """
    Radii of a 1-D discretization of the ball B_R ⊂ ℝ^n.

    Attributes:
        n: Dimension (>= 2)
        R: Ball radius
        nodes: Strictly increasing radii, nodes[0] = 0, nodes[-1] = R
    """

    n: int
    R: float
    nodes: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if int(self.n) != self.n or self.n < 2:
            raise DimensionError(f"dimension must be an integer >= 2, got {self.n}")
        if nodes.ndim != 1 or nodes.size < 2:
            raise GeometryError("a radial grid needs at least two nodes")
        if nodes[0] != 0.0 or nodes[-1] != self.R:
            raise GeometryError(
                f"nodes must run from 0 to R={self.R}, got [{nodes[0]}, {nodes[-1]}]"
            )
        if np.any(np.diff(nodes) <= 0.0):
            raise GeometryError("radial nodes must be strictly increasing")

    @classmethod
    def uniform(cls, n: int, R: float = 1.0, intervals: int = 256) -> "RadialGrid":
        require_positive(R, "R")
        intervals = require_min_int(intervals, 1, "intervals")
        return cls(n=n, R=float(R), nodes=np.linspace(0.0, R, intervals + 1))

    @classmethod
    def graded(
        cls,
        n: int,
        r_min: float,
        anchors: Sequence[float] = (),
        ratio: float = 1.05,
    ) -> "RadialGrid":
        """Unit-radius grid refined geometrically down to r_min/8, anchors included."""
        radii = graded_radii(r_min, ratio, anchors, outer=1.0)
        nodes = np.concatenate([[0.0], radii])
        nodes[-1] = 1.0
        return cls(n=n, R=1.0, nodes=nodes)

    @property
    def omega(self) -> float:
        return sphere_measure(self.n)

    @property
    def volume(self) -> float:
        """|B_R| = ω_{n-1} R^n / n."""
        return self.omega * self.R**self.n / self.n

    def shell_moments(self, power: int) -> np.ndarray:
        """(b^k - a^k)/k per interval for k = n + power."""
        k = self.n + power
        a, b = self.nodes[:-1], self.nodes[1:]
        return (b**k - a**k) / k


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """
    Piecewise-linear radial function.

    Attributes:
        grid: Carrier grid
        values: Nodal values u(ρ_i)
        derivative: Nodal values of u'(ρ) when known in closed form
    """

    grid: RadialGrid
    values: np.ndarray
    derivative: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        values = require_finite(self.values, "radial profile")
        if values.shape != self.grid.nodes.shape:
            raise GeometryError(
                f"profile has {values.size} values for {self.grid.nodes.size} nodes"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(
        cls,
        grid: RadialGrid,
        f: Callable[[np.ndarray], np.ndarray],
        derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> "RadialProfile":
        return cls(
            grid=grid,
            values=np.asarray(f(grid.nodes), dtype=float),
            derivative=None if derivative is None else np.asarray(derivative(grid.nodes)),
        )

    @property
    def slopes(self) -> np.ndarray:
        """Constant derivative on each interval."""
        return np.diff(self.values) / np.diff(self.grid.nodes)

    def dirichlet_energy(self, q: float, angular_fraction: float = 1.0) -> float:
        """
        ∫ |u'|^q over the ball (or a fraction of it), exact for the P1 profile.

        ``angular_fraction = 0.5`` gives the half-ball.
        """
        require_positive(q, "q")
        moments = self.grid.shell_moments(0)
        total = float(np.sum(np.abs(self.slopes) ** q * moments))
        return angular_fraction * self.grid.omega * total

    def integral(self, angular_fraction: float = 1.0) -> float:
        """∫ u over the ball with ω_{n-1} ρ^{n-1} dρ, exact for the P1 profile."""
        a = self.grid.nodes[:-1]
        m0 = self.grid.shell_moments(0)
        m1 = self.grid.shell_moments(1)
        linear = self.values[:-1] * m0 + self.slopes * (m1 - a * m0)
        return angular_fraction * self.grid.omega * float(np.sum(linear))

    def mean(self) -> float:
        return self.integral() / self.grid.volume

    def boundary_value(self) -> float:
        return float(self.values[-1])

    def boundary_flux(self, p: float) -> float:
        """|u'|^{p-2} u' at ρ = R (uses the closed-form derivative when present)."""
        if self.derivative is not None:
            slope = float(self.derivative[-1])
        else:
            slope = float(self.slopes[-1])
        if slope == 0.0:
            return 0.0
        return math.copysign(abs(slope) ** (p - 1.0), slope)
