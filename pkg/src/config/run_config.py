"""
Validated configuration of one command-line run.

RunConfig rejects unknown keys and any value outside the preconditions of the
operation the subcommand calls, so a config that validates can be echoed into
the report and replayed bit-exactly.
"""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.geometry.constants import trace_constant
from src.solver.torsion import Preconditioner

MAX_REFINEMENT = 8
DEFAULT_R_VALUES = (1e-1, 1e-2, 1e-3, 1e-4)
DEFAULT_A_VALUES = (0.9, 0.99, 0.999, 0.9999)


class Command(str, Enum):
    """Subcommands of the lab CLI."""

    SOLVE_TORSION = "solve-torsion"
    VERIFY_EL = "verify-el"
    MOSER_NORM = "moser-norm"
    SHARPNESS = "sharpness"
    TRACE_SCAN = "trace-scan"
    BEURLING = "beurling"
    CM_SCAN = "cm-scan"
    CONVERSION_CHECK = "conversion-check"


class Domain(str, Enum):
    """Domain a run works on."""

    DISK = "disk"
    HALF_DISK = "half-disk"
    BALL = "ball"
    MESH = "mesh"


# Multiple of β_n used when neither alpha nor alpha_mult is given.
DEFAULT_ALPHA_MULT = {
    Command.SHARPNESS: 1.2,
    Command.TRACE_SCAN: 0.5,
}
DEFAULT_ALPHA = {
    Command.CM_SCAN: 1.1,
    Command.CONVERSION_CHECK: 0.1,
}
DEFAULT_DOMAIN = {
    Command.MOSER_NORM: Domain.HALF_DISK,
    Command.SHARPNESS: Domain.HALF_DISK,
    Command.TRACE_SCAN: Domain.HALF_DISK,
}


class RunConfig(BaseModel):
    """
    All inputs of a run.

    Attributes:
        command: Subcommand
        domain: disk | half-disk | ball | mesh (subcommand default when None)
        mesh_file: Plain-text mesh for domain "mesh" (must exist)
        n: Dimension of the exponent n/(n-1) and of the ball
        p: Exponent of the trace function energy
        alpha: Absolute exponent constant
        alpha_mult: Exponent constant as a multiple of β_n
        refinement: Uniform refinement level (or conversion-study top level)
        r_values: Plateau radii of the concentrating sequence
        a_values: Beurling parameters
        tol: Solver tolerance (solver default when None)
        preconditioner: Solver direction metric
        samples: Boundary samples on the unit circle
        check_norm: Also verify the Beurling Dirichlet integral
        holder_p: Add the Hölder diagnostic column to trace scans
        export_boundary: Write Beurling boundary samples as CSV
        output_dir: Directory for the envelope, tables and plot script
        seed: Seed of randomized checks
        max_workers: Threads used by scans
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    domain: Optional[Domain] = None
    mesh_file: Optional[Path] = None
    n: int = Field(default=2, ge=2)
    p: float = Field(default=2.0, gt=1.0)
    alpha: Optional[float] = Field(default=None, ge=0.0)
    alpha_mult: Optional[float] = Field(default=None, ge=0.0)
    refinement: int = Field(default=4, ge=0, le=MAX_REFINEMENT)
    r_values: tuple[float, ...] = DEFAULT_R_VALUES
    a_values: tuple[float, ...] = DEFAULT_A_VALUES
    tol: Optional[float] = Field(default=None, gt=0.0)
    preconditioner: Preconditioner = Preconditioner.LAGGED_DIFFUSION
    samples: int = Field(default=2**16, ge=16)
    check_norm: bool = False
    holder_p: Optional[float] = Field(default=None, gt=1.0)
    export_boundary: bool = False
    output_dir: Path = Path("out")
    seed: int = Field(default=0, ge=0)
    max_workers: int = Field(default=1, ge=1)

    @field_validator("p", "alpha", "alpha_mult", "tol", "holder_p")
    @classmethod
    def _finite(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @field_validator("r_values", "a_values")
    @classmethod
    def _unit_interval(cls, values: tuple[float, ...]) -> tuple[float, ...]:
        if not values:
            raise ValueError("at least one value is required")
        for value in values:
            if not (math.isfinite(value) and 0.0 < value < 1.0):
                raise ValueError(f"every value must lie in (0, 1), got {value}")
        return values

    @field_validator("mesh_file")
    @classmethod
    def _readable_mesh(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"no such mesh file: {value}")
        return value

    @field_validator("samples")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value & (value - 1):
            raise ValueError(f"must be a power of two, got {value}")
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if self.alpha is not None and self.alpha_mult is not None:
            raise ValueError("give either alpha or alpha_mult, not both")
        if self.domain is Domain.MESH and self.mesh_file is None:
            raise ValueError("domain 'mesh' needs mesh_file")
        if self.n != 2 and self.domain not in (None, Domain.BALL):
            raise ValueError(f"n={self.n} needs domain 'ball' (planar domains have n = 2)")
        if self.holder_p is not None and self.holder_p >= self.n:
            raise ValueError(f"holder_p must be < n={self.n}, got {self.holder_p}")
        return self

    def resolved_domain(self) -> Domain:
        """domain, else ball for n > 2, else the subcommand default."""
        if self.domain is not None:
            return self.domain
        if self.n > 2:
            return Domain.BALL
        return DEFAULT_DOMAIN.get(self.command, Domain.DISK)

    def resolved_alpha(self) -> float:
        """alpha, else alpha_mult·β_n, else the subcommand default."""
        if self.alpha is not None:
            return self.alpha
        if self.alpha_mult is not None:
            return self.alpha_mult * trace_constant(self.n)
        if self.command in DEFAULT_ALPHA_MULT:
            return DEFAULT_ALPHA_MULT[self.command] * trace_constant(self.n)
        return DEFAULT_ALPHA.get(self.command, 0.5 * trace_constant(self.n))

    def echo(self) -> dict[str, Any]:
        """JSON-ready copy of every field."""
        return self.model_dump(mode="json")
