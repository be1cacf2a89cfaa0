"""
Subcommand execution.

run(config) dispatches to one handler per subcommand. A handler computes its
experiment, adds results, tables and verdicts to the envelope, and never
writes files; write_envelope does that afterwards on the calling thread.

Numeric failures from the computation layers (geometry, solver, extremals,
disk) are caught here and turned into verdict "fail" with a diagnostics
entry, so the envelope is always produced. Usage errors propagate.
"""

import logging
import math
import time
from typing import Any, Callable, Optional

import numpy as np
import pandas as pd

from src.config.run_config import Command, Domain, RunConfig
from src.disk.chang_marshall import (
    beurling_boundary,
    beurling_cm_integral,
    beurling_dirichlet_norm_sq,
    beurling_dirichlet_norm_sq_quadrature,
    boundary_frame,
    cm_scan,
    level_set_bound,
    level_set_measure,
)
from src.disk.exceptions import DiskError
from src.energy.p_energy import EnergyConfig, MeshFunction, cell_gradients, dirichlet_norm
from src.extremals.exceptions import ExtremalError
from src.extremals.moser import (
    MoserParams,
    moser_norm_measured,
    moser_norm_predicted,
    normalized_test_sequence,
    sharpness_experiment,
    sorted_radii,
)
from src.extremals.radial_model import radial_moser_norm, radial_sharpness_experiment
from src.geometry.exceptions import GeometryError
from src.geometry.mesh import (
    TRACE_TAG,
    TriMesh,
    build_disk_mesh,
    build_graded_disk_mesh,
    build_graded_half_disk_mesh,
    build_half_disk_mesh,
    read_mesh_text,
)
from src.geometry.radial import RadialGrid
from src.reporting.envelope import ReportEnvelope, TableArtifact
from src.reporting.exceptions import UsageError
from src.solver.exceptions import IterationLimitError, LineSearchError, SolverError
from src.solver.torsion import (
    SolveReport,
    energy_roundoff,
    radial_oracle_error,
    radial_trace_derivative,
    radial_trace_function,
    solve_trace_function,
)
from src.trace.functional import conversion_identity_check, holder_admissible
from src.trace.scan import ScanReport, Verdict, boundedness_scan

logger = logging.getLogger(__name__)

FLUX_TOLERANCE = 1e-6
MOSER_NORM_TOLERANCE = 0.05
CONVERSION_TOLERANCE = 0.02
UNIQUENESS_FACTOR = 10.0
NORM_TOLERANCE = 1e-10
LEVEL_SET_LEVELS = (0.5, 1.0, 1.5, 2.0, 2.5)
RADIAL_INTERVALS = 256

Handler = Callable[[RunConfig, ReportEnvelope], None]


# =============================================================================
# DOMAINS
# =============================================================================


def _planar_mesh(config: RunConfig, graded_radii: Optional[list[float]] = None) -> TriMesh:
    """Mesh of the run's domain; graded around the origin when radii are given."""
    domain = config.resolved_domain()
    if domain is Domain.BALL:
        raise UsageError(f"{config.command.value} needs a planar domain", field="domain")
    if domain is Domain.MESH:
        assert config.mesh_file is not None
        return read_mesh_text(config.mesh_file)
    if graded_radii:
        r_min = min(graded_radii)
        if domain is Domain.HALF_DISK:
            return build_graded_half_disk_mesh(r_min, anchor_radii=graded_radii)
        return build_graded_disk_mesh(r_min, anchor_radii=graded_radii)
    if domain is Domain.HALF_DISK:
        return build_half_disk_mesh(config.refinement)
    return build_disk_mesh(config.refinement)


def _solve(config: RunConfig, mesh: TriMesh, u0: Optional[MeshFunction] = None) -> SolveReport:
    cfg = EnergyConfig(p=config.p)
    return solve_trace_function(mesh, cfg, config.tol, config.preconditioner, u0=u0)


def _scan_artifact(report: ScanReport, y: tuple[str, ...], log_y: bool = True) -> TableArtifact:
    return TableArtifact(report.name, report.table, x="param", y=y, log_x=True, log_y=log_y)


# =============================================================================
# HANDLERS
# =============================================================================


def _solve_torsion(config: RunConfig, envelope: ReportEnvelope) -> None:
    if config.resolved_domain() is Domain.BALL:
        grid = RadialGrid.uniform(config.n, 1.0, RADIAL_INTERVALS)
        profile = radial_trace_function(config.n, config.p, 1.0, grid)
        flux = profile.boundary_flux(config.p)
        table = pd.DataFrame(
            {"rho": grid.nodes, "w": profile.values, "derivative": profile.derivative}
        )
        verdict = Verdict.PASS if abs(flux - 1.0) <= 1e-12 else Verdict.FAIL
        envelope.add_result(
            "radial_trace_function",
            "summary",
            {"n": config.n, "p": config.p, "boundary_flux": flux, "mean": profile.mean()},
            TableArtifact("radial_trace_function", table, x="rho", y=("w", "derivative")),
            verdict,
        )
        return

    mesh = _planar_mesh(config)
    report = _solve(config, mesh)
    payload = {**report.to_dict(), "mesh": mesh.summary()}
    radii = np.linalg.norm(mesh.cell_centroids, axis=1)
    columns = {"radius": radii, "grad_norm": np.linalg.norm(cell_gradients(report.w), axis=1)}
    y: tuple[str, ...] = ("grad_norm",)
    if config.resolved_domain() is Domain.DISK:
        payload["radial_oracle_error"] = radial_oracle_error(report.w, config.p)
        columns["oracle"] = radial_trace_derivative(radii, config.p)
        y = ("grad_norm", "oracle")
    table = pd.DataFrame(columns).sort_values("radius", kind="mergesort")
    ok = report.converged and report.boundary_flux_deviation <= FLUX_TOLERANCE
    envelope.add_result(
        "solve_torsion",
        "solve",
        payload,
        TableArtifact("torsion_gradients", table, x="radius", y=y),
        Verdict.PASS if ok else Verdict.FAIL,
    )


def _verify_el(config: RunConfig, envelope: ReportEnvelope) -> None:
    mesh = _planar_mesh(config)
    report = _solve(config, mesh)

    rng = np.random.default_rng(config.seed)
    start = MeshFunction(mesh, rng.standard_normal(mesh.n_vertices))
    second = _solve(config, mesh, u0=start)
    gap = dirichlet_norm(report.w - second.w, config.p)

    residual_bound = 2.0 * report.tolerance / config.p
    energies = np.asarray(report.energy_trace)
    slack = np.array([energy_roundoff(value) for value in energies[:-1]])
    monotone = bool(np.all(np.diff(energies) <= slack))
    checks = {
        "residual": report.interior_residual <= residual_bound,
        "flux": report.boundary_flux_deviation <= FLUX_TOLERANCE,
        "uniqueness": gap <= UNIQUENESS_FACTOR * report.tolerance,
        "monotone": monotone,
        "negative_energy": report.energy < 0.0,
    }
    payload = {
        **report.to_dict(),
        "residual_bound": residual_bound,
        "uniqueness_gap": gap,
        "checks": checks,
    }
    trace = pd.DataFrame({"iteration": np.arange(energies.size), "energy": energies})
    envelope.add_result(
        "verify_el",
        "solve",
        payload,
        TableArtifact("energy_trace", trace, x="iteration", y=("energy",)),
        Verdict.PASS if all(checks.values()) else Verdict.FAIL,
    )
    for name, ok in checks.items():
        if not ok:
            envelope.diagnostics.append(f"verify_el: check {name!r} failed")


def _moser_template(mesh: TriMesh) -> tuple[MoserParams, Optional[list[str]]]:
    """Members centred at the origin; on the "trace" segment when the mesh has one."""
    on_trace = TRACE_TAG in mesh.tags
    tags = [TRACE_TAG] if on_trace else None
    return MoserParams(r=0.5, on_trace_boundary=on_trace), tags


def _moser_norm(config: RunConfig, envelope: ReportEnvelope) -> None:
    radii = sorted_radii(config.r_values)
    domain = config.resolved_domain()
    rows = []
    if domain is Domain.BALL:
        for r in radii:
            rows.append((r, moser_norm_predicted(r, config.n), radial_moser_norm(r, config.n)))
    else:
        mesh = _planar_mesh(config, graded_radii=radii)
        template, _ = _moser_template(mesh)
        # Around an interior centre the plateau sees the whole circle.
        factor = 1.0 if template.on_trace_boundary else 2.0
        for r in radii:
            predicted = factor * moser_norm_predicted(r, 2)
            rows.append((r, predicted, moser_norm_measured(template.with_radius(r), mesh)))

    table = pd.DataFrame(rows, columns=["param", "predicted", "measured"])
    table["relative_error"] = (table["measured"] - table["predicted"]).abs() / table["predicted"]
    worst = float(table["relative_error"].max())
    envelope.add_result(
        "moser_norm",
        "summary",
        {"domain": domain.value, "n": config.n, "max_relative_error": worst},
        TableArtifact("moser_norm", table, x="param", y=("predicted", "measured"), log_x=True),
        Verdict.PASS if worst <= MOSER_NORM_TOLERANCE else Verdict.FAIL,
    )


def _sharpness(config: RunConfig, envelope: ReportEnvelope) -> None:
    alpha = config.resolved_alpha()
    if config.resolved_domain() is Domain.BALL:
        report = radial_sharpness_experiment(
            alpha, config.r_values, config.n, max_workers=config.max_workers
        )
    else:
        radii = sorted_radii(config.r_values)
        mesh = _planar_mesh(config, graded_radii=radii)
        if TRACE_TAG not in mesh.tags:
            raise UsageError(
                f"sharpness needs a mesh with a {TRACE_TAG!r} boundary segment", field="domain"
            )
        report = sharpness_experiment(alpha, radii, mesh, max_workers=config.max_workers)
    envelope.add_result(
        report.name,
        "scan",
        {"baseline": report.baseline, "details": report.details},
        _scan_artifact(report, ("trace_integral", "lower_bound")),
        report.verdict,
    )


def _trace_scan(config: RunConfig, envelope: ReportEnvelope) -> None:
    alpha = config.resolved_alpha()
    radii = sorted_radii(config.r_values)
    mesh = _planar_mesh(config, graded_radii=radii)
    template, tags = _moser_template(mesh)
    family = normalized_test_sequence(radii, mesh, base=template)
    report = boundedness_scan(
        family,
        alpha,
        2,
        params=radii,
        tags=tags,
        holder_p=config.holder_p,
        max_workers=config.max_workers,
    )
    details: dict[str, Any] = {"alpha": alpha, "tags": tags}
    if config.holder_p is not None:
        details["holder_admissible"] = holder_admissible(alpha, 2, config.holder_p)
    envelope.add_result(
        report.name,
        "scan",
        {"baseline": report.baseline, "details": details},
        _scan_artifact(report, ("trace_integral",)),
        report.verdict,
    )


def _beurling(config: RunConfig, envelope: ReportEnvelope) -> None:
    rows = []
    norm_rows = []
    for a in config.a_values:
        f = beurling_boundary(a, config.samples)
        for s in LEVEL_SET_LEVELS:
            measure = level_set_measure(f, s)
            rows.append((a, s, measure, measure / (2.0 * math.pi), level_set_bound(s)))
        if config.check_norm:
            norm_rows.append(
                (a, beurling_dirichlet_norm_sq(a), beurling_dirichlet_norm_sq_quadrature(a))
            )
        if config.export_boundary:
            frame = boundary_frame(f)
            envelope.add_table(
                TableArtifact(f"beurling_boundary_a{a:g}", frame, x="theta", y=("value_re",))
            )

    levels = pd.DataFrame(rows, columns=["a", "s", "measure", "normalized_measure", "bound"])
    levels_ok = bool(np.all(levels["normalized_measure"] <= levels["bound"]))
    envelope.add_result(
        "beurling_levels",
        "summary",
        {"samples": config.samples, "estimate_holds": levels_ok},
        TableArtifact(
            "beurling_levels", levels, x="s", y=("normalized_measure", "bound"), log_y=True
        ),
        Verdict.PASS if levels_ok else Verdict.FAIL,
    )
    if config.check_norm:
        norms = pd.DataFrame(norm_rows, columns=["a", "dirichlet_norm_sq", "quadrature"])
        deviation = float((norms["dirichlet_norm_sq"] - math.pi).abs().max())
        envelope.add_result(
            "beurling_norm",
            "summary",
            {"max_deviation_from_pi": deviation},
            TableArtifact("beurling_norm", norms, x="a", y=("dirichlet_norm_sq", "quadrature")),
            Verdict.PASS if deviation <= NORM_TOLERANCE else Verdict.FAIL,
        )


def _cm_scan(config: RunConfig, envelope: ReportEnvelope) -> None:
    alpha = config.resolved_alpha()
    report = cm_scan(config.a_values, alpha, m=config.samples, max_workers=config.max_workers)
    centre = report.table[(report.table["z_re"] == 0.0) & (report.table["z_im"] == 0.0)]
    envelope.add_result(
        report.name,
        "scan",
        {"details": report.details},
        TableArtifact(report.name, report.table, x="a", y=("cm_integral",), log_y=True),
        report.verdict,
    )
    graded = pd.DataFrame(
        {
            "a": centre["a"].to_numpy(),
            "cm_integral": centre["cm_integral"].to_numpy(),
            "graded_cm_integral": [beurling_cm_integral(a, alpha) for a in centre["a"]],
        }
    )
    envelope.add_table(
        TableArtifact("cm_centre", graded, x="a", y=("cm_integral", "graded_cm_integral"))
    )


def _conversion_check(config: RunConfig, envelope: ReportEnvelope) -> None:
    alpha = config.resolved_alpha()
    cfg = EnergyConfig(p=config.p)
    rows = []
    for level in range(max(0, config.refinement - 2), config.refinement + 1):
        mesh = _planar_mesh(config.model_copy(update={"refinement": level}))
        w = solve_trace_function(mesh, cfg, config.tol, config.preconditioner).w
        u = MeshFunction.from_callable(mesh, lambda xy: xy[:, 0])
        result = conversion_identity_check(u, w, alpha, 2, cfg)
        rows.append({"refinement": level, "h": mesh.max_edge_length, **result.to_dict()})

    table = pd.DataFrame(rows)
    defects = table["relative_defect"].to_numpy(dtype=float)
    decreasing = bool(defects[-1] <= defects[0])
    ok = defects[-1] <= CONVERSION_TOLERANCE and decreasing
    envelope.add_result(
        "conversion_check",
        "trace_eval",
        {"alpha": alpha, "final_relative_defect": float(defects[-1]), "decreasing": decreasing},
        TableArtifact("conversion_check", table, x="h", y=("relative_defect",), log_x=True),
        Verdict.PASS if ok else Verdict.FAIL,
    )


HANDLERS: dict[Command, Handler] = {
    Command.SOLVE_TORSION: _solve_torsion,
    Command.VERIFY_EL: _verify_el,
    Command.MOSER_NORM: _moser_norm,
    Command.SHARPNESS: _sharpness,
    Command.TRACE_SCAN: _trace_scan,
    Command.BEURLING: _beurling,
    Command.CM_SCAN: _cm_scan,
    Command.CONVERSION_CHECK: _conversion_check,
}


# =============================================================================
# ENTRY
# =============================================================================


def run(config: RunConfig) -> ReportEnvelope:
    """
    Execute one subcommand.

    Returns:
        ReportEnvelope; numeric failures appear as verdict "fail"

    Raises:
        UsageError: If the configuration does not fit the subcommand
    """
    envelope = ReportEnvelope(config=config.echo())
    command = config.command
    logger.info("Running %s (seed=%d)", command.value, config.seed)
    started = time.perf_counter()
    try:
        HANDLERS[command](config, envelope)
    except (IterationLimitError, LineSearchError) as e:
        logger.error("%s failed: %s", command.value, e)
        envelope.verdicts[command.value] = Verdict.FAIL
        envelope.diagnostics.append(f"{type(e).__name__}: {e}")
        if e.report is not None:
            envelope.add_result("best_iterate", "solve", e.report.to_dict())
    except (GeometryError, SolverError, ExtremalError, DiskError) as e:
        logger.error("%s failed: %s", command.value, e)
        envelope.verdicts[command.value] = Verdict.FAIL
        envelope.diagnostics.append(f"{type(e).__name__}: {e}")
    envelope.timings[command.value] = time.perf_counter() - started

    for name, verdict in envelope.verdicts.items():
        logger.info("Verdict %s: %s", name, verdict.value)
    return envelope
