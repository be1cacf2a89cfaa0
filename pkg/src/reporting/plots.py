"""Gnuplot script emission for report tables."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from src.reporting.envelope import ReportEnvelope, TableArtifact

PLOT_FILE = "plot.gp"

_HEADER = [
    "# Generated by tracelab; run with: gnuplot plot.gp",
    'set datafile separator ","',
    "set key top left",
    "set grid",
    "set terminal pngcairo size 900,600",
]


def _table_block(artifact: "TableArtifact") -> list[str]:
    lines = [
        "",
        f'set output "{artifact.name}.png"',
        f'set title "{artifact.name}"',
        f'set xlabel "{artifact.x}"',
        f'set ylabel "{", ".join(artifact.y)}"',
        "unset logscale",
    ]
    if artifact.log_x:
        lines.append("set logscale x")
    if artifact.log_y:
        lines.append("set logscale y")
    if artifact.table.empty:
        lines.append("plot [1:10] NaN notitle")
        return lines
    curves = [
        f'"{artifact.file_name}" using "{artifact.x}":"{column}" '
        f'with linespoints title "{column}"'
        for column in artifact.y
    ]
    lines.append("plot " + ", \\\n     ".join(curves))
    return lines


def emit_plot_script(report: "ReportEnvelope") -> str:
    """
    Gnuplot script drawing every table of ``report`` into <name>.png.

    Tables flagged log_x/log_y get logarithmic axes (blow-up scans are
    log-log). A report without tables yields an empty set of axes.
    """
    lines = list(_HEADER)
    if not report.tables:
        lines += ['set output "empty.png"', 'set xlabel "param"', "plot [1:10] NaN notitle"]
    for artifact in report.tables:
        lines += _table_block(artifact)
    return "\n".join(lines) + "\n"
