"""
Command-line entry point of the trace inequality lab.

Startup sequence:
1. Load environment settings (TRACELAB_* variables, .env)
2. Parse the subcommand and its flags
3. Initialize logging
4. Validate the run configuration
5. Run the subcommand and write the report envelope

Exit codes: 0 success, 1 usage error, 2 numeric failure (any verdict "fail").
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from src.config.run_config import Command, Domain, RunConfig
from src.config.settings import LabSettings
from src.reporting.envelope import EXIT_OK, EXIT_USAGE, TOOL_VERSION, write_envelope
from src.reporting.exceptions import UsageError
from src.reporting.runner import run
from src.solver.torsion import Preconditioner

logger = logging.getLogger(__name__)


def setup_logging(level: str = "INFO") -> None:
    """
    Configure structured logging for the lab.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stdout)],
    )


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", choices=[d.value for d in Domain])
    common.add_argument("--mesh-file", type=Path)
    common.add_argument("--n", type=int)
    common.add_argument("--p", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--alpha-mult", type=float)
    common.add_argument("--refine", dest="refinement", type=int)
    common.add_argument("--r", dest="r_values", type=_float_list, help="comma list of radii")
    common.add_argument("--a", dest="a_values", type=_float_list, help="comma list of a")
    common.add_argument("--tol", type=float)
    common.add_argument("--preconditioner", choices=[p.value for p in Preconditioner])
    common.add_argument("--samples", type=int)
    common.add_argument("--check-norm", action="store_true", default=None)
    common.add_argument("--holder-p", type=float)
    common.add_argument("--export-boundary", action="store_true", default=None)
    common.add_argument("--out", dest="output_dir", type=Path)
    common.add_argument("--seed", type=int)
    common.add_argument("--max-workers", type=int)
    common.add_argument("--log-level")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracelab", description="Numerical checks of the sharp trace inequality"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()
    for command in Command:
        subparsers.add_parser(command.value, parents=[common])
    return parser


def build_config(args: argparse.Namespace, settings: LabSettings) -> RunConfig:
    """
    RunConfig from parsed flags; unset flags fall back to settings, then defaults.

    Raises:
        pydantic.ValidationError: If a value violates a precondition
    """
    fields: dict[str, Any] = {
        key: value
        for key, value in vars(args).items()
        if value is not None and key not in ("log_level",)
    }
    fields.setdefault("output_dir", settings.output_dir)
    fields.setdefault("max_workers", settings.max_workers)
    return RunConfig(**fields)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    settings = LabSettings()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    setup_logging(args.log_level or settings.log_level)

    try:
        config = build_config(args, settings)
    except ValidationError as e:
        for error in e.errors():
            field = ".".join(str(part) for part in error["loc"]) or "config"
            logger.error("Invalid value for %s: %s", field, error["msg"])
            print(f"tracelab: invalid {field}: {error['msg']}", file=sys.stderr)
        return EXIT_USAGE

    logger.info("tracelab v%s: %s", TOOL_VERSION, config.command.value)
    try:
        envelope = run(config)
    except UsageError as e:
        logger.error("Usage error (%s): %s", e.field or "config", e)
        print(f"tracelab: invalid {e.field or 'config'}: {e}", file=sys.stderr)
        return EXIT_USAGE

    path = write_envelope(envelope, config.output_dir)
    logger.info("Report written to %s (exit %d)", path, envelope.exit_code)
    return envelope.exit_code


def main_cli() -> None:
    """Console-script wrapper."""
    sys.exit(main())


if __name__ == "__main__":
    main_cli()
