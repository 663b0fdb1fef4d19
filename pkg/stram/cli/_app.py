#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Argument parser and entry point of the ``stram`` executable."""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from stram.cli._commands import (
    EXIT_INPUT,
    EXIT_LIMIT,
    check_solver,
    cmd_export_mps,
    cmd_paths,
    cmd_sensitivity,
    cmd_solve,
    cmd_static,
    cmd_validate,
    cmd_vss,
    exit_code_of,
)
from stram.model import NoSolutionError, StramError

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["COMMANDS", "LOG_FORMAT", "build_parser", "main"]

logger = logging.getLogger(__name__)

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"

COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "vss": cmd_vss,
    "sensitivity": cmd_sensitivity,
    "static": cmd_static,
    "paths": cmd_paths,
    "export-mps": cmd_export_mps,
}


def build_parser() -> argparse.ArgumentParser:
    """Return the parser of every ``stram`` command.

    Examples
    --------
    >>> from stram.cli import build_parser
    >>> args = build_parser().parse_args(["solve", "--instance", "toy", "--out", "o"])
    >>> args.command, args.risk_aversion, args.cvar_level
    ('solve', 0.2, 0.8)
    """
    parser = argparse.ArgumentParser(
        prog="stram",
        description="Strategic multimodal freight transport planning under "
        "technology uncertainty.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="Command to run.")
    parser.add_argument(
        "--instance",
        required=True,
        help="Instance directory holding instance.json and the CSV tables.",
    )
    parser.add_argument(
        "--out",
        default=None,
        help="Output directory; required by every command except validate.",
    )
    parser.add_argument(
        "--scenarios",
        default=None,
        help="Scenario file; defaults to the one named in instance.json.",
    )
    parser.add_argument(
        "--lambda",
        dest="risk_aversion",
        type=float,
        default=0.2,
        help="Weight of the CVaR term in [0, 1] (default 0.2).",
    )
    parser.add_argument(
        "--gamma",
        dest="cvar_level",
        type=float,
        default=0.8,
        help="CVaR confidence level in [0, 1) (default 0.8).",
    )
    parser.add_argument(
        "--gap",
        type=float,
        default=None,
        help="Relative MIP gap; the configured mip_gap if omitted.",
    )
    parser.add_argument(
        "--time-limit",
        type=float,
        default=None,
        help="Solver time limit in seconds; the configured value if omitted.",
    )
    parser.add_argument(
        "--solver",
        default=None,
        help="'builtin' or 'external:<command template>'.",
    )
    parser.add_argument(
        "--nonanticipativity",
        choices=("merged", "explicit"),
        default=None,
        help="How first-stage decisions are shared between scenarios.",
    )
    parser.add_argument(
        "--max-modes",
        type=int,
        default=None,
        help="Longest mode sequence of a path; the configured value if omitted.",
    )
    parser.add_argument(
        "--factors",
        default="0,1,2",
        help="Comma separated carbon price factors of the sensitivity command.",
    )
    parser.add_argument(
        "--year",
        type=int,
        default=None,
        help="Period start year of the static command.",
    )
    parser.add_argument(
        "--wait-and-see",
        action="store_true",
        help="Also solve every scenario alone for the wait-and-see bound.",
    )
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Log at DEBUG level."
    )
    return parser


def _add_file_log(directory: Path, level: int) -> logging.Handler:
    directory.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(directory / "run.log", mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.setLevel(level)
    logging.getLogger("stram").addHandler(handler)
    return handler


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one ``stram`` command and return its exit code.

    Exit codes are 0 on success, 2 on invalid input, 3 when the solver stopped at
    a limit and 4 when the program is infeasible or unbounded.

    Parameters
    ----------
    argv : sequence of str, default=None
        Arguments without the program name; ``sys.argv[1:]`` if None.

    Returns
    -------
    int
        The exit code.
    """
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    level = logging.DEBUG if args.verbose else logging.INFO
    if not logging.getLogger().handlers:
        logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("stram").setLevel(level)

    if args.out is None and args.command != "validate":
        print(f"stram {args.command}: --out is required.", file=sys.stderr)
        return EXIT_INPUT
    handler = _add_file_log(Path(args.out), level) if args.out is not None else None
    try:
        code = _run(args)
        if code == EXIT_LIMIT:
            logger.warning("Solver stopped at a limit; best incumbent written.")
        logger.info("stram %s finished with exit code %d", args.command, code)
    finally:
        if handler is not None:
            logging.getLogger("stram").removeHandler(handler)
            handler.close()
    return code


def _run(args: argparse.Namespace) -> int:
    try:
        check_solver(args.solver)
        return COMMANDS[args.command](args)
    except NoSolutionError as error:
        logger.error("%s", error)
        return exit_code_of(error.status)
    except (StramError, ValueError, FileNotFoundError) as error:
        logger.error("%s", error)
        print(f"stram {args.command}: {error}", file=sys.stderr)
        return EXIT_INPUT
