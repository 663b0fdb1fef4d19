#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Bridge to an external solver through model and solution files."""
import logging
import math
import shlex
import subprocess
import tempfile
import time
from pathlib import Path
from typing import List, Optional, Union

from stram.solver._lp import LinearProgram
from stram.solver._mps import import_solution, write_mps
from stram.solver._result import SolveOptions, SolveResult, SolveStatus, _no_solution

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["solve_external"]

logger = logging.getLogger(__name__)


def solve_external(
    lp: LinearProgram,
    command: str,
    options: Optional[SolveOptions] = None,
    workdir: Optional[Union[str, Path]] = None,
) -> SolveResult:
    """Solve `lp` with an external program.

    The program is written as ``model.mps`` to `workdir`, then `command` is run
    without a shell after substituting ``{mps}`` and ``{solution}`` with the model
    and solution paths. The command must write the solution text format described
    in :mod:`stram.solver._mps`.

    Parameters
    ----------
    lp : LinearProgram
        Program to solve.
    command : str
        Command template, e.g. ``"my-solver --gap 0.005 {mps} {solution}"``.
    options : SolveOptions, default=None
        The time limit bounds the command's run time.
    workdir : str or Path, default=None
        Directory for the exchanged files; a temporary directory if None.

    Returns
    -------
    SolveResult
        The imported solution; LIMIT without values if the command fails, times
        out or writes no solution.
    """
    if "{mps}" not in command or "{solution}" not in command:
        msg = "`command` must contain the placeholders {mps} and {solution}, "
        msg += f"but found {command!r}."
        raise ValueError(msg)
    options = SolveOptions.from_config() if options is None else options
    started = time.perf_counter()
    with tempfile.TemporaryDirectory() as scratch:
        directory = Path(workdir) if workdir is not None else Path(scratch)
        directory.mkdir(parents=True, exist_ok=True)
        model, solution = directory / "model.mps", directory / "solution.txt"
        write_mps(lp, model)
        argv = [
            part.replace("{mps}", str(model)).replace("{solution}", str(solution))
            for part in shlex.split(command)
        ]
        logger.info("Running external solver: %s", " ".join(argv))
        timeout = None if math.isinf(options.time_limit) else options.time_limit
        try:
            completed = subprocess.run(
                argv, capture_output=True, text=True, timeout=timeout, check=False
            )
        except subprocess.TimeoutExpired:
            return _no_solution(
                SolveStatus.LIMIT,
                time.perf_counter() - started,
                message="External solver exceeded the time limit.",
            )
        except OSError as error:
            return _no_solution(
                SolveStatus.LIMIT,
                time.perf_counter() - started,
                message=f"External solver could not be started: {error}",
            )
        if completed.returncode != 0 or not solution.exists():
            msg = f"External solver exited with code {completed.returncode}"
            if completed.stderr:
                msg += f": {completed.stderr.strip()[-500:]}"
            logger.warning(msg)
            return _no_solution(
                SolveStatus.LIMIT, time.perf_counter() - started, message=msg
            )
        result = import_solution(solution, lp)
    return SolveResult(
        status=result.status,
        objective=result.objective,
        values=result.values,
        bound=result.bound,
        gap=result.gap,
        wall_time=time.perf_counter() - started,
        message=result.message,
    )
