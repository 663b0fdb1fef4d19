#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Solve a program with the built-in or an external solver."""
import logging
from typing import List, Mapping, Optional

from stram.solver._branch import solve_milp
from stram.solver._external import solve_external
from stram.solver._lp import LinearProgram
from stram.solver._result import SolveOptions, SolveResult, SolveStatus
from stram.solver._simplex import solve_lp

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["solve", "parse_solver"]

logger = logging.getLogger(__name__)

EXTERNAL_PREFIX = "external:"


def parse_solver(solver: Optional[str]) -> Optional[str]:
    """Return the external command of a solver choice, None for the built-in one.

    Examples
    --------
    >>> from stram.solver import parse_solver
    >>> parse_solver("builtin") is None
    True
    >>> parse_solver("external:run {mps} {solution}")
    'run {mps} {solution}'
    """
    if solver is None or solver == "builtin":
        return None
    if solver.startswith(EXTERNAL_PREFIX) and solver[len(EXTERNAL_PREFIX) :].strip():
        return solver[len(EXTERNAL_PREFIX) :].strip()
    msg = "`solver` must be 'builtin' or 'external:<command>', "
    msg += f"but found {solver!r}."
    raise ValueError(msg)


def solve(
    program,
    solver: Optional[str] = None,
    options: Optional[SolveOptions] = None,
    fixed: Optional[Mapping[int, float]] = None,
) -> SolveResult:
    """Solve a stochastic or linear program.

    Parameters
    ----------
    program : StochasticProgram or LinearProgram
        Program to minimize.
    solver : str, default=None
        ``"builtin"`` (the default) or ``"external:<command template>"``.
    options : SolveOptions, default=None
        Gap, tolerances and limits; from the configuration if None.
    fixed : mapping, default=None
        Columns fixed to given values, e.g. first-stage decisions.

    Returns
    -------
    SolveResult
        Values are indexed by column.

    Examples
    --------
    >>> from stram.solver import LinearProgram, solve
    >>> lp = LinearProgram([1.0, 0.0], [[1.0, 1.0]], ["="], [5.0])
    >>> result = solve(lp)
    >>> result.status.value, result.values.tolist()
    ('optimal', [0.0, 5.0])
    """
    options = SolveOptions.from_config() if options is None else options
    command = parse_solver(solver)
    if isinstance(program, LinearProgram):
        lp = program
    else:
        lp = LinearProgram.from_program(program)
    if fixed:
        lp = lp.fix(fixed)

    if command is not None:
        result = solve_external(lp, command, options)
    elif lp.integrality.any():
        result = solve_milp(lp, options)
    else:
        result = solve_lp(lp, options)

    if result.status is SolveStatus.LIMIT:
        logger.warning("Solve stopped at a limit: %s", result.message)
    else:
        logger.info(
            "Solve finished: %s, objective %.6g, gap %.4g",
            result.status.value,
            result.objective,
            result.gap,
        )
    if result.has_solution:
        violation = lp.max_violation(result.values)
        if violation > options.feasibility_tol * 10:
            logger.warning("Returned solution violates a row by %.3g", violation)
    return result
