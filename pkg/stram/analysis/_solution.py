#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""A solved program and the run that produces it."""
import logging
from dataclasses import dataclass
from typing import Iterator, List, Mapping, Optional, Tuple

from stram.model import Instance, NoSolutionError
from stram.paths import PathSet, generate_path_set
from stram.program import ProgramOptions, StochasticProgram, Variable, assemble
from stram.scenarios import ScenarioTree
from stram.solver import SolveOptions, SolveResult, solve

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["Solution", "run_model"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Solution:
    """Values of a solved program together with what it was built from.

    Parameters
    ----------
    program : StochasticProgram
        The program that was solved.
    paths : PathSet
        Paths the program was built on.
    tree : ScenarioTree
        Scenarios the program was built for.
    result : SolveResult
        Solver outcome; values are indexed by column.
    """

    program: StochasticProgram
    paths: PathSet
    tree: ScenarioTree
    result: SolveResult

    @property
    def objective(self) -> float:
        """Objective of the returned values, inf without a solution."""
        return self.result.objective

    @property
    def merged(self) -> bool:
        """Whether first-stage decisions are shared columns."""
        return self.program.options.nonanticipativity == "merged"

    def owner(self, year: Optional[int], scenario: str) -> str:
        """Return the scenario owning the columns of `scenario` in `year`."""
        if year is None or not self.merged:
            return scenario
        return self.tree.representative(year, scenario)

    def require_values(self) -> None:
        """Raise if the solve returned no values.

        Raises
        ------
        NoSolutionError
            If the result holds no solution.
        """
        if not self.result.has_solution:
            msg = "Cannot report on a solve without a solution, "
            msg += f"status was {self.result.status.value!r}."
            raise NoSolutionError(msg, status=self.result.status.value)

    def scenario_items(
        self, scenario: str, blocks: Optional[Tuple[str, ...]] = None
    ) -> Iterator[Tuple[Variable, float]]:
        """Yield every dated variable of `scenario` with its value.

        Shared first-stage columns are yielded for every scenario they belong to.
        """
        self.require_values()
        values = self.result.values
        for column, variable in enumerate(self.program.catalog):
            if variable.year is None or variable.scenario is None:
                continue
            if blocks is not None and variable.block not in blocks:
                continue
            if variable.scenario == self.owner(variable.year, scenario):
                yield variable, float(values[column])

    def scenario_costs(self) -> Mapping[str, float]:
        """Return each scenario's discounted cost at the solution."""
        self.require_values()
        return self.program.scenario_cost_values(self.result.values)


def run_model(
    instance: Instance,
    tree: ScenarioTree,
    paths: Optional[PathSet] = None,
    program_options: Optional[ProgramOptions] = None,
    solve_options: Optional[SolveOptions] = None,
    solver: Optional[str] = None,
) -> Solution:
    """Generate paths, assemble and solve the program of an instance.

    Parameters
    ----------
    instance : Instance
        The instance.
    tree : ScenarioTree
        Scenarios to plan for.
    paths : PathSet, default=None
        Admissible paths; generated for `tree` if None.
    program_options : ProgramOptions, default=None
        Risk weighting, static year and non-anticipativity mode.
    solve_options : SolveOptions, default=None
        Gap, tolerances and limits; from the configuration if None.
    solver : str, default=None
        ``"builtin"`` or ``"external:<command>"``.

    Returns
    -------
    Solution
        The program with its solver result, whatever the status.
    """
    if paths is None:
        paths = generate_path_set(instance, tree)
    program = assemble(instance, paths, tree, program_options)
    result = solve(program, solver=solver, options=solve_options)
    logger.info(
        "Run of %r on %d scenario(s): %s",
        instance.name,
        len(tree.ids),
        result.status.value,
    )
    return Solution(program=program, paths=paths, tree=tree, result=result)
