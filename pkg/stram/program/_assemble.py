#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Assembly of the deterministic equivalent of the stochastic program."""
import logging
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from stram.diffusion import AdoptionBoundTable, adoption_bound_table
from stram.model import Instance
from stram.paths import PathSet
from stram.program._adoption import build_adoption_constraints
from stram.program._catalog import Row, VariableCatalog
from stram.program._context import ProgramContext, ProgramOptions
from stram.program._fleet import build_fleet_renewal_constraints
from stram.program._flow import build_flow_constraints
from stram.program._investment import build_investment_constraints
from stram.program._nonanticipativity import build_nonanticipativity
from stram.program._objective import build_objective
from stram.scenarios import ScenarioTree
from stram.utils._numbers import _write_json

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["StochasticProgram", "assemble", "write_program_stats"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StochasticProgram:
    """A minimization program with provenance-tagged rows.

    Parameters
    ----------
    catalog : VariableCatalog
        Columns with their domains.
    rows : tuple of Row
        Constraints in build order.
    objective : mapping
        Column to objective coefficient.
    scenario_costs : mapping
        Scenario id to the expression of its discounted cost.
    probabilities : mapping
        Scenario id to probability.
    options : ProgramOptions
        Options the program was built with.
    branch_year : int
        First year whose decisions depend on the scenario.
    """

    catalog: VariableCatalog
    rows: Tuple[Row, ...]
    objective: Mapping[int, float]
    scenario_costs: Mapping[str, Mapping[int, float]]
    probabilities: Mapping[str, float]
    options: ProgramOptions
    branch_year: int

    @property
    def n_columns(self) -> int:
        """Number of variables."""
        return len(self.catalog)

    @property
    def n_rows(self) -> int:
        """Number of constraints."""
        return len(self.rows)

    def objective_value(self, values: Sequence[float]) -> float:
        """Return the objective at `values`."""
        return sum(coef * float(values[c]) for c, coef in self.objective.items())

    def scenario_cost_values(self, values: Sequence[float]) -> Dict[str, float]:
        """Return every scenario's discounted cost at `values`."""
        return {
            s: sum(coef * float(values[c]) for c, coef in expression.items())
            for s, expression in self.scenario_costs.items()
        }

    def violations(
        self, values: Sequence[float], tol: float = 1e-6
    ) -> List[Tuple[Row, float]]:
        """Return rows violated by more than `tol` at `values`."""
        found = []
        for row in self.rows:
            amount = row.violation(values)
            if amount > tol:
                found.append((row, amount))
        return found

    def stats(self) -> Dict:
        """Return rows, columns, nonzeros and binaries per block.

        Examples
        --------
        >>> from stram.program import assemble
        >>> from stram.scenarios import generate_tree
        >>> from stram.paths import generate_path_set
        >>> from stram.utils._testing import make_toy_instance
        >>> instance = make_toy_instance(bidirectional=False)
        >>> tree = generate_tree([], 2023)
        >>> program = assemble(instance, generate_path_set(instance, tree), tree)
        >>> program.stats()["rows_by_tag"]["demand"]
        {'nonzeros': 1, 'rows': 1}
        """
        rows_by_tag: Dict[str, Dict[str, int]] = {}
        for row in self.rows:
            entry = rows_by_tag.setdefault(row.tag, {"rows": 0, "nonzeros": 0})
            entry["rows"] += 1
            entry["nonzeros"] += len(row.coefs)
        columns_by_block: Dict[str, Dict[str, int]] = {}
        for variable in self.catalog:
            entry = columns_by_block.setdefault(
                variable.block, {"columns": 0, "binaries": 0}
            )
            entry["columns"] += 1
            entry["binaries"] += int(variable.is_binary)
        return {
            "rows": self.n_rows,
            "columns": self.n_columns,
            "nonzeros": sum(e["nonzeros"] for e in rows_by_tag.values()),
            "binaries": len(self.catalog.binaries),
            "rows_by_tag": {k: dict(sorted(v.items())) for k, v in rows_by_tag.items()},
            "columns_by_block": {
                k: dict(sorted(v.items())) for k, v in columns_by_block.items()
            },
        }


def write_program_stats(program: StochasticProgram, file: Union[str, FilePath]) -> None:
    """Write :meth:`StochasticProgram.stats` as ``program_stats.json``."""
    _write_json(file, program.stats())


def assemble(
    instance: Instance,
    paths: PathSet,
    tree: ScenarioTree,
    options: Optional[ProgramOptions] = None,
    curves: Optional[AdoptionBoundTable] = None,
) -> StochasticProgram:
    """Assemble the mean-CVaR stochastic program of an instance.

    Parameters
    ----------
    instance : Instance
        The instance.
    paths : PathSet
        Admissible paths.
    tree : ScenarioTree
        Scenarios with probabilities and the branch year.
    options : ProgramOptions, default=None
        Risk weighting, static year and non-anticipativity mode. Defaults to
        ``ProgramOptions()``.
    curves : AdoptionBoundTable, default=None
        Adoption bounds; simulated from the instance if None.

    Returns
    -------
    StochasticProgram
        Flow, investment, fleet, adoption and non-anticipativity rows followed by
        the CVaR rows, with the objective and per-scenario cost expressions.

    Raises
    ------
    ProgramBuildError
        If some demand has no path or capacity, fleet or adoption data is missing.
    ValueError
        If `options` holds an invalid risk setting or static year.

    See Also
    --------
    stram.solver.solve : Solve the assembled program.
    """
    if options is None:
        options = ProgramOptions()
    if curves is None:
        curves = adoption_bound_table(instance, tree)
    context = ProgramContext(instance, paths, tree, curves, options)

    rows: List[Row] = []
    rows += build_flow_constraints(context)
    rows += build_investment_constraints(context)
    rows += build_fleet_renewal_constraints(context)
    rows += build_adoption_constraints(context)
    rows += build_nonanticipativity(context)
    objective, scenario_costs, cvar_rows = build_objective(context)
    rows += cvar_rows

    program = StochasticProgram(
        catalog=context.catalog,
        rows=tuple(rows),
        objective=objective,
        scenario_costs=scenario_costs,
        probabilities=dict(tree.probabilities),
        options=context.options,
        branch_year=tree.branch_year,
    )
    logger.info(
        "Assembled program with %d rows, %d columns (%d binary)",
        program.n_rows,
        program.n_columns,
        len(context.catalog.binaries),
    )
    return program
