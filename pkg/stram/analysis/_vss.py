#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Value of the stochastic solution and the wait-and-see bound.

The expected value (EV) problem plans for the all-base scenario only. Its
first-stage decisions are then fixed inside the stochastic program, whose optimum
under that restriction is the expected result of the EV solution (EEV). The value
of the stochastic solution is ``EEV - SP``.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from joblib import Parallel, delayed

from stram._config import get_config
from stram.analysis._kpi import kpis
from stram.analysis._solution import Solution, run_model
from stram.model import Instance, NoSolutionError
from stram.paths import PathSet
from stram.program import ProgramOptions, mean_cvar
from stram.scenarios import ScenarioTree
from stram.solver import SolveOptions, solve
from stram.utils._numbers import _write_json

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "VssReport",
    "WaitAndSee",
    "compute_eev",
    "compute_wait_and_see",
    "first_stage_values",
    "value_of_stochastic_solution",
]

logger = logging.getLogger(__name__)


def value_of_stochastic_solution(sp_objective: float, eev_objective: float) -> float:
    """Return the relative value of the stochastic solution ``(EEV - SP) / EEV``.

    Parameters
    ----------
    sp_objective : float
        Optimal objective of the stochastic program.
    eev_objective : float
        Objective of the stochastic program with the EV first stage fixed; inf if
        that restriction is infeasible.

    Returns
    -------
    float
        The relative VSS, 1.0 when `eev_objective` is infinite and 0.0 when both
        objectives are 0.

    Examples
    --------
    >>> from stram.analysis import value_of_stochastic_solution
    >>> round(value_of_stochastic_solution(615.65, 655.15), 4)
    0.0603
    >>> value_of_stochastic_solution(10.0, float("inf"))
    1.0
    """
    if math.isinf(eev_objective):
        return 1.0
    if eev_objective == 0.0:
        return 0.0
    return (eev_objective - sp_objective) / eev_objective


@dataclass(frozen=True)
class VssReport:
    """Objectives and emissions of the SP, EV and EEV solves.

    Parameters
    ----------
    sp_objective, ev_objective, eev_objective : float
        Objectives; ``eev_objective`` is inf if the EV first stage is infeasible
        in the stochastic program.
    vss_absolute : float
        ``eev_objective - sp_objective``.
    vss_relative : float
        ``vss_absolute / eev_objective``.
    sp_emissions_kt, eev_emissions_kt : float
        Expected emissions over the horizon; nan without an EEV solution.
    fixed_columns : int
        Columns of the stochastic program fixed to EV values.
    fixing : {"all", "investments"}
        Which first-stage decisions were fixed.
    diagnosis : str
        Why the EEV solve has no value, empty otherwise.
    statuses : dict
        Solver status of the ``"sp"``, ``"ev"`` and ``"eev"`` solves.
    """

    sp_objective: float
    ev_objective: float
    eev_objective: float
    vss_absolute: float
    vss_relative: float
    sp_emissions_kt: float
    eev_emissions_kt: float
    fixed_columns: int
    fixing: str
    diagnosis: str = ""
    statuses: Dict[str, str] = field(default_factory=dict)

    @property
    def emissions_delta_kt(self) -> float:
        """``eev_emissions_kt - sp_emissions_kt``."""
        return self.eev_emissions_kt - self.sp_emissions_kt

    @property
    def emissions_delta_relative(self) -> float:
        """Emission delta relative to the EEV emissions."""
        if not self.eev_emissions_kt:
            return 0.0 if self.emissions_delta_kt == 0.0 else math.nan
        return self.emissions_delta_kt / self.eev_emissions_kt

    def to_dict(self) -> Dict:
        """Return the report as a JSON-ready mapping."""
        return {
            "sp_objective": self.sp_objective,
            "ev_objective": self.ev_objective,
            "eev_objective": self.eev_objective,
            "vss_absolute": self.vss_absolute,
            "vss_relative": self.vss_relative,
            "sp_emissions_kt": self.sp_emissions_kt,
            "eev_emissions_kt": self.eev_emissions_kt,
            "emissions_delta_kt": self.emissions_delta_kt,
            "emissions_delta_relative": self.emissions_delta_relative,
            "fixed_columns": self.fixed_columns,
            "fixing": self.fixing,
            "diagnosis": self.diagnosis,
            "statuses": dict(self.statuses),
        }

    def write_json(self, file) -> None:
        """Write :meth:`to_dict` as ``vss.json``."""
        _write_json(file, self.to_dict())


def first_stage_values(
    ev: Solution, sp: Solution, fixing: str = "all"
) -> Dict[int, float]:
    """Map first-stage columns of `sp` to the values of the matching `ev` columns.

    Columns are matched on block, index and year. Every copy of a first-stage
    decision in `sp` receives the value of the single EV column.

    Parameters
    ----------
    ev : Solution
        Solved expected value problem.
    sp : Solution
        The stochastic program to fix; its values are not used.
    fixing : {"all", "investments"}, default="all"
        Fix every variable of years before the branch year, or investments only.

    Returns
    -------
    dict
        Column of `sp` to value.
    """
    if fixing not in ("all", "investments"):
        msg = f"`fixing` must be 'all' or 'investments', but found {fixing!r}."
        raise ValueError(msg)
    ev.require_values()
    branch_year = sp.program.branch_year
    ev_values: Dict[Tuple, float] = {}
    for column, variable in enumerate(ev.program.catalog):
        if variable.year is not None and variable.year < branch_year:
            key = (variable.block, variable.index, variable.year)
            ev_values[key] = float(ev.result.values[column])
    fixed: Dict[int, float] = {}
    missing = 0
    for column, variable in enumerate(sp.program.catalog):
        if variable.year is None or variable.year >= branch_year:
            continue
        if fixing == "investments" and not variable.is_investment:
            continue
        key = (variable.block, variable.index, variable.year)
        if key in ev_values:
            fixed[column] = ev_values[key]
        else:
            missing += 1
    if missing:
        logger.debug("%d first-stage columns have no EV counterpart", missing)
    return fixed


def compute_eev(
    instance: Instance,
    paths: PathSet,
    tree: ScenarioTree,
    program_options: Optional[ProgramOptions] = None,
    solve_options: Optional[SolveOptions] = None,
    solver: Optional[str] = None,
    fixing: Optional[str] = None,
    n_jobs: Optional[int] = None,
) -> Tuple[VssReport, Dict[str, Solution]]:
    """Solve SP, EV and EEV and compare them.

    The SP and EV solves are independent and run in parallel. The EEV solve
    fixes the first-stage columns of the stochastic program to the EV values.
    With a single scenario the EV problem is the stochastic program itself and
    the EEV equals the SP.

    Parameters
    ----------
    instance : Instance
        The instance.
    paths : PathSet
        Admissible paths, shared by every solve.
    tree : ScenarioTree
        Scenarios of the stochastic program; must hold the all-base scenario.
    program_options : ProgramOptions, default=None
        Risk weighting and non-anticipativity mode of every program.
    solve_options : SolveOptions, default=None
        Gap, tolerances and limits; from the configuration if None.
    solver : str, default=None
        ``"builtin"`` or ``"external:<command>"``.
    fixing : {"all", "investments"}, default=None
        First-stage decisions to fix; the configured ``first_stage_fixing`` if
        None.
    n_jobs : int, default=None
        Parallel workers; the configured value if None.

    Returns
    -------
    report : VssReport
        Objectives, VSS and emission deltas.
    solutions : dict
        The ``"sp"``, ``"ev"`` and ``"eev"`` solutions.

    Raises
    ------
    NoSolutionError
        If the SP or EV solve returns no solution.
    """
    config = get_config()
    fixing = config["first_stage_fixing"] if fixing is None else fixing
    n_jobs = config["n_jobs"] if n_jobs is None else n_jobs
    if solve_options is None:
        solve_options = SolveOptions.from_config()
    program_options = (program_options or ProgramOptions()).resolved()
    single = len(tree.ids) == 1
    trees = [tree] if single else [tree, tree.base_only()]
    legs = Parallel(n_jobs=n_jobs)(
        delayed(run_model)(instance, t, paths, program_options, solve_options, solver)
        for t in trees
    )
    sp = legs[0]
    ev = sp if single else legs[1]
    for name, leg in (("SP", sp), ("EV", ev)):
        if not leg.result.has_solution:
            msg = f"The {name} solve returned no solution, "
            msg += f"status was {leg.result.status.value!r}."
            raise NoSolutionError(msg, status=leg.result.status.value)

    sp_report = kpis(sp, instance)
    sp_emissions = sp_report.expected_total_emissions(instance)
    statuses = {"sp": sp.result.status.value, "ev": ev.result.status.value}
    if single:
        eev, fixed, diagnosis = sp, {}, ""
        eev_objective, eev_emissions = sp.objective, sp_emissions
    else:
        fixed = first_stage_values(ev, sp, fixing)
        result = solve(sp.program, solver=solver, options=solve_options, fixed=fixed)
        eev = Solution(program=sp.program, paths=paths, tree=tree, result=result)
        if result.has_solution:
            diagnosis = ""
            eev_objective = result.objective
            eev_emissions = kpis(eev, instance).expected_total_emissions(instance)
        else:
            diagnosis = "EV first stage fixed in the stochastic program: "
            diagnosis += result.status.value
            if result.message:
                diagnosis += f" ({result.message})"
            logger.warning("EEV solve has no solution: %s", diagnosis)
            eev_objective, eev_emissions = math.inf, math.nan
    statuses["eev"] = eev.result.status.value

    report = VssReport(
        sp_objective=sp.objective,
        ev_objective=ev.objective,
        eev_objective=eev_objective,
        vss_absolute=eev_objective - sp.objective,
        vss_relative=value_of_stochastic_solution(sp.objective, eev_objective),
        sp_emissions_kt=sp_emissions,
        eev_emissions_kt=eev_emissions,
        fixed_columns=len(fixed),
        fixing=fixing,
        diagnosis=diagnosis,
        statuses=statuses,
    )
    tolerance = 2 * solve_options.mip_gap * max(abs(eev_objective), 1.0)
    if report.vss_absolute < -tolerance:
        logger.warning(
            "Negative VSS %.6g beyond the gap allowance", report.vss_absolute
        )
    logger.info(
        "SP %.6g, EV %.6g, EEV %.6g, VSS %.4g%%",
        report.sp_objective,
        report.ev_objective,
        report.eev_objective,
        100 * report.vss_relative,
    )
    return report, {"sp": sp, "ev": ev, "eev": eev}


@dataclass(frozen=True)
class WaitAndSee:
    """Objectives with perfect information.

    Parameters
    ----------
    objective : float
        Mean-CVaR of the per-scenario optimal costs, a lower bound of the SP.
    scenario_objectives : dict
        Scenario id to its optimal cost when planned for alone.
    """

    objective: float
    scenario_objectives: Dict[str, float]

    def to_dict(self) -> Dict:
        """Return the bound as a JSON-ready mapping."""
        return {
            "objective": self.objective,
            "scenario_objectives": dict(self.scenario_objectives),
        }


def compute_wait_and_see(
    instance: Instance,
    paths: PathSet,
    tree: ScenarioTree,
    program_options: Optional[ProgramOptions] = None,
    solve_options: Optional[SolveOptions] = None,
    solver: Optional[str] = None,
    n_jobs: Optional[int] = None,
) -> WaitAndSee:
    """Solve every scenario on its own and combine the optima.

    Parameters
    ----------
    instance : Instance
        The instance.
    paths : PathSet
        Admissible paths.
    tree : ScenarioTree
        Scenarios with probabilities.
    program_options : ProgramOptions, default=None
        Risk weighting used to combine the scenario optima.
    solve_options : SolveOptions, default=None
        Gap, tolerances and limits; from the configuration if None.
    solver : str, default=None
        ``"builtin"`` or ``"external:<command>"``.
    n_jobs : int, default=None
        Parallel workers over scenarios; the configured value if None.

    Returns
    -------
    WaitAndSee
        The bound and the per-scenario optima.

    Raises
    ------
    NoSolutionError
        If a scenario solve returns no solution.
    """
    n_jobs = get_config()["n_jobs"] if n_jobs is None else n_jobs
    if solve_options is None:
        solve_options = SolveOptions.from_config()
    program_options = (program_options or ProgramOptions()).resolved()
    solutions = Parallel(n_jobs=n_jobs)(
        delayed(run_model)(
            instance, tree.single(s), paths, program_options, solve_options, solver
        )
        for s in tree.ids
    )
    optima = {}
    for scenario, solution in zip(tree.ids, solutions):
        if not solution.result.has_solution:
            msg = f"Scenario {scenario!r} has no solution on its own, "
            msg += f"status was {solution.result.status.value!r}."
            raise NoSolutionError(msg, status=solution.result.status.value)
        optima[scenario] = solution.objective
    objective = mean_cvar(
        optima,
        tree.probabilities,
        program_options.risk_aversion,
        program_options.cvar_level,
    )
    logger.info("Wait-and-see bound %.6g", objective)
    return WaitAndSee(objective=objective, scenario_objectives=optima)
