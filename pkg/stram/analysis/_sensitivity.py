#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Carbon price sweeps and the static single-period comparison."""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import polars as pl
from joblib import Parallel, delayed

from stram._config import get_config
from stram.analysis._kpi import KpiReport, kpis
from stram.analysis._solution import Solution, run_model
from stram.model import Instance, operational_discount_factor
from stram.paths import PathSet, generate_path_set
from stram.program import ProgramOptions, mean_cvar
from stram.scenarios import ScenarioTree
from stram.solver import SolveOptions

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "SensitivityRun",
    "StaticComparison",
    "carbon_sensitivity",
    "sensitivity_frame",
    "static_run",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SensitivityRun:
    """Outcome of one carbon price factor.

    Parameters
    ----------
    factor : float
        Multiplier of every carbon price.
    solution : Solution
        The solved program.
    report : KpiReport or None
        Indicators, None if the solve returned no values.
    """

    factor: float
    solution: Solution
    report: Optional[KpiReport]

    @property
    def objective(self) -> float:
        """Objective of the run, inf without a solution."""
        return self.solution.objective


def _check_factors(factors: Sequence[float]) -> List[float]:
    checked = [float(f) for f in factors]
    if not checked:
        raise ValueError("`factors` must hold at least one value.")
    bad = [f for f in checked if not (math.isfinite(f) and f >= 0)]
    if bad:
        msg = "`factors` must be finite and nonnegative, "
        msg += f"but found {', '.join(str(f) for f in bad)}."
        raise ValueError(msg)
    return checked


def _sensitivity_leg(
    instance: Instance,
    factor: float,
    tree: ScenarioTree,
    paths: Optional[PathSet],
    program_options: ProgramOptions,
    solve_options: SolveOptions,
    solver: Optional[str],
) -> SensitivityRun:
    scaled = instance if factor == 1.0 else instance.with_carbon_factor(factor)
    if paths is None:
        paths = generate_path_set(scaled, tree, n_jobs=1)
    solution = run_model(scaled, tree, paths, program_options, solve_options, solver)
    report = kpis(solution, scaled) if solution.result.has_solution else None
    return SensitivityRun(factor=factor, solution=solution, report=report)


def carbon_sensitivity(
    instance: Instance,
    tree: ScenarioTree,
    factors: Sequence[float],
    paths: Optional[PathSet] = None,
    program_options: Optional[ProgramOptions] = None,
    solve_options: Optional[SolveOptions] = None,
    solver: Optional[str] = None,
    n_jobs: Optional[int] = None,
) -> Dict[float, SensitivityRun]:
    """Solve the instance with carbon prices scaled by each factor.

    Factor 1 runs the unchanged instance, so its outputs equal a base run.

    Parameters
    ----------
    instance : Instance
        The instance.
    tree : ScenarioTree
        Scenarios to plan for.
    factors : sequence of float
        Nonnegative carbon price multipliers.
    paths : PathSet, default=None
        Paths shared by every run; generated per factor from the scaled instance
        if None.
    program_options : ProgramOptions, default=None
        Risk weighting and non-anticipativity mode.
    solve_options : SolveOptions, default=None
        Gap, tolerances and limits; from the configuration if None.
    solver : str, default=None
        ``"builtin"`` or ``"external:<command>"``.
    n_jobs : int, default=None
        Parallel workers over factors; the configured value if None.

    Returns
    -------
    dict
        Factor to :class:`SensitivityRun`, in the order of `factors`.

    Raises
    ------
    ValueError
        If `factors` is empty or holds a negative or non-finite value.

    See Also
    --------
    sensitivity_frame : Emissions and objectives of all runs in one table.
    """
    checked = _check_factors(factors)
    n_jobs = get_config()["n_jobs"] if n_jobs is None else n_jobs
    if solve_options is None:
        solve_options = SolveOptions.from_config()
    program_options = (program_options or ProgramOptions()).resolved()
    unique = list(dict.fromkeys(checked))
    runs = Parallel(n_jobs=n_jobs)(
        delayed(_sensitivity_leg)(
            instance, factor, tree, paths, program_options, solve_options, solver
        )
        for factor in unique
    )
    for run in runs:
        logger.info(
            "Carbon factor %g: %s, objective %.6g",
            run.factor,
            run.solution.result.status.value,
            run.objective,
        )
    return {run.factor: run for run in runs}


def sensitivity_frame(runs: Dict[float, SensitivityRun]) -> pl.DataFrame:
    """Return emissions per factor, year and scenario with each run's objective.

    Examples
    --------
    >>> from stram.analysis import sensitivity_frame
    >>> sensitivity_frame({}).columns
    ['factor', 'status', 'objective', 'year', 'scenario', 'emissions_kt', 'relative']
    """
    frames = [
        pl.DataFrame(
            schema={
                "factor": pl.Float64,
                "status": pl.Utf8,
                "objective": pl.Float64,
                "year": pl.Int64,
                "scenario": pl.Utf8,
                "emissions_kt": pl.Float64,
                "relative": pl.Float64,
            }
        )
    ]
    for factor, run in runs.items():
        if run.report is None:
            continue
        frames.append(
            run.report.emissions.select(
                pl.lit(factor, dtype=pl.Float64).alias("factor"),
                pl.lit(run.solution.result.status.value).alias("status"),
                pl.lit(run.objective, dtype=pl.Float64).alias("objective"),
                "year",
                "scenario",
                "emissions_kt",
                "relative",
            )
        )
    return pl.concat(frames).sort(["factor", "scenario", "year"])


@dataclass(frozen=True)
class StaticComparison:
    """A static single-period run next to the dynamic run.

    Parameters
    ----------
    year : int
        Start year of the operated period.
    static : Solution
        Program with operations in `year` only.
    dynamic : Solution
        Program with operations in every period.
    static_report, dynamic_report : KpiReport
        Indicators of both runs.
    dynamic_restricted_objective : float
        Risk measure of the dynamic scenario costs counting operations in `year`
        and every investment; never below the static objective.
    """

    year: int
    static: Solution
    dynamic: Solution
    static_report: KpiReport
    dynamic_report: KpiReport
    dynamic_restricted_objective: float

    def mode_fuel(self) -> pl.DataFrame:
        """Return work and shares of both runs in `year`, side by side."""
        keys = ["year", "scenario", "mode", "fuel"]
        static = self.static_report.mode_fuel.rename(
            {"work_tkm": "static_work_tkm", "share": "static_share"}
        )
        dynamic = self.dynamic_report.mode_fuel.filter(
            pl.col("year") == self.year
        ).rename({"work_tkm": "dynamic_work_tkm", "share": "dynamic_share"})
        return static.join(dynamic, on=keys, how="left").sort(keys)


def _restricted_objective(
    dynamic: Solution, report: KpiReport, instance: Instance, year: int
) -> float:
    t = instance.time.period_index(year)
    factor = operational_discount_factor(instance.time, t)
    operating = dict(
        report.transport_costs.filter(pl.col("year") == year)
        .select("scenario", "total")
        .iter_rows()
    )
    invested = dict(report.scenario_costs.select("scenario", "investment").iter_rows())
    costs = {s: invested[s] + factor * operating[s] for s in dynamic.tree.ids}
    options = dynamic.program.options
    return mean_cvar(
        costs, dynamic.tree.probabilities, options.risk_aversion, options.cvar_level
    )


def static_run(
    instance: Instance,
    tree: ScenarioTree,
    year: int,
    paths: Optional[PathSet] = None,
    program_options: Optional[ProgramOptions] = None,
    solve_options: Optional[SolveOptions] = None,
    solver: Optional[str] = None,
    n_jobs: Optional[int] = None,
) -> StaticComparison:
    """Solve the static model of one period and the dynamic model side by side.

    Parameters
    ----------
    instance : Instance
        The instance.
    tree : ScenarioTree
        Scenarios to plan for.
    year : int
        Start year of the period to operate.
    paths : PathSet, default=None
        Admissible paths; generated for `tree` if None.
    program_options : ProgramOptions, default=None
        Risk weighting and non-anticipativity mode; its static year is replaced.
    solve_options : SolveOptions, default=None
        Gap, tolerances and limits; from the configuration if None.
    solver : str, default=None
        ``"builtin"`` or ``"external:<command>"``.
    n_jobs : int, default=None
        Parallel workers for the two solves; the configured value if None.

    Returns
    -------
    StaticComparison
        Both runs with their indicators.

    Raises
    ------
    ValueError
        If `year` is not a period start year.
    NoSolutionError
        If a run returns no solution.
    """
    instance.time.period_index(year)
    n_jobs = get_config()["n_jobs"] if n_jobs is None else n_jobs
    if solve_options is None:
        solve_options = SolveOptions.from_config()
    base = (program_options or ProgramOptions()).resolved()
    if paths is None:
        paths = generate_path_set(instance, tree)
    legs = [dataclasses.replace(base, static_year=y) for y in (year, None)]
    static, dynamic = Parallel(n_jobs=n_jobs)(
        delayed(run_model)(instance, tree, paths, options, solve_options, solver)
        for options in legs
    )
    static_report = kpis(static, instance)
    dynamic_report = kpis(dynamic, instance)
    restricted = _restricted_objective(dynamic, dynamic_report, instance, year)
    logger.info(
        "Static %d objective %.6g, dynamic %.6g (restricted %.6g)",
        year,
        static.objective,
        dynamic.objective,
        restricted,
    )
    return StaticComparison(
        year=year,
        static=static,
        dynamic=dynamic,
        static_report=static_report,
        dynamic_report=dynamic_report,
        dynamic_restricted_objective=restricted,
    )
