#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Plot-ready CSV tables and the JSON summary of a solution."""
from pathlib import Path
from typing import Dict, List, Optional, Union

from stram.analysis._kpi import KpiReport
from stram.analysis._solution import Solution
from stram.diffusion import AdoptionBoundTable
from stram.utils._numbers import _round_frame, _write_json

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["solution_summary", "write_kpi_tables", "write_solution_json"]


def write_kpi_tables(
    report: KpiReport,
    directory: Union[str, Path],
    curves: Optional[AdoptionBoundTable] = None,
) -> Dict[str, Path]:
    """Write every indicator table as ``<name>.csv`` into `directory`.

    Parameters
    ----------
    report : KpiReport
        The tables to write.
    directory : str or Path
        Output directory, created if needed.
    curves : AdoptionBoundTable, default=None
        Adoption curves written as ``adoption_curves.csv`` if given.

    Returns
    -------
    dict
        Table name to the written file.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    tables = report.tables()
    if curves is not None:
        tables["adoption_curves"] = curves.to_frame()
    written = {}
    for name, frame in tables.items():
        file = directory / f"{name}.csv"
        _round_frame(frame).write_csv(file)
        written[name] = file
    return written


def solution_summary(solution: Solution, include_zero: bool = False) -> Dict:
    """Return the status, objective and variable values of a solution.

    Parameters
    ----------
    solution : Solution
        The solved program.
    include_zero : bool, default=False
        Whether variables at 0 are listed.

    Returns
    -------
    dict
        ``status``, ``objective``, ``bound``, ``gap``, solver counters,
        ``scenario_costs`` and ``variables`` keyed by readable name.
    """
    result = solution.result
    summary = {
        "status": result.status.value,
        "objective": result.objective,
        "bound": result.bound,
        "gap": result.gap,
        "iterations": result.iterations,
        "nodes": result.nodes,
        "message": result.message,
        "scenario_costs": {},
        "variables": {},
    }
    if result.has_solution:
        summary["scenario_costs"] = dict(solution.scenario_costs())
        summary["variables"] = {
            variable.name: float(value)
            for variable, value in zip(solution.program.catalog, result.values)
            if include_zero or value != 0.0
        }
    return summary


def write_solution_json(solution: Solution, file: Union[str, Path]) -> None:
    """Write :func:`solution_summary` as ``solution.json``."""
    _write_json(file, solution_summary(solution))
