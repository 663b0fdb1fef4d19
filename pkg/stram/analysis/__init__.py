#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.analysis` turns solutions into reports.

It computes cost, mode-fuel and emission indicators with their dispersion across
scenarios, the value of the stochastic solution, carbon price sweeps and the
static single-period comparison, and writes them as CSV and JSON.
"""
from typing import List

from stram.analysis._export import (
    solution_summary,
    write_kpi_tables,
    write_solution_json,
)
from stram.analysis._kpi import (
    DEFAULT_EMISSION_TARGETS,
    INVESTMENT_CATEGORIES,
    KpiReport,
    emission_targets,
    emissions_report,
    kpis,
)
from stram.analysis._sensitivity import (
    SensitivityRun,
    StaticComparison,
    carbon_sensitivity,
    sensitivity_frame,
    static_run,
)
from stram.analysis._solution import Solution, run_model
from stram.analysis._vss import (
    VssReport,
    WaitAndSee,
    compute_eev,
    compute_wait_and_see,
    first_stage_values,
    value_of_stochastic_solution,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "DEFAULT_EMISSION_TARGETS",
    "INVESTMENT_CATEGORIES",
    "KpiReport",
    "SensitivityRun",
    "Solution",
    "StaticComparison",
    "VssReport",
    "WaitAndSee",
    "carbon_sensitivity",
    "compute_eev",
    "compute_wait_and_see",
    "emission_targets",
    "emissions_report",
    "first_stage_values",
    "kpis",
    "run_model",
    "sensitivity_frame",
    "solution_summary",
    "static_run",
    "value_of_stochastic_solution",
    "write_kpi_tables",
    "write_solution_json",
]
