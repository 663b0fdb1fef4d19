#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.program` assembles the mean-CVaR stochastic freight program."""
from typing import List

from stram.program._adoption import build_adoption_constraints
from stram.program._assemble import StochasticProgram, assemble, write_program_stats
from stram.program._catalog import (
    BLOCKS,
    INVESTMENT_BLOCKS,
    Row,
    Variable,
    VariableCatalog,
    VariableDomain,
    make_row,
)
from stram.program._context import ProgramContext, ProgramOptions
from stram.program._fleet import build_fleet_renewal_constraints
from stram.program._flow import build_flow_constraints
from stram.program._investment import build_investment_constraints, upgrade_big_m
from stram.program._nonanticipativity import build_nonanticipativity
from stram.program._objective import (
    build_objective,
    conditional_value_at_risk,
    investment_cost,
    mean_cvar,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "BLOCKS",
    "INVESTMENT_BLOCKS",
    "ProgramContext",
    "ProgramOptions",
    "Row",
    "StochasticProgram",
    "Variable",
    "VariableCatalog",
    "VariableDomain",
    "assemble",
    "build_adoption_constraints",
    "build_fleet_renewal_constraints",
    "build_flow_constraints",
    "build_investment_constraints",
    "build_nonanticipativity",
    "build_objective",
    "conditional_value_at_risk",
    "investment_cost",
    "make_row",
    "mean_cvar",
    "upgrade_big_m",
    "write_program_stats",
]
