#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.solver` solves assembled programs.

The built-in solver runs a bounded revised simplex on LP relaxations inside a
best-first branch-and-bound over the binary columns. Larger programs can be
exported as MPS and handed to an external solver.
"""
from typing import List

from stram.solver._branch import solve_milp
from stram.solver._external import solve_external
from stram.solver._lp import LinearProgram
from stram.solver._mps import (
    export_model,
    import_solution,
    read_mps,
    sidecar_path,
    write_mps,
    write_solution,
)
from stram.solver._result import SolveOptions, SolveResult, SolveStatus
from stram.solver._simplex import solve_lp
from stram.solver._solve import parse_solver, solve

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "LinearProgram",
    "SolveOptions",
    "SolveResult",
    "SolveStatus",
    "export_model",
    "import_solution",
    "parse_solver",
    "read_mps",
    "sidecar_path",
    "solve",
    "solve_external",
    "solve_lp",
    "solve_milp",
    "write_mps",
    "write_solution",
]
