#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.cli` is the ``stram`` command line.

Commands are ``validate``, ``solve``, ``vss``, ``sensitivity``, ``static``,
``paths`` and ``export-mps``. Exit codes are 0 on success, 2 on invalid input,
3 when the solver stopped at a limit and 4 when the program has no solution.
"""
from typing import List

from stram.cli._app import COMMANDS, LOG_FORMAT, build_parser, main
from stram.cli._commands import (
    EXIT_INFEASIBLE,
    EXIT_INPUT,
    EXIT_LIMIT,
    EXIT_OK,
    exit_code_of,
    load_inputs,
    path_summary,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "COMMANDS",
    "EXIT_INFEASIBLE",
    "EXIT_INPUT",
    "EXIT_LIMIT",
    "EXIT_OK",
    "LOG_FORMAT",
    "build_parser",
    "exit_code_of",
    "load_inputs",
    "main",
    "path_summary",
]
