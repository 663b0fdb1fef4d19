#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.scenarios` builds two-stage scenario trees."""
from typing import List

from stram.scenarios._tree import (
    BASE_SCENARIO_ID,
    DeviationMultipliers,
    Deviations,
    ScenarioSpec,
    ScenarioState,
    ScenarioTree,
    apply_deviations,
    generate_tree,
    information_partition,
    load_scenario_tree,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "BASE_SCENARIO_ID",
    "DeviationMultipliers",
    "Deviations",
    "ScenarioSpec",
    "ScenarioState",
    "ScenarioTree",
    "apply_deviations",
    "generate_tree",
    "information_partition",
    "load_scenario_tree",
]
