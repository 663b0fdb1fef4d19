#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram` is a strategic freight transport model.

It generates multimodal paths, bounds technology adoption with Bass diffusion,
builds a risk-averse two-stage stochastic program over fuel technology scenarios,
solves it and reports costs, emissions and the value of the stochastic solution.
"""
from typing import List

from stram._config import (
    config_context,
    get_config,
    get_default_config,
    reset_config,
    set_config,
)
from stram.model import (
    InstanceError,
    ModelFormatError,
    NoSolutionError,
    PathGenerationError,
    ProgramBuildError,
    StramError,
)

__version__: str = "0.1.0"

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "get_default_config",
    "get_config",
    "set_config",
    "reset_config",
    "config_context",
    "StramError",
    "InstanceError",
    "PathGenerationError",
    "ProgramBuildError",
    "ModelFormatError",
    "NoSolutionError",
]
