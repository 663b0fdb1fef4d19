#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.diffusion` bounds technology adoption with Bass diffusion."""
from typing import List

from stram.diffusion._bass import (
    AdoptionBoundTable,
    AdoptionCurve,
    adoption_bound_table,
    rate_coefficients,
    simulate_bass,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "AdoptionBoundTable",
    "AdoptionCurve",
    "adoption_bound_table",
    "rate_coefficients",
    "simulate_bass",
]
