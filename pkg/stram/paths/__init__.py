#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.paths` generates admissible multimodal paths."""
from typing import List

from stram.paths._dijkstra import (
    compose_mode_sequence,
    mode_sequences,
    unimodal_cheapest,
)
from stram.paths._generate import (
    generate_path_set,
    path_cost,
    path_transfer_cost,
    reference_fuel,
)
from stram.paths._path import Path, PathSet, read_paths, write_paths

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "Path",
    "PathSet",
    "compose_mode_sequence",
    "generate_path_set",
    "mode_sequences",
    "path_cost",
    "path_transfer_cost",
    "read_paths",
    "reference_fuel",
    "unimodal_cheapest",
    "write_paths",
]
