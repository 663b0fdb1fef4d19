#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.datasets` ships small instances for examples and tests."""
from typing import List

from stram.datasets._load import desk_instance_path, load_desk_instance

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["desk_instance_path", "load_desk_instance"]
