#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Tests of stram.diffusion functionality."""
from typing import List

__all__: List[str] = []
__author__: List[str] = ["stram-developers"]
