#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
""":mod:`stram.utils` includes helpers used throughout `stram`.

Sequence formatting for error messages and number rounding for serialized output.
"""
from typing import List

__author__: List[str] = ["stram-developers"]
__all__: List[str] = []
