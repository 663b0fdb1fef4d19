#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Equality rows linking decisions of scenarios that share their history."""
from typing import Dict, List, Tuple

from stram.program._catalog import Row, make_row
from stram.program._context import ProgramContext
from stram.scenarios import information_partition
from stram.utils._iter import _chain_pairs

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["build_nonanticipativity"]


def build_nonanticipativity(context: ProgramContext) -> List[Row]:
    """Link copies of decisions made before scenarios can be told apart.

    With merged columns, scenarios sharing a history already share one column per
    decision and no row is built. With explicit copies, every decision of a year
    gets ``n - 1`` equality rows chaining the ``n`` scenarios of each block of the
    year's information partition.

    Parameters
    ----------
    context : ProgramContext
        Build state whose catalog holds every other variable.

    Returns
    -------
    list of Row
        The linking rows, empty in merged mode.
    """
    if context.merged:
        return []
    catalog = context.catalog
    copies: Dict[Tuple, Dict[str, int]] = {}
    for column, variable in enumerate(catalog):
        if variable.year is None or variable.scenario is None:
            continue
        key = (variable.block, variable.index, variable.year)
        copies.setdefault(key, {})[variable.scenario] = column

    rows: List[Row] = []
    partitions: Dict[int, Tuple[Tuple[str, ...], ...]] = {}
    for (block, index, year), by_scenario in copies.items():
        if year not in partitions:
            partitions[year] = information_partition(context.tree, year)
        for members in partitions[year]:
            present = [s for s in members if s in by_scenario]
            for first, second in _chain_pairs(present):
                terms = [(by_scenario[first], 1.0), (by_scenario[second], -1.0)]
                row = make_row(
                    "nonanticipativity",
                    (block, index, second),
                    year,
                    first,
                    terms,
                    "=",
                    0,
                )
                rows.append(row)
    return rows
