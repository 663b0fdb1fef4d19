#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Demand, arc-path and vehicle balance constraints."""
import logging
from typing import Dict, List, Tuple

from stram.model import ArcKey, ProgramBuildError
from stram.program._catalog import Row, make_row
from stram.program._context import ProgramContext

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["build_flow_constraints", "arc_products"]

logger = logging.getLogger(__name__)


def arc_products(context: ProgramContext) -> Dict[ArcKey, Tuple[str, ...]]:
    """Return the products that some path through each arc carries."""
    paths = context.paths
    products_by_od: Dict[Tuple[str, str], List[str]] = {}
    for origin, destination, product in context.instance.demand.od_products:
        products_by_od.setdefault((origin, destination), []).append(product)
    carried: Dict[ArcKey, set] = {}
    for path in paths:
        for product in products_by_od.get(path.od, ()):
            for arc in path.arcs:
                carried.setdefault(arc, set()).add(product)
    return {arc: tuple(sorted(carried[arc])) for arc in sorted(carried)}


def _demand_rows(context: ProgramContext, t: int, scenario: str) -> List[Row]:
    instance, paths = context.instance, context.paths
    year = context.time.period_years[t]
    rows = []
    for origin, destination, product in instance.demand.od_products:
        path_ids = paths.index_by_od.get((origin, destination), ())
        if not path_ids:
            msg = f"No path serves demand from {origin!r} to {destination!r}."
            raise ProgramBuildError(msg)
        terms = [
            (context.var("h", (k, product), year, scenario), 1.0) for k in path_ids
        ]
        amount = instance.demand.get(origin, destination, product, year)
        row = make_row(
            "demand", (origin, destination, product), year, scenario, terms, "=", amount
        )
        rows.append(row)
    return rows


def _arc_path_rows(
    context: ProgramContext,
    t: int,
    scenario: str,
    carried: Dict[ArcKey, Tuple[str, ...]],
) -> List[Row]:
    instance, paths = context.instance, context.paths
    year = context.time.period_years[t]
    rows = []
    for arc_key, products in carried.items():
        fuels = sorted(instance.arc_by_key[arc_key].allowed_fuels)
        for product in products:
            terms = [
                (context.var("x", (arc_key, fuel, product), year, scenario), 1.0)
                for fuel in fuels
            ]
            terms += [
                (context.find("h", (k, product), year, scenario), -1.0)
                for k in paths.index_by_arc[arc_key]
            ]
            index = (arc_key, product)
            row = make_row("arc_path", index, year, scenario, terms, "=", 0)
            if row is not None:
                rows.append(row)
    return rows


def _empty_path_rows(context: ProgramContext, t: int, scenario: str) -> List[Row]:
    instance, paths = context.instance, context.paths
    year = context.time.period_years[t]
    unimodal = set(paths.unimodal)
    rows = []
    for arc_key, path_ids in paths.index_by_arc.items():
        empty_ids = [k for k in path_ids if k in unimodal]
        if not empty_ids:
            continue
        fuels = sorted(instance.arc_by_key[arc_key].allowed_fuels)
        for vehicle in instance.vehicle_types_of_mode(arc_key[2]):
            terms = [
                (context.var("b", (arc_key, fuel, vehicle), year, scenario), 1.0)
                for fuel in fuels
            ]
            terms += [
                (context.var("h_empty", (k, vehicle), year, scenario), -1.0)
                for k in empty_ids
            ]
            row = make_row(
                "empty_path", (arc_key, vehicle), year, scenario, terms, "=", 0
            )
            rows.append(row)
    return rows


def _vehicle_balance_rows(context: ProgramContext, t: int, scenario: str) -> List[Row]:
    instance = context.instance
    year = context.time.period_years[t]
    incoming: Dict[Tuple[str, str], List[ArcKey]] = {}
    outgoing: Dict[Tuple[str, str], List[ArcKey]] = {}
    for arc in instance.arcs:
        incoming.setdefault((arc.destination, arc.mode), []).append(arc.key)
        outgoing.setdefault((arc.origin, arc.mode), []).append(arc.key)

    rows = []
    for node, mode in sorted(set(incoming) | set(outgoing)):
        arcs_in = incoming.get((node, mode), [])
        arcs_out = outgoing.get((node, mode), [])
        for fuel in instance.fuels_of_mode(mode):
            for vehicle_id in instance.vehicle_types_of_mode(mode):
                products = sorted(instance.vehicle_types[vehicle_id].carryable_products)
                terms = []
                for product in products:
                    terms += [
                        (context.find("x", (a, fuel, product), year, scenario), 1.0)
                        for a in arcs_in
                    ]
                    terms += [
                        (context.find("x", (a, fuel, product), year, scenario), -1.0)
                        for a in arcs_out
                    ]
                terms += [
                    (context.find("b", (a, fuel, vehicle_id), year, scenario), 1.0)
                    for a in arcs_in
                ]
                terms += [
                    (context.find("b", (a, fuel, vehicle_id), year, scenario), -1.0)
                    for a in arcs_out
                ]
                index = (node, mode, fuel, vehicle_id)
                row = make_row("vehicle_balance", index, year, scenario, terms, "=", 0)
                if row is not None:
                    rows.append(row)
    return rows


def build_flow_constraints(context: ProgramContext) -> List[Row]:
    """Build demand, arc-path, empty-path and vehicle balance rows.

    Every demanded (origin, destination, product) is met by path flows ``h``.
    Arc flows ``x`` summed over fuels equal the path flows through the arc, and
    empty flows ``b`` equal the empty path flows ``h_empty`` on unimodal paths.
    At every node, mode, fuel and vehicle type, loaded vehicles arriving minus
    leaving are balanced by empty vehicles leaving minus arriving.

    Parameters
    ----------
    context : ProgramContext
        Build state; variables are added to its catalog.

    Returns
    -------
    list of Row
        Rows for every operational period and scenario.

    Raises
    ------
    ProgramBuildError
        If some demand has no path.
    """
    carried = arc_products(context)
    rows: List[Row] = []
    for t in context.operational_periods:
        year = context.time.period_years[t]
        for scenario in context.scenarios_for(year):
            rows += _demand_rows(context, t, scenario)
            rows += _arc_path_rows(context, t, scenario, carried)
            rows += _empty_path_rows(context, t, scenario)
            rows += _vehicle_balance_rows(context, t, scenario)
    logger.debug("Built %d flow rows", len(rows))
    return rows
