#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Edge, terminal, charging and upgrade investment constraints.

Investments are decided at the start of a period and become available
``lead_periods`` periods later. Each binary investment is made at most once per
scenario. Capacity rows exist only in operational periods.
"""
import logging
from typing import List, Optional

from stram.model import Edge, ProgramBuildError
from stram.program._catalog import Row, make_row
from stram.program._context import ProgramContext

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["build_investment_constraints", "upgrade_big_m"]

logger = logging.getLogger(__name__)


def upgrade_big_m(context: ProgramContext) -> float:
    """Return the bound on fuel flow over an edge that is not yet upgraded.

    Total demand over all period years times the largest path arc count bounds the
    summed arc flow of any edge, so an enabled upgrade never restricts flows.
    """
    longest = max((len(path.arcs) for path in context.paths), default=1)
    return max(context.instance.demand.total(), 1.0) * longest


def _edge_load_terms(context, edge: Edge, fuel: str, year: int, scenario: str):
    instance = context.instance
    terms = []
    for arc_key in edge.arcs:
        for product in instance.products:
            column = context.find("x", (arc_key, fuel, product), year, scenario)
            terms.append((column, 1.0))
        for vehicle in instance.vehicle_types_of_mode(edge.mode):
            column = context.find("b", (arc_key, fuel, vehicle), year, scenario)
            terms.append((column, 1.0))
    return terms


def _once_rows(
    context: ProgramContext, tag: str, block: str, index: tuple
) -> List[Row]:
    """Rows making an investment at most once over the horizon, per scenario."""
    time = context.time
    last_year = time.period_years[-1]
    rows = []
    for scenario in context.scenarios_for(last_year):
        terms = [
            (context.var(block, index, time.period_years[t], scenario), 1.0)
            for t in time.periods
        ]
        rows.append(make_row(tag, index, None, scenario, terms, "<=", 1.0))
    return rows


def _investment_terms(
    context: ProgramContext,
    block: str,
    index: tuple,
    t: int,
    lead: int,
    scenario: str,
    coef: float,
):
    years = context.time.period_years
    return [
        (context.var(block, index, years[p], scenario), coef)
        for p in context.lead_periods(t, lead)
    ]


def _rail_capacity_rows(context: ProgramContext) -> List[Row]:
    instance, time = context.instance, context.time
    rows: List[Row] = []
    for edge_key, edge in sorted(instance.edges.items()):
        if edge.mode != "rail":
            continue
        if edge.base_capacity is None:
            if edge.expansion is not None:
                msg = f"Rail edge {edge_key} has an expansion option but no base "
                msg += "capacity."
                raise ProgramBuildError(msg)
            continue
        expansion = edge.expansion
        if expansion is not None:
            rows += _once_rows(context, "edge_once", "epsilon", (edge_key,))
        for t in context.operational_periods:
            year = time.period_years[t]
            for scenario in context.scenarios_for(year):
                for arc_key in edge.arcs:
                    terms = []
                    for fuel in sorted(instance.arc_by_key[arc_key].allowed_fuels):
                        for product in instance.products:
                            column = context.find(
                                "x", (arc_key, fuel, product), year, scenario
                            )
                            terms.append((column, 1.0))
                        for vehicle in instance.vehicle_types_of_mode("rail"):
                            column = context.find(
                                "b", (arc_key, fuel, vehicle), year, scenario
                            )
                            terms.append((column, 1.0))
                    if not any(column is not None for column, _ in terms):
                        continue
                    if expansion is not None:
                        terms += _investment_terms(
                            context,
                            "epsilon",
                            (edge_key,),
                            t,
                            expansion.lead_periods,
                            scenario,
                            -0.5 * expansion.capacity_gain,
                        )
                    row = make_row(
                        "rail_capacity",
                        (arc_key,),
                        year,
                        scenario,
                        terms,
                        "<=",
                        0.5 * edge.base_capacity,
                    )
                    rows.append(row)
    return rows


def _terminal_capacity_rows(context: ProgramContext) -> List[Row]:
    instance, paths, time = context.instance, context.paths, context.time
    rows: List[Row] = []
    for key, investment in sorted(instance.node_investments.items()):
        node, class_id, mode = key
        if mode not in ("rail", "sea"):
            continue
        terminal = instance.terminal_classes.get(class_id)
        if terminal is None:
            raise ProgramBuildError(f"Unknown terminal class {class_id!r} at {node!r}.")
        expandable = investment.capacity_gain > 0
        if expandable:
            rows += _once_rows(context, "terminal_once", "nu", key)
        path_ids = paths.terminal_usage.get((node, mode), ())
        for t in context.operational_periods:
            year = time.period_years[t]
            for scenario in context.scenarios_for(year):
                terms = [
                    (context.find("h", (k, product), year, scenario), 1.0)
                    for k in path_ids
                    for product in sorted(terminal.products)
                ]
                if not any(column is not None for column, _ in terms):
                    continue
                if expandable:
                    terms += _investment_terms(
                        context,
                        "nu",
                        key,
                        t,
                        investment.lead_periods,
                        scenario,
                        -investment.capacity_gain,
                    )
                row = make_row(
                    "terminal_capacity",
                    key,
                    year,
                    scenario,
                    terms,
                    "<=",
                    investment.base_capacity,
                )
                rows.append(row)
    return rows


def _charging_rows(context: ProgramContext) -> List[Row]:
    instance, time = context.instance, context.time
    rows: List[Row] = []
    for edge_key, edge in sorted(instance.edges.items()):
        for option in edge.charging:
            index = (edge_key, option.fuel)
            for t in context.operational_periods:
                year = time.period_years[t]
                for scenario in context.scenarios_for(year):
                    terms = _edge_load_terms(context, edge, option.fuel, year, scenario)
                    if not any(column is not None for column, _ in terms):
                        continue
                    terms += _investment_terms(
                        context, "y", index, t, option.lead_periods, scenario, -1.0
                    )
                    row = make_row(
                        "charging_capacity",
                        index,
                        year,
                        scenario,
                        terms,
                        "<=",
                        option.base_capacity,
                    )
                    rows.append(row)
            # investment columns span every period
            for t in time.periods:
                for scenario in context.scenarios_for(time.period_years[t]):
                    context.var("y", index, time.period_years[t], scenario)
    return rows


def _upgrade_rows(context: ProgramContext, big_m: Optional[float] = None) -> List[Row]:
    instance, time = context.instance, context.time
    if big_m is None:
        big_m = upgrade_big_m(context)
    rows: List[Row] = []
    for edge_key, edge in sorted(instance.edges.items()):
        for option in edge.upgrades:
            index = (edge_key, option.fuel)
            rows += _once_rows(context, "upgrade_once", "upsilon", index)
            for t in context.operational_periods:
                year = time.period_years[t]
                for scenario in context.scenarios_for(year):
                    terms = [
                        (context.find("x", (a, option.fuel, p), year, scenario), 1.0)
                        for a in edge.arcs
                        for p in instance.products
                    ]
                    if not any(column is not None for column, _ in terms):
                        continue
                    terms += _investment_terms(
                        context,
                        "upsilon",
                        index,
                        t,
                        option.lead_periods,
                        scenario,
                        -big_m,
                    )
                    row = make_row(
                        "upgrade_enable", index, year, scenario, terms, "<=", 0.0
                    )
                    rows.append(row)
    return rows


def build_investment_constraints(context: ProgramContext) -> List[Row]:
    """Build capacity rows and their investment options.

    - Each direction of a rail edge carries at most half of its base capacity plus
      half of the expansion gain once the expansion is ready.
    - Terminal throughput of a node, class and mode is bounded by its base
      capacity plus the gain of a ready expansion.
    - Road flow of a charged fuel over an edge is bounded by the base charging
      capacity plus the capacity added so far.
    - Flow of a fuel requiring an edge upgrade needs a ready upgrade.

    Parameters
    ----------
    context : ProgramContext
        Build state; flow variables must already be in its catalog.

    Returns
    -------
    list of Row
        Capacity rows per operational period and scenario, followed by the
        at-most-once rows of binary investments.

    Raises
    ------
    ProgramBuildError
        If a rail edge has an expansion option without base capacity, or a node
        investment names an unknown terminal class.
    """
    rows = _rail_capacity_rows(context)
    rows += _terminal_capacity_rows(context)
    rows += _charging_rows(context)
    rows += _upgrade_rows(context)
    logger.debug("Built %d investment rows", len(rows))
    return rows
