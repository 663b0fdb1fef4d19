#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Transport work and fleet renewal constraints."""
import logging
from typing import List

from stram.model import ProgramBuildError
from stram.program._catalog import Row, make_row
from stram.program._context import ProgramContext

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["build_fleet_renewal_constraints"]

logger = logging.getLogger(__name__)


def _transport_work_rows(context: ProgramContext, t: int, scenario: str) -> List[Row]:
    instance = context.instance
    year = context.time.period_years[t]
    rows = []
    for mode in instance.modes:
        arcs = instance.arcs_of_mode(mode)
        for fuel in instance.fuels_of_mode(mode):
            terms = [(context.var("q", (mode, fuel), year, scenario), 1.0)]
            for arc in arcs:
                for product in instance.products:
                    column = context.find("x", (arc.key, fuel, product), year, scenario)
                    terms.append((column, -arc.length_km))
            index = (mode, fuel)
            row = make_row("transport_work", index, year, scenario, terms, "=", 0)
            rows.append(row)
    return rows


def _initial_mix_rows(context: ProgramContext, scenario: str) -> List[Row]:
    instance = context.instance
    year = context.time.period_years[0]
    rows = []
    for mode in instance.modes:
        fuels = instance.fuels_of_mode(mode)
        for fuel in fuels:
            share = instance.base_year_fuel_mix.get((mode, fuel), 0.0)
            terms = [(context.var("q", (mode, fuel), year, scenario), 1.0)]
            terms += [
                (context.var("q", (mode, other), year, scenario), -share)
                for other in fuels
            ]
            row = make_row(
                "initial_fuel_mix", (mode, fuel), year, scenario, terms, "=", 0
            )
            if row is not None:
                rows.append(row)
    return rows


def _renewal_rows(context: ProgramContext, t: int, scenario: str) -> List[Row]:
    instance = context.instance
    years = context.time.period_years
    year, previous = years[t], years[t - 1]
    rows = []
    for mode in instance.modes:
        fleet = instance.fleet.get(mode)
        if fleet is None:
            raise ProgramBuildError(f"Missing fleet parameters for mode {mode!r}.")
        if year not in fleet.max_modal_decrease:
            msg = f"Missing largest modal decrease of mode {mode!r} in {year}."
            raise ProgramBuildError(msg)
        rho = fleet.max_modal_decrease[year]
        fuels = instance.fuels_of_mode(mode)

        decreases = []
        for fuel in fuels:
            q_now = context.var("q", (mode, fuel), year, scenario)
            q_before = context.var("q", (mode, fuel), previous, scenario)
            q_minus = context.var("q_minus", (mode, fuel), year, scenario)
            decreases.append(q_minus)
            terms = [(q_minus, 1.0), (q_before, -1.0), (q_now, 1.0)]
            row = make_row(
                "work_decrease", (mode, fuel), year, scenario, terms, ">=", 0
            )
            rows.append(row)

        total_before = context.var("q_total", (mode,), previous, scenario)
        renewal = (year - previous) / fleet.lifespan_years
        terms = [(column, 1.0) for column in decreases]
        terms.append((total_before, -renewal))
        rows.append(
            make_row("fleet_renewal", (mode,), year, scenario, terms, "<=", 0)
        )

        terms = [
            (context.var("q", (mode, fuel), year, scenario), 1.0) for fuel in fuels
        ]
        terms += [
            (context.var("q", (mode, fuel), previous, scenario), -(1.0 - rho))
            for fuel in fuels
        ]
        row = make_row("modal_decrease", (mode,), year, scenario, terms, ">=", 0)
        if row is not None:
            rows.append(row)
    return rows


def build_fleet_renewal_constraints(context: ProgramContext) -> List[Row]:
    """Build transport work, fleet renewal and modal decrease rows.

    Transport work ``q`` of a mode and fuel is the tonne-km of its loaded arc
    flows. From the second period on, the decrease ``q_minus`` of work per fuel is
    limited by the share of the fleet that reaches end of life,
    ``(Y_t - Y_{t-1}) / N_m`` of the modal work in year ``Y_{t-1}``, and total
    modal work shrinks by at most ``rho_mt``. The first period's fuel mix is fixed
    to the base-year shares.

    In static mode only transport work rows of the chosen period are built, plus
    the fuel mix rows when it is the first period.

    Parameters
    ----------
    context : ProgramContext
        Build state; flow variables must already be in its catalog.

    Returns
    -------
    list of Row
        Rows for every operational period and scenario.

    Raises
    ------
    ProgramBuildError
        If a mode lacks fleet parameters or a largest modal decrease.
    """
    rows: List[Row] = []
    years = context.time.period_years
    for t in context.operational_periods:
        for scenario in context.scenarios_for(years[t]):
            rows += _transport_work_rows(context, t, scenario)
            if t == 0:
                rows += _initial_mix_rows(context, scenario)
            elif not context.static:
                rows += _renewal_rows(context, t, scenario)
    logger.debug("Built %d fleet rows", len(rows))
    return rows
