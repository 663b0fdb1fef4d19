#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Technology adoption constraints on yearly transport work."""
import logging
from typing import List, Sequence

from stram.diffusion import rate_coefficients
from stram.model import ProgramBuildError
from stram.program._catalog import Row, make_row
from stram.program._context import ProgramContext

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["build_adoption_constraints"]

logger = logging.getLogger(__name__)


def _check_curves(context: ProgramContext) -> None:
    instance = context.instance
    for mode in instance.modes:
        for fuel in instance.new_fuels_of_mode(mode):
            if not context.curves.has(mode, fuel):
                msg = f"Missing adoption curve for new fuel ({mode}, {fuel})."
                raise ProgramBuildError(msg)
            if (mode, fuel) not in instance.adoption_params:
                msg = f"Missing adoption parameters for new fuel ({mode}, {fuel})."
                raise ProgramBuildError(msg)


def _yearly_rows(context: ProgramContext, years: Sequence[int]) -> List[Row]:
    instance = context.instance
    rows = []
    for year in years:
        for scenario in context.scenarios_for(year):
            for mode in instance.modes:
                total = context.var("q_total", (mode,), year, scenario)
                terms = [(total, 1.0)]
                for fuel in instance.fuels_of_mode(mode):
                    column = context.var("q_year", (mode, fuel), year, scenario)
                    terms.append((column, -1.0))
                rows.append(
                    make_row("adoption_total", (mode,), year, scenario, terms, "=", 0)
                )
                for fuel in instance.new_fuels_of_mode(mode):
                    bound = context.curves.bound(mode, fuel, year, scenario)
                    terms = [
                        (context.var("q_year", (mode, fuel), year, scenario), 1.0),
                        (total, -bound),
                    ]
                    row = make_row(
                        "adoption_level", (mode, fuel), year, scenario, terms, "<=", 0
                    )
                    rows.append(row)
    return rows


def _link_rows(context: ProgramContext) -> List[Row]:
    instance, years = context.instance, context.time.period_years
    rows = []
    for t in context.operational_periods:
        year = years[t]
        for scenario in context.scenarios_for(year):
            for mode in instance.modes:
                for fuel in instance.fuels_of_mode(mode):
                    terms = [
                        (context.var("q_year", (mode, fuel), year, scenario), 1.0),
                        (context.var("q", (mode, fuel), year, scenario), -1.0),
                    ]
                    row = make_row(
                        "adoption_link", (mode, fuel), year, scenario, terms, "=", 0
                    )
                    rows.append(row)
    return rows


def _rate_rows(context: ProgramContext) -> List[Row]:
    instance, tree = context.instance, context.tree
    rows = []
    for year in context.time.years[1:]:
        previous = year - 1
        for scenario in context.scenarios_for(year):
            for mode in instance.modes:
                total_before = context.var("q_total", (mode,), previous, scenario)
                for fuel in instance.new_fuels_of_mode(mode):
                    params = instance.adoption_params[(mode, fuel)]
                    alpha, beta = rate_coefficients(params, previous, tree, scenario)
                    index = (mode, fuel)
                    terms = [
                        (context.var("q_year", index, year, scenario), 1.0),
                        (context.var("q_year", index, previous, scenario), -1.0 - beta),
                        (total_before, -alpha * params.potential_share),
                    ]
                    row = make_row(
                        "adoption_rate", index, year, scenario, terms, "<=", 0
                    )
                    rows.append(row)
    return rows


def build_adoption_constraints(context: ProgramContext) -> List[Row]:
    """Build adoption rows on yearly transport work.

    Yearly work ``q_year`` equals period work ``q`` in period start years and sums
    to the modal total ``q_total``. A new fuel's share of the modal total is at
    most its adoption bound, and its growth from one year to the next is at most
    ``alpha * U * q_total + beta * q_year`` of the previous year.

    In static mode only the link, total and level rows of the chosen period
    start year are built.

    Parameters
    ----------
    context : ProgramContext
        Build state; its adoption curves cover every new fuel.

    Returns
    -------
    list of Row
        Rows for every year and scenario.

    Raises
    ------
    ProgramBuildError
        If a new fuel has no adoption curve or parameters.
    """
    _check_curves(context)
    if context.static:
        years = (context.options.static_year,)
    else:
        years = context.time.years
    rows = _link_rows(context)
    rows += _yearly_rows(context, years)
    if not context.static:
        rows += _rate_rows(context)
    logger.debug("Built %d adoption rows", len(rows))
    return rows
