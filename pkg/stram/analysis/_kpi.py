#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Cost, mode-fuel and emission indicators of a solved program.

Operating indicators are annual values in the start year of every operational
period. Investment indicators are undiscounted costs of the investments made at the
start of a period. Cross-scenario dispersion is the probability weighted mean and
standard deviation per period.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import DefaultDict, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import polars as pl

from stram.analysis._solution import Solution
from stram.model import (
    GeneralizedCost,
    Instance,
    assemble_generalized_cost,
    investment_discount_factor,
    operational_discount_factor,
)
from stram.paths import path_transfer_cost
from stram.program import investment_cost
from stram.scenarios import ScenarioTree

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "DEFAULT_EMISSION_TARGETS",
    "INVESTMENT_CATEGORIES",
    "KpiReport",
    "emission_targets",
    "emissions_report",
    "kpis",
]

logger = logging.getLogger(__name__)

INVESTMENT_CATEGORIES: Dict[str, str] = {
    "epsilon": "Edge",
    "y": "Charge",
    "nu": "Node",
    "upsilon": "Upgrade",
}

# percent of the first period's emissions
DEFAULT_EMISSION_TARGETS: Dict[int, float] = {
    2023: 100.0,
    2026: 72.5,
    2030: 45.0,
    2040: 27.5,
    2050: 10.0,
}

KG_PER_KILOTONNE = 1e6


@dataclass(frozen=True)
class KpiReport:
    """Indicator tables of one solution.

    Parameters
    ----------
    investments : polars.DataFrame
        ``year, scenario, category, cost``: investment cost per category.
    transport_costs : polars.DataFrame
        ``year, scenario, base, carbon, transfer, empty_trip, total``: annual
        operating cost split. ``carbon`` covers loaded and empty movements,
        ``empty_trip`` the remaining cost of empty movements.
    mode_fuel : polars.DataFrame
        ``year, scenario, mode, fuel, work_tkm, share``: loaded transport work and
        its share of the modal work, null when the mode carries nothing.
    emissions : polars.DataFrame
        ``year, scenario, emissions_kt, relative, target``: annual emissions, their
        ratio to the first reported year and the target ratio.
    dispersion : polars.DataFrame
        ``kpi, mode, fuel, year, mean, std`` across scenarios.
    scenario_costs : polars.DataFrame
        ``scenario, probability, investment, operating, total, program``:
        discounted cost components recomputed from the tables next to the cost the
        program assigns to the scenario.
    """

    investments: pl.DataFrame
    transport_costs: pl.DataFrame
    mode_fuel: pl.DataFrame
    emissions: pl.DataFrame
    dispersion: pl.DataFrame
    scenario_costs: pl.DataFrame

    def tables(self) -> Dict[str, pl.DataFrame]:
        """Return the tables keyed by their CSV file stem."""
        return {
            "investments": self.investments,
            "transport_costs": self.transport_costs,
            "mode_fuel": self.mode_fuel,
            "emissions": self.emissions,
            "dispersion": self.dispersion,
            "scenario_costs": self.scenario_costs,
        }

    def expected_total_emissions(self, instance: Instance) -> float:
        """Return the expected emissions in kt over the reported periods.

        Annual emissions count once for every year of their period.
        """
        time = instance.time
        years = {
            y: time.period_end(time.period_index(y)) - y
            for y in self.emissions["year"].unique().to_list()
        }
        probabilities = dict(
            self.scenario_costs.select("scenario", "probability").iter_rows()
        )
        return float(
            sum(
                probabilities[s] * value * years[y]
                for y, s, value in self.emissions.select(
                    "year", "scenario", "emissions_kt"
                ).iter_rows()
            )
        )


def emission_targets(instance: Instance, years: Sequence[int]) -> Dict[int, float]:
    """Return the target ratio to first-period emissions for every year.

    Targets of the instance, or :data:`DEFAULT_EMISSION_TARGETS` if it has none,
    are linearly interpolated between their years and held constant beyond them.

    Examples
    --------
    >>> from stram.analysis import emission_targets
    >>> from stram.utils._testing import make_toy_instance
    >>> emission_targets(make_toy_instance(), [2023, 2025])
    {2023: 1.0, 2025: 1.0}
    """
    targets = dict(instance.emission_targets) or DEFAULT_EMISSION_TARGETS
    anchors = sorted(targets)
    values = np.interp(
        np.asarray(years, dtype=float),
        np.asarray(anchors, dtype=float),
        np.asarray([targets[y] for y in anchors], dtype=float),
    )
    return {int(y): float(v) / 100.0 for y, v in zip(years, values)}


@dataclass
class _ScenarioTotals:
    base: DefaultDict[int, float]
    carbon: DefaultDict[int, float]
    transfer: DefaultDict[int, float]
    empty_trip: DefaultDict[int, float]
    emission_kg: DefaultDict[int, float]
    work: DefaultDict[Tuple[int, str, str], float]
    investment: DefaultDict[Tuple[int, str], float]


def _reported_years(solution: Solution, instance: Instance) -> Tuple[int, ...]:
    static_year = solution.program.options.static_year
    if static_year is not None:
        return (static_year,)
    return instance.time.period_years


def _totals(
    solution: Solution,
    instance: Instance,
    scenario: str,
    cost: GeneralizedCost,
    transfer: Dict[Tuple[str, str], float],
) -> _ScenarioTotals:
    totals = _ScenarioTotals(*(defaultdict(float) for _ in range(7)))
    arcs = instance.arc_by_key
    for variable, value in solution.scenario_items(scenario):
        if value == 0.0:
            continue
        block, index, year = variable.block, variable.index, variable.year
        if block == "x":
            arc_key, fuel, product = index
            key = (arc_key, fuel, product, year)
            totals.base[year] += value * cost.base[key]
            totals.carbon[year] += value * cost.carbon[key]
            totals.emission_kg[year] += value * cost.emission[key]
            totals.work[(year, arc_key[2], fuel)] += value * arcs[arc_key].length_km
        elif block == "b":
            key = (index[0], index[1], index[2], year)
            totals.empty_trip[year] += value * cost.empty_base[key]
            totals.carbon[year] += value * cost.empty_carbon[key]
            totals.emission_kg[year] += value * cost.empty_emission[key]
        elif block == "h":
            if index not in transfer:
                path = solution.paths.by_id[index[0]]
                transfer[index] = path_transfer_cost(instance, path, index[1])
            totals.transfer[year] += value * transfer[index]
        elif variable.is_investment:
            category = INVESTMENT_CATEGORIES[block]
            unit = investment_cost(instance, block, index)
            totals.investment[(year, category)] += value * unit
    return totals


def _scenario_totals(
    solution: Solution, instance: Instance, tree: ScenarioTree
) -> Dict[str, _ScenarioTotals]:
    solution.require_values()
    transfer: Dict[Tuple[str, str], float] = {}
    found = {}
    for scenario in tree.ids:
        cost = assemble_generalized_cost(instance, tree.cost_multiplier(scenario))
        found[scenario] = _totals(solution, instance, scenario, cost, transfer)
    return found


def _emissions_frame(
    totals: Mapping[str, _ScenarioTotals],
    instance: Instance,
    years: Sequence[int],
) -> pl.DataFrame:
    targets = emission_targets(instance, years)
    rows = []
    for scenario, found in totals.items():
        first = found.emission_kg[years[0]] / KG_PER_KILOTONNE
        for year in years:
            value = found.emission_kg[year] / KG_PER_KILOTONNE
            relative = value / first if first > 0 else None
            rows.append((year, scenario, value, relative, targets[year]))
    return pl.DataFrame(
        rows,
        schema={
            "year": pl.Int64,
            "scenario": pl.Utf8,
            "emissions_kt": pl.Float64,
            "relative": pl.Float64,
            "target": pl.Float64,
        },
        orient="row",
    ).sort(["scenario", "year"])


def emissions_report(
    solution: Solution, instance: Instance, tree: Optional[ScenarioTree] = None
) -> pl.DataFrame:
    """Return annual emissions per period and scenario next to the targets.

    Emissions are loaded flows times their emission factors plus empty movements
    times the empty-trip emission factors, in kilotonnes CO2e per year.

    Parameters
    ----------
    solution : Solution
        A solved program.
    instance : Instance
        The instance the program was built from.
    tree : ScenarioTree, default=None
        Scenarios to report; those of `solution` if None.

    Returns
    -------
    polars.DataFrame
        ``year, scenario, emissions_kt, relative, target``. ``relative`` is the
        ratio to the first reported year, null if that year has no emissions.

    Raises
    ------
    NoSolutionError
        If the solve returned no values.
    """
    tree = solution.tree if tree is None else tree
    totals = _scenario_totals(solution, instance, tree)
    return _emissions_frame(totals, instance, _reported_years(solution, instance))


def _dispersion(
    transport_costs: pl.DataFrame,
    investments: pl.DataFrame,
    mode_fuel: pl.DataFrame,
    emissions: pl.DataFrame,
    probabilities: Mapping[str, float],
) -> pl.DataFrame:
    keys = ["year", "scenario"]
    aggregate = pl.concat(
        [
            transport_costs.select(
                *keys, pl.lit("transport_cost").alias("kpi"), pl.col("total")
            ),
            transport_costs.select(
                *keys, pl.lit("carbon_cost").alias("kpi"), pl.col("carbon")
            ).rename({"carbon": "total"}),
            investments.group_by(keys)
            .agg(pl.col("cost").sum().alias("total"))
            .select(*keys, pl.lit("investment_cost").alias("kpi"), pl.col("total")),
            emissions.select(
                *keys, pl.lit("emissions_kt").alias("kpi"), pl.col("emissions_kt")
            ).rename({"emissions_kt": "total"}),
        ]
    ).with_columns(
        pl.lit(None, dtype=pl.Utf8).alias("mode"),
        pl.lit(None, dtype=pl.Utf8).alias("fuel"),
    )
    shares = mode_fuel.select(
        *keys,
        pl.lit("work_share").alias("kpi"),
        pl.col("share").fill_null(0.0).alias("total"),
        "mode",
        "fuel",
    )
    weights = pl.DataFrame(
        {"scenario": list(probabilities), "probability": list(probabilities.values())},
        schema={"scenario": pl.Utf8, "probability": pl.Float64},
    )
    value, probability = pl.col("total"), pl.col("probability")
    mean = (value * probability).sum()
    return (
        pl.concat([aggregate, shares], how="diagonal")
        .join(weights, on="scenario", how="left")
        .group_by(["kpi", "mode", "fuel", "year"])
        .agg(
            mean.alias("mean"),
            (probability * (value - mean) ** 2).sum().sqrt().alias("std"),
        )
        .sort(["kpi", "mode", "fuel", "year"], nulls_last=False)
    )


def kpis(
    solution: Solution, instance: Instance, tree: Optional[ScenarioTree] = None
) -> KpiReport:
    """Compute the indicator tables of a solution.

    Parameters
    ----------
    solution : Solution
        A solved program.
    instance : Instance
        The instance the program was built from.
    tree : ScenarioTree, default=None
        Scenarios to report; those of `solution` if None.

    Returns
    -------
    KpiReport
        Investment, transport cost, mode-fuel, emission, dispersion and scenario
        cost tables. In a static run operating tables hold the static year only.

    Raises
    ------
    NoSolutionError
        If the solve returned no values.

    See Also
    --------
    emissions_report : The emission table on its own.
    """
    tree = solution.tree if tree is None else tree
    time = instance.time
    years = _reported_years(solution, instance)
    totals = _scenario_totals(solution, instance, tree)
    program_costs = solution.scenario_costs()

    investment_rows, cost_rows, work_rows, scenario_rows = [], [], [], []
    for scenario, found in totals.items():
        invested = operating = 0.0
        for t, year in enumerate(time.period_years):
            for category in INVESTMENT_CATEGORIES.values():
                amount = found.investment[(year, category)]
                investment_rows.append((year, scenario, category, amount))
                invested += investment_discount_factor(time, t) * amount
        for year in years:
            parts = (
                found.base[year],
                found.carbon[year],
                found.transfer[year],
                found.empty_trip[year],
            )
            cost_rows.append((year, scenario, *parts, sum(parts)))
            t = time.period_index(year)
            operating += operational_discount_factor(time, t) * sum(parts)
            for mode in instance.modes:
                for fuel in instance.fuels_of_mode(mode):
                    work = found.work[(year, mode, fuel)]
                    work_rows.append((year, scenario, mode, fuel, work))
        scenario_rows.append(
            (
                scenario,
                tree.probabilities[scenario],
                invested,
                operating,
                invested + operating,
                program_costs.get(scenario, float("nan")),
            )
        )

    investments = pl.DataFrame(
        investment_rows,
        schema={
            "year": pl.Int64,
            "scenario": pl.Utf8,
            "category": pl.Utf8,
            "cost": pl.Float64,
        },
        orient="row",
    ).sort(["scenario", "year", "category"])
    transport_costs = pl.DataFrame(
        cost_rows,
        schema={
            "year": pl.Int64,
            "scenario": pl.Utf8,
            "base": pl.Float64,
            "carbon": pl.Float64,
            "transfer": pl.Float64,
            "empty_trip": pl.Float64,
            "total": pl.Float64,
        },
        orient="row",
    ).sort(["scenario", "year"])
    modal = pl.col("work_tkm").sum().over(["year", "scenario", "mode"])
    mode_fuel = (
        pl.DataFrame(
            work_rows,
            schema={
                "year": pl.Int64,
                "scenario": pl.Utf8,
                "mode": pl.Utf8,
                "fuel": pl.Utf8,
                "work_tkm": pl.Float64,
            },
            orient="row",
        )
        .with_columns(
            pl.when(modal > 0)
            .then(pl.col("work_tkm") / modal)
            .otherwise(None)
            .alias("share")
        )
        .sort(["scenario", "year", "mode", "fuel"])
    )
    emissions = _emissions_frame(totals, instance, years)
    scenario_costs = pl.DataFrame(
        scenario_rows,
        schema={
            "scenario": pl.Utf8,
            "probability": pl.Float64,
            "investment": pl.Float64,
            "operating": pl.Float64,
            "total": pl.Float64,
            "program": pl.Float64,
        },
        orient="row",
    )
    mismatch = (scenario_costs["total"] - scenario_costs["program"]).abs().max()
    if mismatch is not None and mismatch > 1e-6 * max(
        1.0, float(scenario_costs["program"].abs().max())
    ):
        logger.warning("Recomputed scenario costs differ by %.3g", mismatch)
    dispersion = _dispersion(
        transport_costs, investments, mode_fuel, emissions, tree.probabilities
    )
    return KpiReport(
        investments=investments,
        transport_costs=transport_costs,
        mode_fuel=mode_fuel,
        emissions=emissions,
        dispersion=dispersion,
        scenario_costs=scenario_costs,
    )
