#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Discount factors and generalized transport cost tables.

Discounting counts years from the first year of the horizon. A period ``t``
contributes operating costs for each of its years ``Y_t .. Y_{t+1} - 1`` and
investment costs once, at ``Y_t``.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from stram.model._errors import InstanceError
from stram.model._types import ArcKey, Instance, TimeStructure

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "operational_discount_factor",
    "investment_discount_factor",
    "GeneralizedCost",
    "assemble_generalized_cost",
]

CostMultiplier = Callable[[str, int], float]


def operational_discount_factor(time: TimeStructure, t: int) -> float:
    """Return the discounted number of operating years of period `t`.

    Parameters
    ----------
    time : TimeStructure
        Period structure and discount factor.
    t : int
        Period index.

    Returns
    -------
    float
        Sum of ``delta ** n`` for ``n`` from ``Y_t`` to ``Y_{t+1} - 1``, with years
        counted from the first year of the horizon. The last period runs through
        the horizon end.

    See Also
    --------
    investment_discount_factor :
        Discount factor applied to investments made in a period.

    Examples
    --------
    >>> from stram.model import TimeStructure, operational_discount_factor
    >>> time = TimeStructure(period_years=(2023, 2028), horizon_end=2032, discount=1.0)
    >>> operational_discount_factor(time, 0)
    5.0
    >>> operational_discount_factor(time, 1)
    5.0
    """
    start = time.period_years[t] - time.base_year
    stop = time.period_end(t) - time.base_year
    exponents = np.arange(start, stop, dtype=float)
    return float(np.sum(np.power(time.discount, exponents)))


def investment_discount_factor(time: TimeStructure, t: int) -> float:
    """Return ``delta ** Y_t`` with years counted from the horizon start.

    Parameters
    ----------
    time : TimeStructure
        Period structure and discount factor.
    t : int
        Period index.

    Returns
    -------
    float
        The discount factor of investments made at the start of period `t`.

    Examples
    --------
    >>> from stram.model import TimeStructure, investment_discount_factor
    >>> time = TimeStructure(period_years=(2023, 2025), horizon_end=2030, discount=0.5)
    >>> investment_discount_factor(time, 1)
    0.25
    """
    return float(time.discount ** (time.period_years[t] - time.base_year))


@dataclass(frozen=True)
class GeneralizedCost:
    """Per tonne cost and emission tables of one scenario.

    Loaded tables are keyed by ``(arc_key, fuel, product, year)``; empty-trip
    tables by ``(arc_key, fuel, vehicle_type, year)``. Costs are split into a base
    component and a carbon component, emissions are in kg CO2e per tonne.
    """

    base: Dict[Tuple[ArcKey, str, str, int], float]
    carbon: Dict[Tuple[ArcKey, str, str, int], float]
    emission: Dict[Tuple[ArcKey, str, str, int], float]
    empty_base: Dict[Tuple[ArcKey, str, str, int], float]
    empty_carbon: Dict[Tuple[ArcKey, str, str, int], float]
    empty_emission: Dict[Tuple[ArcKey, str, str, int], float]

    def total(self, arc_key: ArcKey, fuel: str, product: str, year: int) -> float:
        """Return the generalized cost C of moving one tonne."""
        key = (arc_key, fuel, product, year)
        return self.base[key] + self.carbon[key]

    def empty_total(self, arc_key: ArcKey, fuel: str, vehicle: str, year: int) -> float:
        """Return the empty-trip cost per tonne of repositioned capacity."""
        key = (arc_key, fuel, vehicle, year)
        return self.empty_base[key] + self.empty_carbon[key]


def assemble_generalized_cost(
    instance: Instance,
    cost_multiplier: Optional[CostMultiplier] = None,
    years: Optional[Sequence[int]] = None,
) -> GeneralizedCost:
    """Build generalized cost tables for every arc, allowed fuel and product.

    Parameters
    ----------
    instance : Instance
        The instance.
    cost_multiplier : callable, default=None
        ``(fuel_group, year) -> factor`` applied to base costs, typically a
        scenario's deviation. If None every factor is 1.
    years : sequence of int, default=None
        Years to build tables for. If None the period start years are used.

    Returns
    -------
    GeneralizedCost
        Base, carbon and emission tables for loaded and empty movements.

    Raises
    ------
    InstanceError
        If a cost or emission factor is missing for an allowed (arc, fuel, product).
    """
    years = tuple(instance.time.period_years if years is None else years)
    costs = instance.costs
    base: Dict[Tuple[ArcKey, str, str, int], float] = {}
    carbon: Dict[Tuple[ArcKey, str, str, int], float] = {}
    emission: Dict[Tuple[ArcKey, str, str, int], float] = {}
    empty_base: Dict[Tuple[ArcKey, str, str, int], float] = {}
    empty_carbon: Dict[Tuple[ArcKey, str, str, int], float] = {}
    empty_emission: Dict[Tuple[ArcKey, str, str, int], float] = {}

    for arc in instance.arcs:
        vehicles = instance.vehicle_types_of_mode(arc.mode)
        for fuel in sorted(arc.allowed_fuels):
            group = instance.fuels[fuel].group
            for year in years:
                factor = 1.0
                if cost_multiplier is not None:
                    factor = cost_multiplier(group, year)
                price = costs.carbon_price[year]
                for product in instance.products:
                    try:
                        raw_cost = costs.base_transport_cost(arc, fuel, product, year)
                    except KeyError:
                        msg = f"Missing transport cost for mode {arc.mode!r}, fuel "
                        msg += f"{fuel!r}, product {product!r} in {year}."
                        raise InstanceError(msg, file="costs.csv") from None
                    try:
                        kg = costs.emission_factor(arc, fuel, product, year)
                    except KeyError:
                        msg = f"Missing emission factor for mode {arc.mode!r}, fuel "
                        msg += f"{fuel!r}, product {product!r} in {year}."
                        raise InstanceError(msg, file="emissions.csv") from None
                    key = (arc.key, fuel, product, year)
                    base[key] = raw_cost * factor
                    emission[key] = kg
                    carbon[key] = price * kg / 1000.0
                for vehicle in vehicles:
                    carried = sorted(instance.vehicle_types[vehicle].carryable_products)
                    key = (arc.key, fuel, vehicle, year)
                    loaded = [(arc.key, fuel, p, year) for p in carried]
                    mean_base = np.mean([base[k] for k in loaded])
                    mean_kg = np.mean([emission[k] for k in loaded])
                    kg_empty = costs.empty_trip_emission_factor * float(mean_kg)
                    empty_base[key] = costs.empty_trip_cost_factor * float(mean_base)
                    empty_emission[key] = kg_empty
                    empty_carbon[key] = price * kg_empty / 1000.0

    return GeneralizedCost(
        base=base,
        carbon=carbon,
        emission=emission,
        empty_base=empty_base,
        empty_carbon=empty_carbon,
        empty_emission=empty_emission,
    )
