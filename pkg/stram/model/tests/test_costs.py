#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Test discount factors and generalized costs."""
import dataclasses

import numpy as np
import pytest

from stram.datasets import load_desk_instance
from stram.model import (
    InstanceError,
    TimeStructure,
    assemble_generalized_cost,
    investment_discount_factor,
    operational_discount_factor,
)
from stram.utils._testing import make_toy_instance

__author__ = ["stram-developers"]


@pytest.mark.parametrize("period_years", [(2023, 2028), (2023, 2026, 2030, 2040)])
def test_undiscounted_operational_factor_counts_years(period_years):
    """Test that with delta=1 the operational factor equals the period length."""
    time = TimeStructure(period_years, horizon_end=2049, discount=1.0)
    for t in time.periods:
        expected = time.period_end(t) - period_years[t]
        assert operational_discount_factor(time, t) == expected


def test_discounted_operational_factor_matches_direct_sum():
    """Test discounting of the first five years at delta=0.96."""
    time = TimeStructure((2023, 2028), horizon_end=2040, discount=0.96)
    expected = sum(0.96**n for n in range(5))
    assert operational_discount_factor(time, 0) == pytest.approx(expected, abs=1e-12)
    assert operational_discount_factor(time, 0) == pytest.approx(4.615683, abs=1e-6)
    expected = sum(0.96**n for n in range(5, 18))
    assert operational_discount_factor(time, 1) == pytest.approx(expected)


def test_investment_factor_is_power_of_relative_year():
    """Test the investment factor is delta to the period's relative start year."""
    time = TimeStructure((2023, 2026, 2030), horizon_end=2034, discount=0.9)
    assert investment_discount_factor(time, 0) == 1.0
    assert investment_discount_factor(time, 2) == pytest.approx(0.9**7)


def test_carbon_component_adds_price_times_emissions():
    """Test base 1, 50 kg per tonne and a price of 100 give a cost of 6."""
    instance = make_toy_instance(
        cost_per_tkm=0.01, emission_per_tkm=0.5, carbon_price=100.0
    )
    cost = assemble_generalized_cost(instance)
    key = (("a", "b", "road", 1), "Diesel", "p1", 2023)
    assert cost.base[key] == pytest.approx(1.0)
    assert cost.emission[key] == pytest.approx(50.0)
    assert cost.total(*key) == pytest.approx(6.0)


def test_zero_carbon_price_leaves_base_cost():
    """Test without a carbon price the generalized cost is the base cost."""
    cost = assemble_generalized_cost(make_toy_instance(carbon_price=0.0))
    for key, value in cost.base.items():
        assert cost.total(*key) == value


def test_carbon_component_is_linear_in_price():
    """Test scaling carbon prices scales only the carbon component."""
    instance = load_desk_instance()
    base = assemble_generalized_cost(instance)
    doubled = assemble_generalized_cost(instance.with_carbon_factor(2.0))
    for key in base.base:
        assert doubled.base[key] == base.base[key]
        assert doubled.carbon[key] == pytest.approx(2.0 * base.carbon[key])
    for key in base.empty_base:
        assert doubled.empty_carbon[key] == pytest.approx(2.0 * base.empty_carbon[key])


def test_empty_trip_cost_averages_carried_products():
    """Test empty-trip tables use the mean loaded value over carried products."""
    instance = make_toy_instance(
        products=("p1", "p2"),
        demand={("a", "b", "p1"): 5.0},
        cost_per_tkm={("road", "Diesel", "p1"): 0.01, ("road", "Diesel", "p2"): 0.03},
        emission_per_tkm=0.1,
    )
    cost = assemble_generalized_cost(instance)
    key = (("a", "b", "road", 1), "Diesel", "road_vehicle", 2023)
    assert cost.empty_base[key] == pytest.approx(2.0)
    assert cost.empty_emission[key] == pytest.approx(0.8 * 10.0)


def test_cost_multiplier_scales_base_cost_only():
    """Test scenario multipliers act on the base component."""
    instance = make_toy_instance(carbon_price=50.0)
    plain = assemble_generalized_cost(instance)
    scaled = assemble_generalized_cost(instance, cost_multiplier=lambda g, y: 0.75)
    for key in plain.base:
        assert scaled.base[key] == pytest.approx(0.75 * plain.base[key])
        assert scaled.carbon[key] == plain.carbon[key]


def test_missing_emission_factor_raises():
    """Test a missing emission factor names the emissions file."""
    instance = make_toy_instance()
    emissions = dict(instance.costs.emission_per_tkm)
    emissions.pop(("road", "Diesel", "p1", 2023))
    costs = dataclasses.replace(instance.costs, emission_per_tkm=emissions)
    broken = dataclasses.replace(instance, costs=costs)
    with pytest.raises(InstanceError, match="emissions.csv"):
        assemble_generalized_cost(broken)


def test_generalized_cost_covers_allowed_fuels():
    """Test tables have an entry for every arc, allowed fuel, product and period."""
    instance = load_desk_instance()
    cost = assemble_generalized_cost(instance)
    expected = sum(len(arc.allowed_fuels) for arc in instance.arcs)
    expected *= len(instance.products) * len(instance.time.period_years)
    assert len(cost.base) == expected
    assert np.all(np.array(list(cost.base.values())) > 0)
