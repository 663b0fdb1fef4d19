#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Test scenario tree generation, deviations and information partitions."""
import itertools
import json
import math

import pytest

from stram import config_context
from stram.datasets import desk_instance_path
from stram.model import InstanceError
from stram.scenarios import (
    ScenarioState,
    apply_deviations,
    generate_tree,
    information_partition,
    load_scenario_tree,
)

__author__ = ["stram-developers"]

GROUPS = ("Battery", "Biofuel", "Hydrogen")


@pytest.mark.parametrize("k", range(4))
def test_tree_has_all_optimistic_pessimistic_combinations_plus_base(k):
    """Test 2**k + 1 scenarios with the enumerated labels and uniform weights."""
    tree = generate_tree(GROUPS[:k], branch_year=2034)
    assert len(tree.scenarios) == 2**k + 1
    expected = ["".join(c) for c in itertools.product("OP", repeat=k)] if k else []
    expected.append("B" * k if k else "base")
    assert list(tree.ids) == expected
    assert math.fsum(tree.probabilities.values()) == pytest.approx(1.0, abs=1e-12)
    assert sum(spec.is_base for spec in tree.scenarios) == 1


def test_three_groups_give_nine_scenarios():
    """Test the three varied groups case."""
    tree = generate_tree(GROUPS, branch_year=2034)
    assert len(tree.ids) == 9
    assert tree.base.id == "BBB"
    assert tree.by_id["OPO"].state_of("Biofuel") is ScenarioState.PESSIMISTIC


def test_duplicate_groups_are_rejected():
    """Test listing a group twice raises."""
    with pytest.raises(ValueError, match="Duplicate fuel groups"):
        generate_tree(["Battery", "Battery"], branch_year=2034)


def test_explicit_probabilities_are_validated():
    """Test explicit probabilities must cover all scenarios and sum to one."""
    good = {"O": 0.25, "P": 0.25, "B": 0.5}
    tree = generate_tree(["Battery"], branch_year=2034, probabilities=good)
    assert tree.probabilities == good
    with pytest.raises(ValueError, match="sum to"):
        generate_tree(["Battery"], 2034, probabilities={"O": 0.5, "P": 0.5, "B": 0.5})
    with pytest.raises(ValueError, match="exactly the scenarios"):
        generate_tree(["Battery"], 2034, probabilities={"O": 1.0})


def test_base_state_never_deviates():
    """Test the all-base scenario keeps every multiplier at one."""
    tree = generate_tree(GROUPS, branch_year=2034)
    for group, year in itertools.product(GROUPS, (2023, 2034, 2050)):
        multipliers = apply_deviations(tree, "BBB", group, year)
        assert (multipliers.cost, multipliers.alpha, multipliers.beta) == (1, 1, 1)


@pytest.mark.parametrize("year", [2034, 2040, 2050])
def test_deviations_from_branch_year(year):
    """Test optimistic and pessimistic factors from the branch year on."""
    tree = generate_tree(GROUPS, branch_year=2034)
    optimistic = apply_deviations(tree, "OPO", "Battery", year)
    assert optimistic.cost == pytest.approx(0.75)
    assert optimistic.alpha == pytest.approx(1.25)
    assert optimistic.beta == pytest.approx(1.25)
    pessimistic = apply_deviations(tree, "OPO", "Biofuel", year)
    assert pessimistic.cost == pytest.approx(1.25)
    assert pessimistic.alpha == pytest.approx(0.75)
    assert pessimistic.beta == pytest.approx(0.75)


def test_no_deviation_before_branch_year_or_for_other_groups():
    """Test first-stage years and groups outside the tree are never varied."""
    tree = generate_tree(GROUPS, branch_year=2034)
    for scenario in tree.ids:
        for group in GROUPS + ("Fossil",):
            assert apply_deviations(tree, scenario, group, 2033).cost == 1.0
        assert apply_deviations(tree, scenario, "Fossil", 2050).alpha == 1.0


def test_tabulated_cost_sign_convention():
    """Test the alternative convention raises optimistic costs."""
    with config_context(cost_sign_convention="as_tabulated"):
        tree = generate_tree(["Battery"], branch_year=2034)
    assert apply_deviations(tree, "O", "Battery", 2040).cost == pytest.approx(1.25)
    assert apply_deviations(tree, "O", "Battery", 2040).alpha == pytest.approx(1.25)


@pytest.mark.parametrize("convention", ["optimistic-cheaper", "cheaper", "bogus"])
def test_unknown_cost_sign_convention_is_rejected(convention):
    """Test a misspelled convention raises instead of flipping the cost sign."""
    with pytest.raises(ValueError, match="`cost_sign_convention` must be one of"):
        generate_tree(["Battery"], branch_year=2034, cost_sign_convention=convention)


def test_partition_is_one_block_then_singletons():
    """Test partitions before, at and after the branch year."""
    tree = generate_tree(GROUPS, branch_year=2034)
    assert information_partition(tree, 2023) == (tree.ids,)
    assert information_partition(tree, 2034) == tuple((s,) for s in tree.ids)
    assert information_partition(tree, 2040) == tuple((s,) for s in tree.ids)


def test_partition_refines_over_time():
    """Test blocks never merge as years increase."""
    tree = generate_tree(GROUPS, branch_year=2030)
    years = range(2023, 2051)
    for earlier, later in zip(years[:-1], years[1:]):
        for block in information_partition(tree, later):
            coarser = information_partition(tree, earlier)
            assert any(set(block) <= set(b) for b in coarser)


def test_single_and_base_only_trees():
    """Test deterministic trees keep the scenario's states with probability one."""
    tree = generate_tree(GROUPS, branch_year=2034)
    base = tree.base_only()
    assert base.ids == ("BBB",)
    assert base.probabilities == {"BBB": 1.0}
    single = tree.single("OOP")
    assert apply_deviations(single, "OOP", "Hydrogen", 2040).cost == pytest.approx(1.25)


def test_load_scenario_tree_from_instance_directory():
    """Test the desk instance's tree file."""
    tree = load_scenario_tree(desk_instance_path())
    assert tree.varied_groups == ("Biofuel", "Electric")
    assert tree.branch_year == 2026
    assert tree.ids == ("OO", "OP", "PO", "PP", "BB")


def test_load_scenario_tree_rejects_bad_files(tmp_path):
    """Test missing and inconsistent files raise instance errors."""
    with pytest.raises(InstanceError, match="missing"):
        load_scenario_tree(tmp_path / "scenarios.json")
    path = tmp_path / "scenarios.json"
    path.write_text(json.dumps({"varied_groups": ["A", "A"], "branch_year": 2030}))
    with pytest.raises(InstanceError, match="Duplicate"):
        load_scenario_tree(path)


def test_load_scenario_tree_rejects_unknown_cost_sign_convention(tmp_path):
    """Test an unknown convention in the file is an instance error."""
    path = tmp_path / "scenarios.json"
    data = {
        "varied_groups": ["Battery"],
        "branch_year": 2034,
        "cost_sign_convention": "cheaper",
    }
    path.write_text(json.dumps(data))
    with pytest.raises(InstanceError, match="scenarios.json.*cost_sign_convention"):
        load_scenario_tree(path)
