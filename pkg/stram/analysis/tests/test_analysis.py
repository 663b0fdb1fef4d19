#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Test indicators, the value of the stochastic solution and sensitivity runs."""
import dataclasses
import json
import math

import numpy as np
import polars as pl
import pytest

from stram.analysis import (
    Solution,
    carbon_sensitivity,
    compute_eev,
    compute_wait_and_see,
    emission_targets,
    emissions_report,
    first_stage_values,
    kpis,
    run_model,
    sensitivity_frame,
    static_run,
    value_of_stochastic_solution,
    write_kpi_tables,
    write_solution_json,
)
from stram.diffusion import adoption_bound_table
from stram.paths import generate_path_set
from stram.program import ProgramOptions
from stram.scenarios import generate_tree
from stram.solver import SolveOptions, solve
from stram.utils._testing import make_toy_instance

__author__ = ["stram-developers"]

EXACT = SolveOptions(mip_gap=0.0)


def _battery_instance(**kwargs):
    """Road network where a cleaner new fuel pays off under a carbon price."""
    params = dict(
        arcs=(("a", "b", "road", 100.0), ("b", "c", "road", 80.0)),
        demand={("a", "c", "p1"): 10.0, ("b", "a", "p1"): 4.0},
        new_fuels={("road", "Battery"): (2023, 0.6, 0.05, 0.3)},
        period_years=(2023, 2028),
        horizon_end=2032,
        discount=0.97,
        cost_per_tkm={("road", "Battery", "p1"): 0.012},
        emission_per_tkm={("road", "Battery", "p1"): 0.0},
        carbon_price=200.0,
    )
    params.update(kwargs)
    return make_toy_instance(**params)


@pytest.fixture(scope="module")
def two_node():
    instance = make_toy_instance()
    tree = generate_tree([], 2023)
    return instance, run_model(instance, tree, solve_options=EXACT)


@pytest.fixture(scope="module")
def battery():
    instance = _battery_instance()
    tree = generate_tree(["Battery"], 2028)
    paths = generate_path_set(instance, tree, n_jobs=1)
    solution = run_model(instance, tree, paths, solve_options=EXACT)
    return instance, tree, paths, solution


def test_two_node_indicators(two_node):
    """Test cost split, emissions and work of a single loaded and empty trip."""
    instance, solution = two_node
    report = kpis(solution, instance)

    costs = report.transport_costs.row(0, named=True)
    assert costs["year"] == 2023 and costs["scenario"] == "base"
    assert costs["base"] == pytest.approx(10.0)
    assert costs["carbon"] == 0.0
    assert costs["transfer"] == 0.0
    assert costs["empty_trip"] == pytest.approx(10.0)
    assert costs["total"] == pytest.approx(20.0)

    # 10 t loaded at 5 kg/t plus 10 t empty at 0.8 * 5 kg/t
    emissions = report.emissions.row(0, named=True)
    assert emissions["emissions_kt"] == pytest.approx(90.0 / 1e6)
    assert emissions["relative"] == 1.0

    road = report.mode_fuel.filter(pl.col("mode") == "road")
    assert road["work_tkm"].to_list() == pytest.approx([1000.0])
    assert road["share"].to_list() == [1.0]

    totals = report.scenario_costs.row(0, named=True)
    assert totals["total"] == pytest.approx(totals["program"], abs=1e-9)
    assert totals["total"] == pytest.approx(solution.objective, abs=1e-9)


def test_single_scenario_has_no_dispersion(two_node):
    """Test every standard deviation is 0 with one scenario."""
    instance, solution = two_node
    dispersion = kpis(solution, instance).dispersion
    assert set(dispersion["kpi"].unique()) == {
        "carbon_cost",
        "emissions_kt",
        "investment_cost",
        "transport_cost",
        "work_share",
    }
    assert (dispersion["std"] == 0.0).all()


def test_kpis_without_solution():
    """Test reporting on an infeasible run raises."""
    instance = make_toy_instance(bidirectional=False)
    solution = run_model(instance, generate_tree([], 2023), solve_options=EXACT)
    assert not solution.result.has_solution
    with pytest.raises(ValueError, match="without a solution"):
        kpis(solution, instance)


def test_carbon_cost_matches_reaggregation(battery):
    """Test the carbon cost equals flows times emission factors times price."""
    instance, tree, _, solution = battery
    report = kpis(solution, instance)
    costs = instance.costs
    for scenario in tree.ids:
        expected = {}
        for variable, value in solution.scenario_items(scenario, ("x", "b")):
            arc = instance.arc_by_key[variable.index[0]]
            fuel, year = variable.index[1], variable.year
            kg = costs.emission_per_tkm[(arc.mode, fuel, "p1", year)] * arc.length_km
            if variable.block == "b":
                kg *= costs.empty_trip_emission_factor
            expected[year] = expected.get(year, 0.0) + value * kg
        for year, kg in expected.items():
            row = report.transport_costs.filter(
                (pl.col("scenario") == scenario) & (pl.col("year") == year)
            )
            price = costs.carbon_price[year]
            assert row["carbon"][0] == pytest.approx(kg * price / 1000.0, abs=1e-9)


def test_emissions_match_reaggregation(battery):
    """Test emissions equal the loaded and empty flows times their factors."""
    instance, tree, _, solution = battery
    frame = emissions_report(solution, instance)
    costs = instance.costs
    for scenario in tree.ids:
        kg = {2023: 0.0, 2028: 0.0}
        for variable, value in solution.scenario_items(scenario, ("x", "b")):
            arc = instance.arc_by_key[variable.index[0]]
            factor = costs.emission_per_tkm[
                (arc.mode, variable.index[1], "p1", variable.year)
            ]
            if variable.block == "b":
                factor *= costs.empty_trip_emission_factor
            kg[variable.year] += value * factor * arc.length_km
        rows = frame.filter(pl.col("scenario") == scenario).sort("year")
        assert rows["emissions_kt"].to_list() == pytest.approx(
            [kg[2023] / 1e6, kg[2028] / 1e6], abs=1e-9
        )
        assert rows["relative"][0] == 1.0


def test_mode_shares_sum_to_one(battery):
    """Test fuel shares of every mode carrying work sum to 1."""
    instance, _, _, solution = battery
    mode_fuel = kpis(solution, instance).mode_fuel
    sums = (
        mode_fuel.filter(pl.col("share").is_not_null())
        .group_by(["year", "scenario", "mode"])
        .agg(pl.col("share").sum())
    )
    assert sums.height > 0
    assert np.allclose(sums["share"].to_numpy(), 1.0, atol=1e-9)
    battery_work = mode_fuel.filter(
        (pl.col("fuel") == "Battery") & (pl.col("year") == 2028)
    )["work_tkm"]
    assert (battery_work > 0).all()


@pytest.mark.parametrize("nonanticipativity", ["merged", "explicit"])
def test_scenario_costs_reconcile(nonanticipativity):
    """Test discounted tables add up to each scenario's cost in the program."""
    instance = _battery_instance()
    tree = generate_tree(["Battery"], 2028)
    options = ProgramOptions(nonanticipativity=nonanticipativity)
    solution = run_model(instance, tree, None, options, EXACT)
    costs = kpis(solution, instance).scenario_costs
    assert costs["scenario"].to_list() == list(tree.ids)
    assert np.allclose(
        costs["total"].to_numpy(), costs["program"].to_numpy(), rtol=0, atol=1e-6
    )


def test_dispersion_is_probability_weighted(battery):
    """Test mean and standard deviation against a direct computation."""
    instance, tree, _, solution = battery
    report = kpis(solution, instance)
    costs = report.transport_costs.filter(pl.col("year") == 2028)
    values = np.array(
        [costs.filter(pl.col("scenario") == s)["total"][0] for s in tree.ids]
    )
    weights = np.array([tree.probabilities[s] for s in tree.ids])
    mean = weights @ values
    std = math.sqrt(weights @ (values - mean) ** 2)
    row = report.dispersion.filter(
        (pl.col("kpi") == "transport_cost") & (pl.col("year") == 2028)
    )
    assert row["mean"][0] == pytest.approx(mean, rel=1e-12)
    assert row["std"][0] == pytest.approx(std, rel=1e-9, abs=1e-12)
    assert (report.dispersion["std"] >= 0).all()


def test_emission_targets():
    """Test targets are interpolated between anchors and held beyond them."""
    instance = make_toy_instance()
    own = dataclasses.replace(instance, emission_targets={2023: 100.0, 2033: 50.0})
    assert emission_targets(own, [2023, 2028, 2040]) == pytest.approx(
        {2023: 1.0, 2028: 0.75, 2040: 0.5}
    )
    default = dataclasses.replace(instance, emission_targets={})
    assert emission_targets(default, [2026, 2035, 2055]) == pytest.approx(
        {2026: 0.725, 2035: 0.3625, 2055: 0.1}
    )


def test_value_of_stochastic_solution():
    """Test the relative VSS uses the EEV objective as denominator."""
    assert value_of_stochastic_solution(615.65, 655.15) == pytest.approx(39.5 / 655.15)
    assert round(value_of_stochastic_solution(615.65, 655.15), 4) == 0.0603
    assert value_of_stochastic_solution(1.0, math.inf) == 1.0
    assert value_of_stochastic_solution(0.0, 0.0) == 0.0


def test_eev_single_scenario_has_no_value():
    """Test a single scenario gives EEV equal to SP and a VSS of exactly 0."""
    instance = _battery_instance()
    tree = generate_tree([], 2028)
    paths = generate_path_set(instance, tree, n_jobs=1)
    report, solutions = compute_eev(
        instance, paths, tree, solve_options=EXACT, n_jobs=1
    )
    assert report.vss_absolute == 0.0
    assert report.vss_relative == 0.0
    assert report.eev_objective == report.sp_objective == report.ev_objective
    assert report.emissions_delta_kt == 0.0
    assert solutions["eev"] is solutions["sp"]


@pytest.fixture(scope="module")
def vss_run(battery):
    instance, tree, paths, _ = battery
    return compute_eev(instance, paths, tree, solve_options=EXACT, n_jobs=1)


def test_eev_matches_direct_recomputation(battery, vss_run):
    """Test EEV against solving EV, fixing its first stage and solving SP."""
    instance, tree, paths, _ = battery
    report, solutions = vss_run
    sp = solutions["sp"]

    ev = run_model(instance, tree.base_only(), paths, solve_options=EXACT)
    ev_owner = ev.tree.ids[0]
    fixed = {}
    for column, variable in enumerate(sp.program.catalog):
        if variable.year is None or variable.year >= tree.branch_year:
            continue
        ev_column = ev.program.catalog.get(
            variable.block, variable.index, variable.year, ev_owner
        )
        if ev_column is not None:
            fixed[column] = ev.result.values[ev_column]
    eev = solve(sp.program, options=EXACT, fixed=fixed)

    assert report.fixed_columns == len(fixed) > 0
    assert report.ev_objective == pytest.approx(ev.objective, abs=1e-9)
    assert report.eev_objective == pytest.approx(eev.objective, abs=1e-9)
    assert report.vss_absolute == pytest.approx(eev.objective - sp.objective, abs=1e-9)
    assert report.vss_absolute >= -1e-6
    assert report.vss_relative == pytest.approx(
        value_of_stochastic_solution(sp.objective, report.eev_objective)
    )
    assert report.statuses == {"sp": "optimal", "ev": "optimal", "eev": "optimal"}


def test_eev_fixes_first_stage(battery, vss_run):
    """Test fixed EEV columns hold the EV values in the EEV solution."""
    _, tree, _, _ = battery
    _, solutions = vss_run
    fixed = first_stage_values(solutions["ev"], solutions["sp"])
    values = solutions["eev"].result.values
    for column, value in fixed.items():
        assert values[column] == pytest.approx(value, abs=1e-6)
    investments = first_stage_values(
        solutions["ev"], solutions["sp"], fixing="investments"
    )
    assert set(investments) <= set(fixed)
    with pytest.raises(ValueError, match="fixing"):
        first_stage_values(solutions["ev"], solutions["sp"], fixing="some")


def test_eev_is_deterministic_across_workers(battery, vss_run):
    """Test repeated EEV runs with two workers give identical objectives."""
    instance, tree, paths, _ = battery
    report, _ = vss_run
    again, _ = compute_eev(instance, paths, tree, solve_options=EXACT, n_jobs=2)
    assert again.sp_objective == report.sp_objective
    assert again.eev_objective == report.eev_objective


def test_eev_infeasible_first_stage(battery, monkeypatch):
    """Test an infeasible EEV reports an infinite value and a diagnosis."""
    instance, tree, paths, _ = battery

    def _impossible(ev, sp, fixing="all"):
        column = next(
            c for c, v in enumerate(sp.program.catalog) if v.block == "h"
        )
        return {column: -5.0}

    monkeypatch.setattr("stram.analysis._vss.first_stage_values", _impossible)
    report, _ = compute_eev(instance, paths, tree, solve_options=EXACT, n_jobs=1)
    assert math.isinf(report.eev_objective)
    assert math.isinf(report.vss_absolute)
    assert report.vss_relative == 1.0
    assert "infeasible" in report.diagnosis
    assert report.statuses["eev"] == "infeasible"
    assert json.loads(json.dumps(report.to_dict()))["eev_objective"] == math.inf


def test_wait_and_see_bounds_sp(battery, vss_run):
    """Test the wait-and-see objective does not exceed the SP objective."""
    instance, tree, paths, _ = battery
    report, _ = vss_run
    bound = compute_wait_and_see(instance, paths, tree, solve_options=EXACT, n_jobs=1)
    assert set(bound.scenario_objectives) == set(tree.ids)
    assert bound.objective <= report.sp_objective + 1e-6


def test_carbon_sensitivity(battery):
    """Test carbon factors 0, 1 and 2 against the base run and each other."""
    instance, tree, paths, base = battery
    runs = carbon_sensitivity(
        instance, tree, [0, 1, 2], paths=paths, solve_options=EXACT, n_jobs=1
    )
    assert list(runs) == [0.0, 1.0, 2.0]

    assert (runs[0.0].report.transport_costs["carbon"] == 0.0).all()

    base_report = kpis(base, instance)
    assert runs[1.0].objective == base.objective
    assert runs[1.0].report.transport_costs.equals(base_report.transport_costs)
    assert runs[1.0].report.emissions.equals(base_report.emissions)

    totals = [runs[f].report.expected_total_emissions(instance) for f in runs]
    assert totals[0] >= totals[1] - 1e-9
    assert totals[1] >= totals[2] - 1e-9
    assert totals[0] > totals[2]

    frame = sensitivity_frame(runs)
    assert frame["factor"].unique().to_list() == [0.0, 1.0, 2.0]
    assert frame.height == 3 * len(tree.ids) * 2


@pytest.mark.parametrize("factors", [[], [1.0, -0.5], [math.nan]])
def test_carbon_sensitivity_rejects_factors(factors):
    """Test empty, negative and non-finite factors raise."""
    instance = make_toy_instance()
    with pytest.raises(ValueError, match="factors"):
        carbon_sensitivity(instance, generate_tree([], 2023), factors)


def test_static_single_period_equals_dynamic(two_node):
    """Test the static model of the only period is the dynamic model."""
    instance, _ = two_node
    comparison = static_run(
        instance, generate_tree([], 2023), 2023, solve_options=EXACT, n_jobs=1
    )
    assert comparison.static.objective == pytest.approx(
        comparison.dynamic.objective, abs=1e-9
    )
    assert comparison.dynamic_restricted_objective == pytest.approx(
        comparison.dynamic.objective, abs=1e-9
    )


def test_static_final_period(battery):
    """Test the static run of the final period against the restricted dynamic run."""
    instance, tree, paths, _ = battery
    comparison = static_run(
        instance, tree, 2028, paths=paths, solve_options=EXACT, n_jobs=1
    )
    restricted = comparison.dynamic_restricted_objective
    assert comparison.static.objective <= restricted + 1e-6
    assert restricted <= comparison.dynamic.objective + 1e-9
    assert comparison.static_report.transport_costs["year"].unique().to_list() == [
        2028
    ]
    side_by_side = comparison.mode_fuel()
    assert {"static_share", "dynamic_share"} <= set(side_by_side.columns)
    assert side_by_side["year"].unique().to_list() == [2028]


def test_static_rejects_other_years(battery):
    """Test a year that starts no period raises."""
    instance, tree, paths, _ = battery
    with pytest.raises(ValueError, match="period start year"):
        static_run(instance, tree, 2025, paths=paths)


def test_write_tables(battery, tmp_path):
    """Test the CSV tables and the solution summary on disk."""
    instance, tree, _, solution = battery
    report = kpis(solution, instance)
    curves = adoption_bound_table(instance, tree, n_jobs=1)
    written = write_kpi_tables(report, tmp_path / "kpi", curves=curves)
    assert set(written) == {
        "adoption_curves",
        "dispersion",
        "emissions",
        "investments",
        "mode_fuel",
        "scenario_costs",
        "transport_costs",
    }
    emissions = pl.read_csv(written["emissions"])
    assert emissions.columns == [
        "year",
        "scenario",
        "emissions_kt",
        "relative",
        "target",
    ]
    assert "max_share" in pl.read_csv(written["adoption_curves"]).columns
    investments = pl.read_csv(written["investments"])
    assert set(investments["category"]) == {"Charge", "Edge", "Node", "Upgrade"}

    write_solution_json(solution, tmp_path / "solution.json")
    summary = json.loads((tmp_path / "solution.json").read_text())
    assert summary["status"] == "optimal"
    assert set(summary["scenario_costs"]) == set(tree.ids)
    assert all(value != 0 for value in summary["variables"].values())


def test_solution_owner_mapping(battery):
    """Test first-stage columns are shared and later ones are per scenario."""
    _, tree, _, solution = battery
    assert isinstance(solution, Solution)
    assert solution.merged
    first, other = tree.ids[0], tree.ids[-1]
    assert solution.owner(2023, other) == first
    assert solution.owner(2028, other) == other
    assert solution.owner(None, other) == other
