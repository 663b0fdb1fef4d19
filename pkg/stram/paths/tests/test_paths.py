#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Test path generation, path costs and the path file format."""
import networkx as nx
import numpy as np
import pytest

from stram import config_context
from stram.datasets import desk_instance_path, load_desk_instance
from stram.model import (
    Arc,
    InstanceError,
    PathGenerationError,
    assemble_generalized_cost,
)
from stram.paths import (
    Path,
    PathSet,
    compose_mode_sequence,
    generate_path_set,
    mode_sequences,
    path_cost,
    read_paths,
    reference_fuel,
    unimodal_cheapest,
    write_paths,
)
from stram.scenarios import generate_tree, load_scenario_tree
from stram.utils._testing import make_toy_instance

__author__ = ["stram-developers"]

FUELS = frozenset({"Diesel"})
MODES = ("rail", "road", "sea")


def _random_arcs(seed, n_nodes=6, n_arcs=14, modes=MODES):
    rng = np.random.default_rng(seed)
    nodes = [f"n{i}" for i in range(n_nodes)]
    arcs, costs = {}, {}
    while len(arcs) < n_arcs:
        i, j = rng.choice(n_nodes, size=2, replace=False)
        mode = modes[rng.integers(len(modes))]
        arc = Arc(nodes[i], nodes[j], mode, 1, 1.0, FUELS)
        if arc.key not in arcs:
            arcs[arc.key] = arc
            costs[arc.key] = float(rng.integers(1, 20))
    return list(arcs.values()), costs


def test_path_rejects_broken_chain():
    """Test a path whose arcs do not connect is rejected."""
    with pytest.raises(ValueError, match="does not start"):
        Path("k0", (("a", "b", "road", 1), ("c", "d", "road", 1)))


def test_path_properties():
    """Test mode sequence, transfers and visited nodes of a path."""
    path = Path(
        "k0",
        (
            ("a", "b", "road", 1),
            ("b", "c", "road", 1),
            ("c", "d", "sea", 1),
            ("d", "e", "rail", 1),
        ),
    )
    assert path.od == ("a", "e")
    assert path.nodes == ("a", "b", "c", "d", "e")
    assert path.mode_sequence == ("road", "sea", "rail")
    assert path.transfers == (("c", "road", "sea"), ("d", "sea", "rail"))
    assert not path.is_unimodal


def test_path_set_indices():
    """Test arc, unimodal and terminal indices agree with the paths."""
    paths = PathSet(
        (
            Path("k0", (("a", "b", "road", 1),)),
            Path("k1", (("a", "c", "rail", 1), ("c", "b", "road", 1))),
            Path("k2", (("a", "c", "rail", 1),)),
        )
    )
    assert paths.index_by_arc[("a", "c", "rail", 1)] == ("k1", "k2")
    assert paths.unimodal == ("k0", "k2")
    assert paths.unimodal_by_mode == {"road": ("k0",), "rail": ("k2",)}
    assert paths.terminal_usage[("a", "rail")] == ("k1", "k2")
    assert paths.terminal_usage[("c", "rail")] == ("k1", "k2")
    assert paths.terminal_usage[("c", "road")] == ("k1",)
    assert ("c", "sea") not in paths.terminal_usage


def test_unimodal_single_arc():
    """Test a one-arc network yields that arc."""
    arc = Arc("A", "B", "road", 1, 1.0, FUELS)
    table = unimodal_cheapest([arc], "road", {arc.key: 5.0})
    assert table == {("A", "B"): (5.0, (arc.key,))}


def test_unimodal_ignores_other_modes_and_missing_costs():
    """Test arcs of other modes and arcs without costs are not used."""
    road = Arc("A", "B", "road", 1, 1.0, FUELS)
    rail = Arc("B", "C", "rail", 1, 1.0, FUELS)
    other = Arc("B", "C", "road", 1, 1.0, FUELS)
    table = unimodal_cheapest([road, rail, other], "road", {road.key: 1.0})
    assert set(table) == {("A", "B")}


def test_unimodal_negative_cost_raises():
    """Test negative arc costs are rejected."""
    arc = Arc("A", "B", "road", 1, 1.0, FUELS)
    with pytest.raises(PathGenerationError, match="Negative"):
        unimodal_cheapest([arc], "road", {arc.key: -1.0})


def test_unimodal_equal_costs_break_ties_by_arc_keys():
    """Test equal-cost routes resolve to the lexicographically smallest."""
    arcs = [
        Arc("A", "C", "road", 1, 1.0, FUELS),
        Arc("C", "D", "road", 1, 1.0, FUELS),
        Arc("A", "B", "road", 1, 1.0, FUELS),
        Arc("B", "D", "road", 1, 1.0, FUELS),
    ]
    costs = {arc.key: 1.0 for arc in arcs}
    _, route = unimodal_cheapest(arcs, "road", costs)[("A", "D")]
    assert route == (("A", "B", "road", 1), ("B", "D", "road", 1))


@pytest.mark.parametrize("seed", range(100))
def test_unimodal_matches_networkx(seed):
    """Test all-pairs costs equal networkx Dijkstra distances."""
    arcs, costs = _random_arcs(seed, n_nodes=8, n_arcs=20)
    for mode in MODES:
        graph = nx.DiGraph()
        for arc in arcs:
            if arc.mode == mode:
                graph.add_edge(arc.origin, arc.destination, weight=costs[arc.key])
        expected = {
            (o, d): length
            for o, lengths in nx.all_pairs_dijkstra_path_length(graph)
            for d, length in lengths.items()
            if o != d
        }
        table = unimodal_cheapest(arcs, mode, costs)
        assert set(table) == set(expected)
        for pair, (cost, route) in table.items():
            assert cost == pytest.approx(expected[pair])
            assert sum(costs[key] for key in route) == pytest.approx(cost)


@pytest.mark.parametrize("seed", range(100))
def test_composition_matches_enumeration(seed):
    """Test composed paths are no dearer than any enumerated path of the sequence."""
    arcs, costs = _random_arcs(seed, n_nodes=5 + seed % 4, n_arcs=12 + seed % 9)
    graph = nx.MultiDiGraph()
    for arc in arcs:
        graph.add_edge(arc.origin, arc.destination, key=arc.key)
    tables = {m: unimodal_cheapest(arcs, m, costs) for m in MODES}

    def _transfer(mode_from, mode_to):
        return 0.5

    memo = {}
    nodes = sorted(graph.nodes)
    for origin in nodes:
        for destination in nodes:
            if origin == destination:
                continue
            enumerated = {}
            for edges in nx.all_simple_edge_paths(graph, origin, destination):
                route = Path("x", tuple(key for _, _, key in edges))
                cost = sum(costs[key] for key in route.arcs)
                cost += 0.5 * len(route.transfers)
                sequence = route.mode_sequence
                enumerated[sequence] = min(cost, enumerated.get(sequence, np.inf))
            for sequence in mode_sequences(MODES, 3):
                best = compose_mode_sequence(
                    origin, destination, sequence, tables, _transfer, memo
                )
                if sequence in enumerated:
                    assert best is not None
                    assert best[0] <= enumerated[sequence] + 1e-9
                if best is None:
                    continue
                route = Path("y", best[1])
                assert route.mode_sequence == sequence
                recomputed = sum(costs[key] for key in route.arcs)
                recomputed += 0.5 * len(route.transfers)
                assert recomputed == pytest.approx(best[0])
                if len(set(route.nodes)) == len(route.nodes):
                    assert best[0] == pytest.approx(enumerated[sequence])


def test_mode_sequences_without_repeats():
    """Test sequence enumeration skips consecutive repeated modes."""
    sequences = mode_sequences(["rail", "road", "sea"], 3)
    assert len(sequences) == 3 + 6 + 12
    assert all(s[i] != s[i + 1] for s in sequences for i in range(len(s) - 1))
    with pytest.raises(ValueError):
        mode_sequences(["road"], 4)


def test_path_cost_sums_arcs_and_transfers():
    """Test a road and sea path costs 2.0 + 3.0 plus a 0.5 transfer."""
    instance = make_toy_instance(
        arcs=(("a", "b", "road", 200.0), ("b", "c", "sea", 300.0)),
        transfer_cost=0.5,
    )
    cost = assemble_generalized_cost(instance)
    path = Path("k0", (("a", "b", "road", 1), ("b", "c", "sea", 1)))
    fuels = {path.arcs[0]: "Diesel", path.arcs[1]: "HFO"}
    assert path_cost(instance, path, "p1", fuels, cost, 2023) == pytest.approx(5.5)

    unimodal = Path("k1", (("a", "b", "road", 1),))
    value = path_cost(instance, unimodal, "p1", fuels, cost, 2023)
    assert value == pytest.approx(2.0)

    with pytest.raises(PathGenerationError, match="not allowed"):
        path_cost(instance, unimodal, "p1", {unimodal.arcs[0]: "HFO"}, cost, 2023)


def test_path_cost_includes_carbon():
    """Test the carbon component enters the path cost."""
    instance = make_toy_instance(carbon_price=1000.0)
    cost = assemble_generalized_cost(instance)
    path = Path("k0", (("a", "b", "road", 1),))
    value = path_cost(instance, path, "p1", {path.arcs[0]: "Diesel"}, cost, 2023)
    # 100 km at 0.01 plus 100 km at 0.05 kg and 1 per kg
    assert value == pytest.approx(1.0 + 5.0)


def test_generate_two_node_network():
    """Test a two-node network yields exactly one path per direction."""
    tree = generate_tree([], 2023)
    paths = generate_path_set(make_toy_instance(bidirectional=False), tree)
    assert [path.arcs for path in paths] == [(("a", "b", "road", 1),)]
    assert [path.id for path in paths] == ["k0"]


def test_generate_fuel_variants_add_paths():
    """Test a cheap new fuel makes another transfer node optimal."""
    arcs = (
        ("a", "b", "road", 100.0),
        ("a", "c", "road", 300.0),
        ("b", "d", "sea", 400.0),
        ("c", "d", "sea", 100.0),
    )
    tree = generate_tree([], 2023)
    diesel_only = make_toy_instance(
        arcs=arcs, cost_per_tkm={("road", "Diesel", "p1"): 0.03}
    )
    routes = {path.arcs for path in generate_path_set(diesel_only, tree)}
    via_b = (("a", "b", "road", 1), ("b", "d", "sea", 1))
    via_c = (("a", "c", "road", 1), ("c", "d", "sea", 1))
    assert via_b in routes
    assert via_c not in routes

    with_battery = make_toy_instance(
        arcs=arcs,
        new_fuels={("road", "Battery"): (2023, 1.0, 0.01, 0.4)},
        cost_per_tkm={
            ("road", "Diesel", "p1"): 0.03,
            ("road", "Battery", "p1"): 0.001,
        },
    )
    assert reference_fuel(with_battery, "road") == "Diesel"
    routes = {path.arcs for path in generate_path_set(with_battery, tree)}
    assert via_b in routes
    assert via_c in routes


def test_generate_respects_max_modes():
    """Test one-mode generation only yields unimodal paths."""
    instance = make_toy_instance(
        arcs=(("a", "b", "road", 100.0), ("b", "c", "sea", 100.0)),
        demand={("a", "b", "p1"): 10.0},
    )
    tree = generate_tree([], 2023)
    paths = generate_path_set(instance, tree, max_modes=1)
    assert len(paths.unimodal) == len(paths)
    paths = generate_path_set(instance, tree, max_modes=2)
    assert any(path.mode_sequence == ("road", "sea") for path in paths)


def test_generate_unconnected_demand_raises():
    """Test demand between disconnected nodes is reported."""
    instance = make_toy_instance(
        arcs=(("a", "b", "road", 100.0), ("c", "d", "road", 100.0)),
        demand={("a", "d", "p1"): 5.0},
    )
    with pytest.raises(PathGenerationError, match="unconnected demand"):
        generate_path_set(instance, generate_tree([], 2023))


def test_generate_is_deterministic_across_workers():
    """Test repeated and parallel generation give identical path sets."""
    instance = load_desk_instance()
    tree = load_scenario_tree(desk_instance_path())
    with config_context(n_jobs=1):
        first = generate_path_set(instance, tree)
        second = generate_path_set(instance, tree)
    parallel = generate_path_set(instance, tree, n_jobs=2)
    assert first == second
    assert [(p.id, p.arcs) for p in parallel] == [(p.id, p.arcs) for p in first]


def test_desk_paths_serve_all_demand():
    """Test the bundled instance connects every demanded pair within two modes."""
    instance = load_desk_instance()
    paths = generate_path_set(instance, load_scenario_tree(desk_instance_path()))
    for origin, destination, _ in instance.demand.od_products:
        assert (origin, destination) in paths.index_by_od
    assert all(len(path.mode_sequence) <= 2 for path in paths)
    assert len({path.arcs for path in paths}) == len(paths)


def test_path_file_round_trip(tmp_path):
    """Test written paths read back with ids and arc order."""
    paths = PathSet(
        (
            Path("k0", (("a", "b", "road", 1),)),
            Path("k1", (("a", "c", "rail", 1), ("c", "b", "road", 2))),
        )
    )
    write_paths(paths, tmp_path / "paths.csv")
    assert read_paths(tmp_path / "paths.csv") == paths


def test_read_paths_errors(tmp_path):
    """Test missing files and broken chains raise instance errors."""
    with pytest.raises(InstanceError, match="missing"):
        read_paths(tmp_path / "paths.csv")
    (tmp_path / "paths.csv").write_text(
        "path_id,position,origin,destination,mode,route\n"
        "k0,0,a,b,road,1\n"
        "k0,1,c,d,road,1\n"
    )
    with pytest.raises(InstanceError, match="does not start"):
        read_paths(tmp_path / "paths.csv")
