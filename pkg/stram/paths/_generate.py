#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Admissible path set generation over product, fuel and scenario cost variants."""
import logging
from typing import Dict, List, Mapping, Optional, Set, Tuple

from joblib import Parallel, delayed

from stram._config import get_config
from stram.model import (
    ArcKey,
    GeneralizedCost,
    Instance,
    PathGenerationError,
    assemble_generalized_cost,
)
from stram.paths._dijkstra import (
    compose_mode_sequence,
    mode_sequences,
    unimodal_cheapest,
)
from stram.paths._path import Path, PathSet
from stram.scenarios import ScenarioTree

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "generate_path_set",
    "path_cost",
    "path_transfer_cost",
    "reference_fuel",
]

logger = logging.getLogger(__name__)


def reference_fuel(instance: Instance, mode: str) -> str:
    """Return the fuel with the largest base-year share of `mode`, ties by id."""
    fuels = instance.fuels_of_mode(mode)
    shares = instance.base_year_fuel_mix
    return min(fuels, key=lambda f: (-shares.get((mode, f), 0.0), f))


def path_transfer_cost(instance: Instance, path: Path, product: str) -> float:
    """Return the summed transfer cost per tonne of `product` along `path`."""
    return sum(
        instance.costs.transfer(mode_from, mode_to, product)
        for _, mode_from, mode_to in path.transfers
    )


def path_cost(
    instance: Instance,
    path: Path,
    product: str,
    fuels: Mapping[ArcKey, str],
    cost: GeneralizedCost,
    year: int,
) -> float:
    """Return the cost per tonne of moving `product` along `path`.

    Parameters
    ----------
    instance : Instance
        Instance supplying transfer costs.
    path : Path
        The path.
    product : str
        Product group.
    fuels : mapping
        Arc key to the fuel used on it.
    cost : GeneralizedCost
        Generalized cost tables of one scenario.
    year : int
        Calendar year of the cost tables.

    Returns
    -------
    float
        Sum of the arc generalized costs plus the transfer costs.

    Raises
    ------
    PathGenerationError
        If an arc has no fuel or the fuel is not allowed on it.

    Examples
    --------
    >>> from stram.model import assemble_generalized_cost
    >>> from stram.paths import Path, path_cost
    >>> from stram.utils._testing import make_toy_instance
    >>> instance = make_toy_instance(
    ...     arcs=(("a", "b", "road", 200.0), ("b", "c", "sea", 300.0)),
    ...     transfer_cost=0.5,
    ... )
    >>> path = Path("k0", (("a", "b", "road", 1), ("b", "c", "sea", 1)))
    >>> fuels = {path.arcs[0]: "Diesel", path.arcs[1]: "HFO"}
    >>> cost = assemble_generalized_cost(instance)
    >>> round(path_cost(instance, path, "p1", fuels, cost, 2023), 6)
    5.5
    """
    total = 0.0
    for key in path.arcs:
        fuel = fuels.get(key)
        if fuel is None or fuel not in instance.arc_by_key[key].allowed_fuels:
            raise PathGenerationError(f"Fuel {fuel!r} is not allowed on arc {key}.")
        total += cost.total(key, fuel, product, year)
    return total + path_transfer_cost(instance, path, product)


def _variant_arc_costs(
    instance: Instance,
    cost: GeneralizedCost,
    product: str,
    year: int,
    mode_star: str,
    fuel_star: str,
) -> Dict[ArcKey, float]:
    costs: Dict[ArcKey, float] = {}
    for arc in instance.arcs:
        if arc.mode == mode_star:
            if fuel_star in arc.allowed_fuels:
                costs[arc.key] = cost.total(arc.key, fuel_star, product, year)
            continue
        fuel = reference_fuel(instance, arc.mode)
        if fuel in arc.allowed_fuels:
            costs[arc.key] = cost.total(arc.key, fuel, product, year)
        elif arc.allowed_fuels:
            costs[arc.key] = min(
                cost.total(arc.key, f, product, year) for f in arc.allowed_fuels
            )
    return costs


def _scenario_routes(
    instance: Instance,
    tree: ScenarioTree,
    scenario: str,
    product: str,
    max_modes: int,
) -> Set[Tuple[ArcKey, ...]]:
    """Cheapest routes of every (mode, fuel) variant of one scenario and product."""
    year = instance.time.period_years[0]
    multiplier = tree.cost_multiplier(scenario)
    branch_year = tree.branch_year

    def _at_branch(group: str, _: int) -> float:
        return multiplier(group, branch_year)

    cost = assemble_generalized_cost(instance, _at_branch, years=(year,))
    sequences = mode_sequences(instance.modes, max_modes)
    nodes = sorted(instance.nodes)

    def _transfer(mode_from: str, mode_to: str) -> float:
        return instance.costs.transfer(mode_from, mode_to, product)

    routes: Set[Tuple[ArcKey, ...]] = set()
    for mode_star in instance.modes:
        for fuel_star in instance.fuels_of_mode(mode_star):
            arc_cost = _variant_arc_costs(
                instance, cost, product, year, mode_star, fuel_star
            )
            tables = {
                mode: unimodal_cheapest(instance.arcs, mode, arc_cost)
                for mode in instance.modes
            }
            memo: Dict = {}
            for origin in nodes:
                for destination in nodes:
                    if origin == destination:
                        continue
                    for sequence in sequences:
                        best = compose_mode_sequence(
                            origin, destination, sequence, tables, _transfer, memo
                        )
                        if best is not None:
                            routes.add(best[1])
    return routes


def generate_path_set(
    instance: Instance,
    tree: ScenarioTree,
    max_modes: Optional[int] = None,
    n_jobs: Optional[int] = None,
) -> PathSet:
    """Generate the admissible path set of an instance.

    For every product, scenario and (mode, fuel) pair, arc costs are taken at the
    first period with the scenario's deviations at the branch year. The chosen
    mode uses the chosen fuel; other modes use their largest base-year fuel. The
    cheapest path of every origin, destination and mode sequence is kept.

    Parameters
    ----------
    instance : Instance
        The instance.
    tree : ScenarioTree
        Scenarios whose cost deviations produce variants.
    max_modes : int, default=None
        Longest mode sequence; the configured ``max_modes`` if None.
    n_jobs : int, default=None
        Parallel workers over (scenario, product); the configured value if None.

    Returns
    -------
    PathSet
        Deduplicated paths sorted by origin, destination and arc sequence, with
        ids ``k0``, ``k1``, ...

    Raises
    ------
    PathGenerationError
        If some demand has no connecting path.

    Examples
    --------
    >>> from stram.paths import generate_path_set
    >>> from stram.scenarios import generate_tree
    >>> from stram.utils._testing import make_toy_instance
    >>> paths = generate_path_set(make_toy_instance(), generate_tree([], 2023))
    >>> [path.arcs for path in paths]
    [(('a', 'b', 'road', 1),), (('b', 'a', 'road', 1),)]
    """
    config = get_config()
    if max_modes is None:
        max_modes = config["max_modes"]
    if n_jobs is None:
        n_jobs = config["n_jobs"]

    batches = Parallel(n_jobs=n_jobs)(
        delayed(_scenario_routes)(instance, tree, scenario, product, int(max_modes))
        for scenario in tree.ids
        for product in instance.products
    )
    routes = sorted(
        set().union(*batches),
        key=lambda route: ((route[0][0], route[-1][1]), route),
    )
    paths = PathSet(tuple(Path(f"k{i}", route) for i, route in enumerate(routes)))

    for origin, destination, product in instance.demand.od_products:
        if (origin, destination) not in paths.index_by_od:
            msg = f"unconnected demand from {origin!r} to {destination!r} "
            msg += f"for product {product!r}."
            raise PathGenerationError(msg)

    logger.info(
        "Generated %d paths (%d unimodal) for %d origin-destination pairs",
        len(paths),
        len(paths.unimodal),
        len(paths.index_by_od),
    )
    return paths
