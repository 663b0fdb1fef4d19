#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Small in-memory instances for tests and examples."""
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from stram.model import (
    Arc,
    BassParams,
    CostModel,
    DemandTable,
    Edge,
    EdgeExpansion,
    FleetParams,
    Fuel,
    FuelGroup,
    Instance,
    Node,
    NodeInvestment,
    TerminalClass,
    TimeStructure,
    VehicleType,
    derive_edges,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["make_toy_instance"]

ToyArc = Tuple[str, str, str, float]
ToyBass = Tuple[int, float, float, float]
PerTkm = Union[float, Mapping[Tuple[str, str, str], float]]

_ESTABLISHED_FUEL = {"rail": "Diesel", "road": "Diesel", "sea": "HFO"}


def _lookup(table: PerTkm, mode: str, fuel: str, product: str, default: float) -> float:
    if isinstance(table, (int, float)):
        return float(table)
    return float(table.get((mode, fuel, product), default))


def make_toy_instance(
    arcs: Sequence[ToyArc] = (("a", "b", "road", 100.0),),
    demand: Optional[Mapping[Tuple[str, str, str], float]] = None,
    products: Sequence[str] = ("p1",),
    new_fuels: Optional[Mapping[Tuple[str, str], ToyBass]] = None,
    period_years: Sequence[int] = (2023,),
    horizon_end: Optional[int] = None,
    discount: float = 1.0,
    cost_per_tkm: PerTkm = 0.01,
    emission_per_tkm: PerTkm = 0.05,
    carbon_price: float = 0.0,
    transfer_cost: float = 1.0,
    bidirectional: bool = True,
    rail_capacity: Optional[float] = None,
    rail_expansion: Optional[EdgeExpansion] = None,
    terminal_capacity: Optional[Tuple[float, float, float]] = None,
    lifespan_years: float = 10.0,
    max_modal_decrease: float = 1.0,
    demand_growth: float = 0.0,
    name: str = "toy",
) -> Instance:
    """Build a small valid instance in memory.

    Parameters
    ----------
    arcs : sequence of (origin, destination, mode, length_km)
        Network arcs, all on route 1.
    demand : mapping, default=None
        ``(origin, destination, product)`` to tonnes per year in the first period.
        Defaults to 10 tonnes from the first arc's origin to its destination.
    products : sequence of str, default=("p1",)
        Product groups; one vehicle type per mode carries all of them.
    new_fuels : mapping, default=None
        ``(mode, fuel)`` to ``(start_year, potential_share, alpha, beta)``. Every
        mode also has its established fuel (Diesel, or HFO at sea).
    period_years : sequence of int, default=(2023,)
        Period start years.
    horizon_end : int, default=None
        Last year of the horizon; defaults to the last period year.
    discount : float, default=1.0
        Yearly discount factor.
    cost_per_tkm, emission_per_tkm : float or mapping, default=0.01 and 0.05
        Constant values, or ``(mode, fuel, product)`` lookups defaulting to 0.01
        money and 0.05 kg per tonne-km.
    carbon_price : float, default=0.0
        Carbon price in every year.
    transfer_cost : float, default=1.0
        Cost per tonne of every mode change.
    bidirectional : bool, default=True
        Whether the reverse of every arc is added.
    rail_capacity : float, default=None
        Base capacity of every rail edge.
    rail_expansion : EdgeExpansion, default=None
        Expansion option of every rail edge.
    terminal_capacity : tuple of float, default=None
        ``(base_capacity, cost, capacity_gain)`` of a terminal on every rail and sea
        node.
    lifespan_years : float, default=10.0
        Vehicle lifespan of every mode.
    max_modal_decrease : float, default=1.0
        Largest relative decrease of modal transport work between periods.
    demand_growth : float, default=0.0
        Relative demand growth per period.
    name : str, default="toy"
        Instance name.

    Returns
    -------
    Instance
        An instance passing :func:`stram.model.validate_instance`.

    Examples
    --------
    >>> from stram.model import validate_instance
    >>> from stram.utils._testing import make_toy_instance
    >>> validate_instance(make_toy_instance()).errors
    []
    """
    new_fuels = dict(new_fuels or {})
    if demand is None:
        first = arcs[0]
        demand = {(first[0], first[1], products[0]): 10.0}
    period_years = tuple(period_years)
    time = TimeStructure(
        period_years=period_years,
        horizon_end=period_years[-1] if horizon_end is None else horizon_end,
        discount=discount,
    )

    modes = tuple(sorted({arc[2] for arc in arcs}))
    mode_fuels: Dict[str, List[str]] = {m: [_ESTABLISHED_FUEL[m]] for m in modes}
    for mode, fuel in sorted(new_fuels):
        mode_fuels[mode].append(fuel)
    fuel_modes: Dict[str, set] = {}
    for mode, fuels_of_mode in mode_fuels.items():
        for fuel in fuels_of_mode:
            fuel_modes.setdefault(fuel, set()).add(mode)
    new_ids = {fuel for _, fuel in new_fuels}
    fuels = {
        fuel: Fuel(
            fuel,
            frozenset(fuel_modes[fuel]),
            fuel in new_ids,
            fuel if fuel in new_ids else "Fossil",
        )
        for fuel in sorted(fuel_modes)
    }
    fuel_groups = {
        fuel.group: FuelGroup(fuel.group, fuel.is_new) for fuel in fuels.values()
    }

    arc_list: List[Arc] = []
    for origin, destination, mode, length in arcs:
        pairs = [(origin, destination)]
        if bidirectional:
            pairs.append((destination, origin))
        for i, j in pairs:
            arc_list.append(
                Arc(i, j, mode, 1, float(length), frozenset(mode_fuels[mode]))
            )
    arc_list.sort(key=lambda arc: arc.key)
    edges = {
        key: Edge(
            key[0],
            key[1],
            key[2],
            key[3],
            arcs=arc_keys,
            base_capacity=rail_capacity if key[2] == "rail" else None,
            expansion=rail_expansion if key[2] == "rail" else None,
        )
        for key, arc_keys in derive_edges(arc_list).items()
    }

    node_ids = sorted(
        {arc.origin for arc in arc_list} | {arc.destination for arc in arc_list}
    )
    terminal_classes: Dict[str, TerminalClass] = {}
    node_investments: Dict[Tuple[str, str, str], NodeInvestment] = {}
    node_classes: Dict[str, Dict[str, Tuple[str, ...]]] = {n: {} for n in node_ids}
    if terminal_capacity is not None:
        base, cost, gain = terminal_capacity
        for mode in ("rail", "sea"):
            if mode not in modes:
                continue
            class_id = f"{mode}_terminal"
            terminal_classes[class_id] = TerminalClass(
                class_id, mode, frozenset(products)
            )
            for arc in arc_list:
                if arc.mode != mode:
                    continue
                for node in (arc.origin, arc.destination):
                    node_investments[(node, class_id, mode)] = NodeInvestment(
                        node, class_id, mode, base, cost, gain, 0
                    )
                    node_classes[node][mode] = (class_id,)
    nodes = {n: Node(n, n.upper(), node_classes[n]) for n in node_ids}

    vehicle_types = {
        f"{mode}_vehicle": VehicleType(
            f"{mode}_vehicle",
            mode,
            frozenset(products),
            {fuel: lifespan_years for fuel in mode_fuels[mode]},
        )
        for mode in modes
    }

    entries: Dict[Tuple[str, str, str, int], float] = {}
    for t, year in enumerate(period_years):
        for (origin, destination, product), amount in demand.items():
            entries[(origin, destination, product, year)] = amount * (
                1.0 + demand_growth
            ) ** t

    cost_table: Dict[Tuple[str, str, str, int], float] = {}
    emission_table: Dict[Tuple[str, str, str, int], float] = {}
    for mode in modes:
        for fuel in mode_fuels[mode]:
            for product in products:
                for year in period_years:
                    key = (mode, fuel, product, year)
                    cost_table[key] = _lookup(cost_per_tkm, mode, fuel, product, 0.01)
                    emission_table[key] = _lookup(
                        emission_per_tkm, mode, fuel, product, 0.05
                    )
    transfers = {
        (m1, m2, p): transfer_cost
        for m1 in modes
        for m2 in modes
        if m1 != m2
        for p in products
    }
    costs = CostModel(
        cost_per_tkm=cost_table,
        emission_per_tkm=emission_table,
        carbon_price={year: carbon_price for year in time.years},
        transfer_cost=transfers,
    )

    adoption_params = {
        (mode, fuel): BassParams(
            mode,
            fuel,
            fuel,
            start,
            share,
            ((period_years[0], alpha),),
            ((period_years[0], beta),),
        )
        for (mode, fuel), (start, share, alpha, beta) in sorted(new_fuels.items())
    }
    fleet = {
        mode: FleetParams(
            mode,
            lifespan_years,
            {year: max_modal_decrease for year in period_years[1:]},
        )
        for mode in modes
    }
    base_mix = {
        (mode, fuel): 1.0 if fuel == _ESTABLISHED_FUEL[mode] else 0.0
        for mode in modes
        for fuel in mode_fuels[mode]
    }

    return Instance(
        name=name,
        money_unit="NOK",
        nodes=nodes,
        arcs=tuple(arc_list),
        edges=edges,
        modes=modes,
        fuels=fuels,
        fuel_groups=dict(sorted(fuel_groups.items())),
        vehicle_types=vehicle_types,
        products=tuple(sorted(products)),
        terminal_classes=terminal_classes,
        time=time,
        demand=DemandTable(dict(sorted(entries.items()))),
        costs=costs,
        node_investments=node_investments,
        adoption_params=adoption_params,
        fleet=fleet,
        base_year_fuel_mix=base_mix,
        emission_targets={period_years[0]: 100.0},
    )
