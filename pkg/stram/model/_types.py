#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Instance-level domain types.

All types are frozen dataclasses. An :class:`Instance` is immutable after it has
been loaded, so it can be shared freely between threads and worker processes.

Arcs and edges are addressed by key tuples:

- an arc key is ``(origin, destination, mode, route)``;
- an edge key is ``(node_a, node_b, mode, route)`` with ``node_a < node_b``.
"""
import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "MODES",
    "ArcKey",
    "EdgeKey",
    "Node",
    "TerminalClass",
    "Arc",
    "EdgeExpansion",
    "ChargingOption",
    "UpgradeOption",
    "Edge",
    "Fuel",
    "FuelGroup",
    "VehicleType",
    "TimeStructure",
    "DemandTable",
    "CostModel",
    "NodeInvestment",
    "BassParams",
    "FleetParams",
    "Instance",
    "edge_key_of",
]

MODES: Tuple[str, ...] = ("rail", "road", "sea")

ArcKey = Tuple[str, str, str, int]
EdgeKey = Tuple[str, str, str, int]


def edge_key_of(arc_key: ArcKey) -> EdgeKey:
    """Return the undirected edge key of a directed arc key.

    Parameters
    ----------
    arc_key : tuple
        ``(origin, destination, mode, route)``.

    Returns
    -------
    tuple
        ``(node_a, node_b, mode, route)`` with the node pair sorted.

    Examples
    --------
    >>> from stram.model import edge_key_of
    >>> edge_key_of(("oslo", "bergen", "rail", 1))
    ('bergen', 'oslo', 'rail', 1)
    """
    origin, destination, mode, route = arc_key
    node_a, node_b = sorted((origin, destination))
    return (node_a, node_b, mode, route)


@dataclass(frozen=True)
class TerminalClass:
    """Terminal class c with the product groups it handles (P_c)."""

    id: str
    mode: str
    products: FrozenSet[str]


@dataclass(frozen=True)
class Node:
    """Network node with the terminal classes available per mode."""

    id: str
    name: str
    terminal_classes: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class Arc:
    """Directed arc a = (i, j, m, r) with its length and allowed fuels."""

    origin: str
    destination: str
    mode: str
    route: int
    length_km: float
    allowed_fuels: FrozenSet[str]

    @property
    def key(self) -> ArcKey:
        """Arc key ``(origin, destination, mode, route)``."""
        return (self.origin, self.destination, self.mode, self.route)

    @property
    def edge_key(self) -> EdgeKey:
        """Key of the undirected edge the arc belongs to."""
        return edge_key_of(self.key)


@dataclass(frozen=True)
class EdgeExpansion:
    """Capacity expansion option of a rail edge."""

    cost: float
    capacity_gain: float
    lead_periods: int = 0


@dataclass(frozen=True)
class ChargingOption:
    """Charging or filling infrastructure for one fuel on a road edge."""

    fuel: str
    base_capacity: float
    unit_cost: float
    lead_periods: int = 0


@dataclass(frozen=True)
class UpgradeOption:
    """Upgrade enabling one fuel on an edge, e.g. rail electrification."""

    fuel: str
    cost: float
    lead_periods: int = 0


@dataclass(frozen=True)
class Edge:
    """Undirected edge with capacity data and investment options."""

    node_a: str
    node_b: str
    mode: str
    route: int
    arcs: Tuple[ArcKey, ...]
    base_capacity: Optional[float] = None
    expansion: Optional[EdgeExpansion] = None
    charging: Tuple[ChargingOption, ...] = ()
    upgrades: Tuple[UpgradeOption, ...] = ()

    @property
    def key(self) -> EdgeKey:
        """Edge key ``(node_a, node_b, mode, route)``."""
        return (self.node_a, self.node_b, self.mode, self.route)

    def upgrade_for(self, fuel: str) -> Optional[UpgradeOption]:
        """Return the upgrade option for `fuel` if the edge has one."""
        for option in self.upgrades:
            if option.fuel == fuel:
                return option
        return None


@dataclass(frozen=True)
class Fuel:
    """Fuel technology, the modes using it and whether it is new."""

    id: str
    modes: FrozenSet[str]
    is_new: bool
    group: str


@dataclass(frozen=True)
class FuelGroup:
    """Group of fuels whose parameters deviate jointly across scenarios."""

    id: str
    varied_in_scenarios: bool


@dataclass(frozen=True)
class VehicleType:
    """Representative vehicle of a mode and the product groups it carries."""

    id: str
    mode: str
    carryable_products: FrozenSet[str]
    lifespan_years: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class TimeStructure:
    """Investment periods, the yearly horizon and the discount factor.

    Parameters
    ----------
    period_years : tuple of int
        Start year Y_t of every period, strictly increasing.
    horizon_end : int
        Last calendar year of the horizon.
    discount : float
        Yearly discount factor delta in (0, 1].
    """

    period_years: Tuple[int, ...]
    horizon_end: int
    discount: float

    @property
    def base_year(self) -> int:
        """First year of the horizon."""
        return self.period_years[0]

    @property
    def years(self) -> Tuple[int, ...]:
        """All calendar years of the horizon."""
        return tuple(range(self.base_year, self.horizon_end + 1))

    @property
    def periods(self) -> Tuple[int, ...]:
        """Period indices ``0 .. T``."""
        return tuple(range(len(self.period_years)))

    def period_end(self, t: int) -> int:
        """Return the first year after period `t` (Y_{t+1}, or horizon end + 1)."""
        if t + 1 < len(self.period_years):
            return self.period_years[t + 1]
        return self.horizon_end + 1

    def period_index(self, year: int) -> int:
        """Return the index of the period starting in `year`."""
        try:
            return self.period_years.index(year)
        except ValueError:
            raise ValueError(f"{year} is not a period start year.") from None

    def period_of_year(self, year: int) -> int:
        """Return the index of the period that contains `year`."""
        index = 0
        for t, start in enumerate(self.period_years):
            if start <= year:
                index = t
        return index


@dataclass(frozen=True)
class DemandTable:
    """Annual transport demand D_odpt in tonnes, keyed by (o, d, p, year)."""

    entries: Mapping[Tuple[str, str, str, int], float]

    def get(self, origin: str, destination: str, product: str, year: int) -> float:
        """Return the demand of one (o, d, p, year), 0 if absent."""
        return self.entries.get((origin, destination, product, year), 0.0)

    @cached_property
    def od_products(self) -> Tuple[Tuple[str, str, str], ...]:
        """Sorted (o, d, p) triples with positive demand in some year."""
        keys = {(o, d, p) for (o, d, p, _), amount in self.entries.items() if amount}
        return tuple(sorted(keys))

    def total(self, year: Optional[int] = None) -> float:
        """Return total demand, optionally restricted to one year."""
        return sum(
            amount
            for (_, _, _, y), amount in self.entries.items()
            if year is None or y == year
        )


@dataclass(frozen=True)
class CostModel:
    """Per tonne-kilometre costs and emissions, carbon prices and transfer costs.

    Parameters
    ----------
    cost_per_tkm : mapping
        (mode, fuel, product, year) to money per tonne-km.
    emission_per_tkm : mapping
        (mode, fuel, product, year) to kg CO2e per tonne-km.
    carbon_price : mapping
        Year to money per tonne CO2e, for every year of the horizon.
    transfer_cost : mapping
        (mode_from, mode_to, product) to money per tonne.
    empty_trip_cost_factor : float, default=1.0
        Empty-trip cost as a fraction of the loaded cost.
    empty_trip_emission_factor : float, default=0.8
        Empty-trip emissions as a fraction of the loaded emissions.
    """

    cost_per_tkm: Mapping[Tuple[str, str, str, int], float]
    emission_per_tkm: Mapping[Tuple[str, str, str, int], float]
    carbon_price: Mapping[int, float]
    transfer_cost: Mapping[Tuple[str, str, str], float]
    empty_trip_cost_factor: float = 1.0
    empty_trip_emission_factor: float = 0.8

    def base_transport_cost(
        self, arc: Arc, fuel: str, product: str, year: int
    ) -> float:
        """Return the base cost per tonne of moving `product` along `arc`."""
        return self.cost_per_tkm[(arc.mode, fuel, product, year)] * arc.length_km

    def emission_factor(self, arc: Arc, fuel: str, product: str, year: int) -> float:
        """Return kg CO2e per tonne of moving `product` along `arc`."""
        return self.emission_per_tkm[(arc.mode, fuel, product, year)] * arc.length_km

    def transfer(self, mode_from: str, mode_to: str, product: str) -> float:
        """Return the cost per tonne of a mode transfer, 0 for no mode change."""
        if mode_from == mode_to:
            return 0.0
        return self.transfer_cost[(mode_from, mode_to, product)]

    def scaled_carbon_price(self, factor: float) -> "CostModel":
        """Return a copy with every carbon price multiplied by `factor`."""
        prices = {year: price * factor for year, price in self.carbon_price.items()}
        return dataclasses.replace(self, carbon_price=prices)


@dataclass(frozen=True)
class NodeInvestment:
    """Terminal capacity and its expansion option for (node, class, mode)."""

    node: str
    terminal_class: str
    mode: str
    base_capacity: float
    cost: float = 0.0
    capacity_gain: float = 0.0
    lead_periods: int = 0


@dataclass(frozen=True)
class BassParams:
    """Bass diffusion parameters of a new mode-fuel combination.

    Innovation and imitation coefficients are piecewise constant: each piece is
    ``(from_year, value)`` and applies until the next piece starts.

    Parameters
    ----------
    mode : str
        Mode of the technology.
    fuel : str
        Fuel of the technology.
    fuel_group : str
        Group whose scenario deviations apply.
    start_year : int
        Market introduction year; adoption is zero up to it.
    potential_share : float
        Long-run market potential U in [0, 1].
    alpha : tuple of (int, float)
        Innovation coefficient pieces.
    beta : tuple of (int, float)
        Imitation coefficient pieces.
    """

    mode: str
    fuel: str
    fuel_group: str
    start_year: int
    potential_share: float
    alpha: Tuple[Tuple[int, float], ...]
    beta: Tuple[Tuple[int, float], ...]

    @staticmethod
    def _piece_value(pieces: Tuple[Tuple[int, float], ...], year: int) -> float:
        value = pieces[0][1]
        for from_year, piece in pieces:
            if from_year <= year:
                value = piece
        return value

    def base_alpha(self, year: int) -> float:
        """Return the base innovation coefficient in effect in `year`."""
        return self._piece_value(self.alpha, year)

    def base_beta(self, year: int) -> float:
        """Return the base imitation coefficient in effect in `year`."""
        return self._piece_value(self.beta, year)


@dataclass(frozen=True)
class FleetParams:
    """Fleet renewal parameters of a mode.

    Parameters
    ----------
    mode : str
        The mode.
    lifespan_years : float
        Representative vehicle lifespan N_m.
    max_modal_decrease : mapping
        Period start year to the largest allowed relative decrease rho_mt of modal
        transport work compared with the previous period.
    """

    mode: str
    lifespan_years: float
    max_modal_decrease: Mapping[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Instance:
    """Complete deterministic input of the freight model."""

    name: str
    money_unit: str
    nodes: Mapping[str, Node]
    arcs: Tuple[Arc, ...]
    edges: Mapping[EdgeKey, Edge]
    modes: Tuple[str, ...]
    fuels: Mapping[str, Fuel]
    fuel_groups: Mapping[str, FuelGroup]
    vehicle_types: Mapping[str, VehicleType]
    products: Tuple[str, ...]
    terminal_classes: Mapping[str, TerminalClass]
    time: TimeStructure
    demand: DemandTable
    costs: CostModel
    node_investments: Mapping[Tuple[str, str, str], NodeInvestment]
    adoption_params: Mapping[Tuple[str, str], BassParams]
    fleet: Mapping[str, FleetParams]
    base_year_fuel_mix: Mapping[Tuple[str, str], float]
    emission_targets: Mapping[int, float] = field(default_factory=dict)

    @cached_property
    def arc_by_key(self) -> Dict[ArcKey, Arc]:
        """Arcs indexed by key."""
        return {arc.key: arc for arc in self.arcs}

    def arcs_of_mode(self, mode: str) -> Tuple[Arc, ...]:
        """Return the arcs of `mode` in key order."""
        return tuple(arc for arc in self.arcs if arc.mode == mode)

    def fuels_of_mode(self, mode: str) -> Tuple[str, ...]:
        """Return the sorted fuel ids available on `mode`."""
        return tuple(sorted(f.id for f in self.fuels.values() if mode in f.modes))

    def new_fuels_of_mode(self, mode: str) -> Tuple[str, ...]:
        """Return the sorted new fuel ids available on `mode`."""
        return tuple(f for f in self.fuels_of_mode(mode) if self.fuels[f].is_new)

    def vehicle_types_of_mode(self, mode: str) -> Tuple[str, ...]:
        """Return the sorted vehicle type ids of `mode`."""
        return tuple(
            sorted(v.id for v in self.vehicle_types.values() if v.mode == mode)
        )

    def vehicle_for(self, mode: str, product: str) -> VehicleType:
        """Return the vehicle type of `mode` that carries `product`."""
        for vehicle_id in self.vehicle_types_of_mode(mode):
            vehicle = self.vehicle_types[vehicle_id]
            if product in vehicle.carryable_products:
                return vehicle
        raise KeyError(f"No {mode} vehicle type carries product {product!r}.")

    def with_carbon_factor(self, factor: float) -> "Instance":
        """Return a copy whose carbon prices are multiplied by `factor`."""
        return dataclasses.replace(self, costs=self.costs.scaled_carbon_price(factor))
