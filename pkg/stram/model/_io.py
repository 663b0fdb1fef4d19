#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Read an instance directory into an :class:`~stram.model.Instance`.

Every CSV is read with :mod:`polars` as text and converted field by field so that
errors can name the file and the 1-based data row.
"""
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import polars as pl

from stram.model._errors import InstanceError
from stram.model._types import (
    Arc,
    BassParams,
    ChargingOption,
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
    UpgradeOption,
    VehicleType,
    edge_key_of,
)
from stram.model._validate import derive_edges

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["load_instance", "INSTANCE_FILES"]

logger = logging.getLogger(__name__)

INSTANCE_FILES: Dict[str, Tuple[str, ...]] = {
    "nodes.csv": ("node", "name"),
    "arcs.csv": ("origin", "destination", "mode", "route", "length_km", "fuels"),
    "edges.csv": (
        "node_a",
        "node_b",
        "mode",
        "route",
        "base_capacity",
        "expansion_cost",
        "expansion_gain",
        "expansion_lead",
    ),
    "modes.csv": ("mode", "lifespan_years"),
    "fuels.csv": (
        "mode",
        "fuel",
        "fuel_group",
        "group_varied",
        "is_new",
        "lifespan_years",
        "base_share",
    ),
    "vehicles.csv": ("vehicle_type", "mode", "products"),
    "demand.csv": ("origin", "destination", "product", "year", "amount"),
    "costs.csv": ("mode", "fuel", "product", "year", "cost_per_tkm"),
    "emissions.csv": ("mode", "fuel", "product", "year", "kg_co2e_per_tkm"),
    "transfers.csv": ("mode_from", "mode_to", "product", "cost_per_tonne"),
    "terminals.csv": ("terminal_class", "mode", "products"),
    "investments.csv": (
        "kind",
        "node_a",
        "node_b",
        "mode",
        "route",
        "terminal_class",
        "fuel",
        "base_capacity",
        "cost",
        "capacity_gain",
        "lead_periods",
    ),
    "adoption.csv": (
        "mode",
        "fuel",
        "start_year",
        "potential_share",
        "from_year",
        "alpha",
        "beta",
    ),
    "fleet.csv": ("mode", "year", "max_modal_decrease"),
    "time.csv": ("year", "is_period", "carbon_price"),
}

_OPTIONAL_FILES = ("investments.csv", "transfers.csv", "terminals.csv")
_WEIGHT_SCALE = {"tonnes": 1.0, "kilotonnes": 1e3, "megatonnes": 1e6}

Row = Dict[str, Optional[str]]


class _Table:
    """Rows of one CSV file with typed field accessors."""

    def __init__(self, name: str, rows: List[Row]) -> None:
        self.name = name
        self.rows = rows

    def __iter__(self):
        return iter(enumerate(self.rows, start=1))

    def _raw(self, row: Row, column: str, number: int) -> Optional[str]:
        value = row.get(column)
        if value is None:
            return None
        value = value.strip()
        return value if value else None

    def text(self, row: Row, column: str, number: int) -> str:
        value = self._raw(row, column, number)
        if value is None:
            msg = f"Missing value in column {column!r}."
            raise InstanceError(msg, self.name, number)
        return value

    def number(
        self,
        row: Row,
        column: str,
        number: int,
        default: Optional[float] = None,
        cast: Callable[[str], Any] = float,
    ) -> Any:
        value = self._raw(row, column, number)
        if value is None:
            if default is not None:
                return default
            msg = f"Missing value in column {column!r}."
            raise InstanceError(msg, self.name, number)
        try:
            return cast(value)
        except ValueError:
            msg = f"Column {column!r} holds {value!r}, expected a number."
            raise InstanceError(msg, self.name, number) from None

    def optional_number(self, row: Row, column: str, number: int) -> Optional[float]:
        if self._raw(row, column, number) is None:
            return None
        return self.number(row, column, number)

    def integer(
        self, row: Row, column: str, number: int, default: Optional[int] = None
    ) -> int:
        value = self.number(row, column, number, default=default, cast=float)
        if value != int(value):
            msg = f"Column {column!r} holds {value!r}, expected an integer."
            raise InstanceError(msg, self.name, number)
        return int(value)

    def flag(self, row: Row, column: str, number: int) -> bool:
        value = self.text(row, column, number).lower()
        if value in ("1", "true", "yes"):
            return True
        if value in ("0", "false", "no"):
            return False
        msg = f"Column {column!r} holds {value!r}, expected a boolean."
        raise InstanceError(msg, self.name, number)

    def items(self, row: Row, column: str, number: int) -> Tuple[str, ...]:
        value = self._raw(row, column, number)
        if value is None:
            return ()
        return tuple(sorted(item.strip() for item in value.split(";") if item.strip()))


def _read_table(directory: Path, name: str) -> Optional[_Table]:
    path = directory / name
    if not path.exists():
        if name in _OPTIONAL_FILES:
            return None
        raise InstanceError("Required file is missing.", file=name)
    try:
        df = pl.read_csv(path, infer_schema_length=0, encoding="utf8")
    except (pl.exceptions.ComputeError, pl.exceptions.NoDataError) as error:
        raise InstanceError(f"Malformed CSV: {error}", file=name) from None
    missing = [c for c in INSTANCE_FILES[name] if c not in df.columns]
    if missing:
        raise InstanceError(f"Missing columns {missing}.", file=name)
    return _Table(name, list(df.iter_rows(named=True)))


def _duplicate(table: _Table, key: Tuple[Any, ...], number: int) -> InstanceError:
    return InstanceError(f"Duplicate entry {key}.", table.name, number)


def _read_manifest(directory: Path) -> Mapping[str, Any]:
    path = directory / "instance.json"
    if not path.exists():
        raise InstanceError("Required file is missing.", file="instance.json")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise InstanceError(f"Malformed JSON: {error}", file="instance.json") from None
    for key in ("name", "money_unit", "discount_rate", "horizon_end"):
        if key not in manifest:
            raise InstanceError(f"Missing key {key!r}.", file="instance.json")
    if manifest.get("weight_unit", "tonnes") not in _WEIGHT_SCALE:
        msg = f"Unknown weight unit {manifest.get('weight_unit')!r}."
        raise InstanceError(msg, file="instance.json")
    return manifest


def _interpolate_prices(
    years: Tuple[int, ...], anchors: Dict[int, float]
) -> Dict[int, float]:
    """Fill carbon prices linearly between anchors and extrapolate beyond them."""
    if not anchors:
        raise InstanceError("No carbon price given.", file="time.csv")
    known = sorted(anchors)
    if len(known) == 1:
        return {year: anchors[known[0]] for year in years}
    prices: Dict[int, float] = {}
    for year in years:
        if year in anchors:
            prices[year] = anchors[year]
            continue
        if year < known[0]:
            left, right = known[0], known[1]
        elif year > known[-1]:
            left, right = known[-2], known[-1]
        else:
            left = max(y for y in known if y < year)
            right = min(y for y in known if y > year)
        slope = (anchors[right] - anchors[left]) / (right - left)
        prices[year] = max(0.0, anchors[left] + slope * (year - left))
    return prices


def load_instance(directory: Union[str, Path]) -> Instance:
    """Load an instance directory.

    Parameters
    ----------
    directory : str or Path
        Directory holding ``instance.json`` and the instance CSV files.

    Returns
    -------
    Instance
        The parsed instance. It is not validated; see
        :func:`stram.model.validate_instance`.

    Raises
    ------
    InstanceError
        If a required file is missing or a field cannot be parsed. The error
        names the file and, for field errors, the 1-based data row.

    See Also
    --------
    stram.model.validate_instance :
        Check the invariants of a loaded instance.
    """
    directory = Path(directory)
    manifest = _read_manifest(directory)
    weight_scale = _WEIGHT_SCALE[manifest.get("weight_unit", "tonnes")]
    tables = {name: _read_table(directory, name) for name in INSTANCE_FILES}

    nodes_table = tables["nodes.csv"]
    node_names: Dict[str, str] = {}
    for number, row in nodes_table:
        node_id = nodes_table.text(row, "node", number)
        if node_id in node_names:
            raise _duplicate(nodes_table, (node_id,), number)
        node_names[node_id] = nodes_table._raw(row, "name", number) or node_id

    fuels_table = tables["fuels.csv"]
    fuel_rows: Dict[str, Dict[str, Any]] = {}
    group_varied: Dict[str, bool] = {}
    lifespans: Dict[Tuple[str, str], float] = {}
    base_mix: Dict[Tuple[str, str], float] = {}
    for number, row in fuels_table:
        mode = fuels_table.text(row, "mode", number)
        fuel = fuels_table.text(row, "fuel", number)
        group = fuels_table.text(row, "fuel_group", number)
        is_new = fuels_table.flag(row, "is_new", number)
        if (mode, fuel) in lifespans:
            raise _duplicate(fuels_table, (mode, fuel), number)
        entry = fuel_rows.setdefault(
            fuel, {"modes": set(), "is_new": is_new, "group": group}
        )
        if entry["is_new"] != is_new or entry["group"] != group:
            msg = f"Fuel {fuel!r} changes novelty or group between modes."
            raise InstanceError(msg, fuels_table.name, number)
        entry["modes"].add(mode)
        varied = fuels_table.flag(row, "group_varied", number)
        if group_varied.setdefault(group, varied) != varied:
            msg = f"Fuel group {group!r} has inconsistent group_varied flags."
            raise InstanceError(msg, fuels_table.name, number)
        lifespans[(mode, fuel)] = fuels_table.number(row, "lifespan_years", number)
        base_mix[(mode, fuel)] = fuels_table.number(row, "base_share", number, 0.0)
    fuels = {
        fuel: Fuel(fuel, frozenset(e["modes"]), e["is_new"], e["group"])
        for fuel, e in sorted(fuel_rows.items())
    }
    fuel_groups = {
        group: FuelGroup(group, varied)
        for group, varied in sorted(group_varied.items())
    }

    modes_table = tables["modes.csv"]
    mode_lifespan: Dict[str, float] = {}
    for number, row in modes_table:
        mode = modes_table.text(row, "mode", number)
        if mode in mode_lifespan:
            raise _duplicate(modes_table, (mode,), number)
        mode_lifespan[mode] = modes_table.number(row, "lifespan_years", number)

    arcs_table = tables["arcs.csv"]
    arcs: List[Arc] = []
    for number, row in arcs_table:
        length = arcs_table.number(row, "length_km", number)
        arcs.append(
            Arc(
                origin=arcs_table.text(row, "origin", number),
                destination=arcs_table.text(row, "destination", number),
                mode=arcs_table.text(row, "mode", number),
                route=arcs_table.integer(row, "route", number, default=1),
                length_km=length,
                allowed_fuels=frozenset(arcs_table.items(row, "fuels", number)),
            )
        )
    arcs.sort(key=lambda arc: arc.key)
    edge_arcs = derive_edges(arcs)
    modes = tuple(sorted({arc.mode for arc in arcs} | set(mode_lifespan)))

    edges_table = tables["edges.csv"]
    edge_data: Dict[Tuple[str, str, str, int], Dict[str, Any]] = {}
    for number, row in edges_table:
        key = edge_key_of(
            (
                edges_table.text(row, "node_a", number),
                edges_table.text(row, "node_b", number),
                edges_table.text(row, "mode", number),
                edges_table.integer(row, "route", number, default=1),
            )
        )
        if key in edge_data:
            raise _duplicate(edges_table, key, number)
        base = edges_table.optional_number(row, "base_capacity", number)
        expansion = None
        if edges_table.optional_number(row, "expansion_cost", number) is not None:
            expansion = EdgeExpansion(
                cost=edges_table.number(row, "expansion_cost", number),
                capacity_gain=edges_table.number(row, "expansion_gain", number)
                * weight_scale,
                lead_periods=edges_table.integer(row, "expansion_lead", number, 0),
            )
        edge_data[key] = {
            "base_capacity": None if base is None else base * weight_scale,
            "expansion": expansion,
            "charging": [],
            "upgrades": [],
        }

    node_investments: Dict[Tuple[str, str, str], NodeInvestment] = {}
    investments_table = tables["investments.csv"]
    if investments_table is not None:
        for number, row in investments_table:
            kind = investments_table.text(row, "kind", number)
            lead = investments_table.integer(row, "lead_periods", number, default=0)
            if kind == "node":
                option = NodeInvestment(
                    node=investments_table.text(row, "node_a", number),
                    terminal_class=investments_table.text(
                        row, "terminal_class", number
                    ),
                    mode=investments_table.text(row, "mode", number),
                    base_capacity=investments_table.number(
                        row, "base_capacity", number
                    )
                    * weight_scale,
                    cost=investments_table.number(row, "cost", number, 0.0),
                    capacity_gain=investments_table.number(
                        row, "capacity_gain", number, 0.0
                    )
                    * weight_scale,
                    lead_periods=lead,
                )
                key3 = (option.node, option.terminal_class, option.mode)
                if key3 in node_investments:
                    raise _duplicate(investments_table, key3, number)
                node_investments[key3] = option
                continue
            if kind not in ("charging", "upgrade"):
                msg = f"Unknown investment kind {kind!r}."
                raise InstanceError(msg, investments_table.name, number)
            key = edge_key_of(
                (
                    investments_table.text(row, "node_a", number),
                    investments_table.text(row, "node_b", number),
                    investments_table.text(row, "mode", number),
                    investments_table.integer(row, "route", number, default=1),
                )
            )
            data = edge_data.setdefault(
                key,
                {
                    "base_capacity": None,
                    "expansion": None,
                    "charging": [],
                    "upgrades": [],
                },
            )
            fuel = investments_table.text(row, "fuel", number)
            if kind == "charging":
                data["charging"].append(
                    ChargingOption(
                        fuel=fuel,
                        base_capacity=investments_table.number(
                            row, "base_capacity", number, 0.0
                        )
                        * weight_scale,
                        unit_cost=investments_table.number(row, "cost", number),
                        lead_periods=lead,
                    )
                )
            else:
                data["upgrades"].append(
                    UpgradeOption(
                        fuel=fuel,
                        cost=investments_table.number(row, "cost", number),
                        lead_periods=lead,
                    )
                )

    edges = {
        key: Edge(
            node_a=key[0],
            node_b=key[1],
            mode=key[2],
            route=key[3],
            arcs=edge_arcs.get(key, ()),
            base_capacity=data["base_capacity"],
            expansion=data["expansion"],
            charging=tuple(sorted(data["charging"], key=lambda o: o.fuel)),
            upgrades=tuple(sorted(data["upgrades"], key=lambda o: o.fuel)),
        )
        for key, data in sorted(edge_data.items())
    }
    # edges without a row in edges.csv are uncapacitated
    for key, arc_keys in edge_arcs.items():
        if key not in edges:
            edges[key] = Edge(key[0], key[1], key[2], key[3], arcs=arc_keys)
    edges = dict(sorted(edges.items()))

    terminal_classes: Dict[str, TerminalClass] = {}
    terminals_table = tables["terminals.csv"]
    if terminals_table is not None:
        for number, row in terminals_table:
            class_id = terminals_table.text(row, "terminal_class", number)
            if class_id in terminal_classes:
                raise _duplicate(terminals_table, (class_id,), number)
            terminal_classes[class_id] = TerminalClass(
                id=class_id,
                mode=terminals_table.text(row, "mode", number),
                products=frozenset(terminals_table.items(row, "products", number)),
            )
    node_classes: Dict[str, Dict[str, List[str]]] = {n: {} for n in node_names}
    for node, terminal_class, mode in sorted(node_investments):
        node_classes.setdefault(node, {}).setdefault(mode, []).append(terminal_class)
    nodes = {
        node_id: Node(
            id=node_id,
            name=node_names.get(node_id, node_id),
            terminal_classes={m: tuple(c) for m, c in node_classes[node_id].items()},
        )
        for node_id in sorted(node_classes)
    }

    vehicles_table = tables["vehicles.csv"]
    vehicle_types: Dict[str, VehicleType] = {}
    for number, row in vehicles_table:
        vehicle_id = vehicles_table.text(row, "vehicle_type", number)
        if vehicle_id in vehicle_types:
            raise _duplicate(vehicles_table, (vehicle_id,), number)
        mode = vehicles_table.text(row, "mode", number)
        vehicle_types[vehicle_id] = VehicleType(
            id=vehicle_id,
            mode=mode,
            carryable_products=frozenset(vehicles_table.items(row, "products", number)),
            lifespan_years={f: n for (m, f), n in lifespans.items() if m == mode},
        )
    vehicle_types = dict(sorted(vehicle_types.items()))

    time_table = tables["time.csv"]
    period_years: List[int] = []
    price_anchors: Dict[int, float] = {}
    for number, row in time_table:
        year = time_table.integer(row, "year", number)
        if time_table.flag(row, "is_period", number):
            period_years.append(year)
        price = time_table.optional_number(row, "carbon_price", number)
        if price is not None:
            price_anchors[year] = price
    if not period_years:
        raise InstanceError("No period year given.", file="time.csv")
    time = TimeStructure(
        period_years=tuple(period_years),
        horizon_end=int(manifest["horizon_end"]),
        discount=1.0 / (1.0 + float(manifest["discount_rate"])),
    )

    demand_table = tables["demand.csv"]
    demand: Dict[Tuple[str, str, str, int], float] = {}
    products = set()
    for number, row in demand_table:
        key4 = (
            demand_table.text(row, "origin", number),
            demand_table.text(row, "destination", number),
            demand_table.text(row, "product", number),
            demand_table.integer(row, "year", number),
        )
        if key4 in demand:
            raise _duplicate(demand_table, key4, number)
        demand[key4] = demand_table.number(row, "amount", number) * weight_scale
        products.add(key4[2])
    for vehicle in vehicle_types.values():
        products |= set(vehicle.carryable_products)

    def _mode_fuel_table(
        name: str, column: str
    ) -> Dict[Tuple[str, str, str, int], float]:
        table = tables[name]
        values: Dict[Tuple[str, str, str, int], float] = {}
        for number, row in table:
            key = (
                table.text(row, "mode", number),
                table.text(row, "fuel", number),
                table.text(row, "product", number),
                table.integer(row, "year", number),
            )
            if key in values:
                raise _duplicate(table, key, number)
            values[key] = table.number(row, column, number)
        return values

    transfer_cost: Dict[Tuple[str, str, str], float] = {}
    transfers_table = tables["transfers.csv"]
    if transfers_table is not None:
        for number, row in transfers_table:
            key3 = (
                transfers_table.text(row, "mode_from", number),
                transfers_table.text(row, "mode_to", number),
                transfers_table.text(row, "product", number),
            )
            if key3 in transfer_cost:
                raise _duplicate(transfers_table, key3, number)
            transfer_cost[key3] = transfers_table.number(row, "cost_per_tonne", number)
        for (mode_from, mode_to, product), cost in list(transfer_cost.items()):
            transfer_cost.setdefault((mode_to, mode_from, product), cost)

    costs = CostModel(
        cost_per_tkm=_mode_fuel_table("costs.csv", "cost_per_tkm"),
        emission_per_tkm=_mode_fuel_table("emissions.csv", "kg_co2e_per_tkm"),
        carbon_price=_interpolate_prices(time.years, price_anchors),
        transfer_cost=transfer_cost,
        empty_trip_cost_factor=float(manifest.get("empty_trip_cost_factor", 1.0)),
        empty_trip_emission_factor=float(
            manifest.get("empty_trip_emission_factor", 0.8)
        ),
    )

    adoption_table = tables["adoption.csv"]
    pieces: Dict[Tuple[str, str], Dict[str, Any]] = {}
    for number, row in adoption_table:
        mode = adoption_table.text(row, "mode", number)
        fuel = adoption_table.text(row, "fuel", number)
        start = adoption_table.integer(row, "start_year", number)
        share = adoption_table.number(row, "potential_share", number)
        entry = pieces.setdefault(
            (mode, fuel), {"start": start, "share": share, "alpha": [], "beta": []}
        )
        if entry["start"] != start or entry["share"] != share:
            msg = f"Adoption pieces of ({mode}, {fuel}) disagree on start or share."
            raise InstanceError(msg, adoption_table.name, number)
        from_year = adoption_table.integer(
            row, "from_year", number, default=time.base_year
        )
        entry["alpha"].append((from_year, adoption_table.number(row, "alpha", number)))
        entry["beta"].append((from_year, adoption_table.number(row, "beta", number)))
    adoption_params = {}
    for (mode, fuel), entry in sorted(pieces.items()):
        if fuel not in fuels:
            msg = f"Adoption parameters for unknown fuel {fuel!r}."
            raise InstanceError(msg, file=adoption_table.name)
        adoption_params[(mode, fuel)] = BassParams(
            mode=mode,
            fuel=fuel,
            fuel_group=fuels[fuel].group,
            start_year=entry["start"],
            potential_share=entry["share"],
            alpha=tuple(sorted(entry["alpha"])),
            beta=tuple(sorted(entry["beta"])),
        )

    fleet_table = tables["fleet.csv"]
    decreases: Dict[str, Dict[int, float]] = {}
    for number, row in fleet_table:
        mode = fleet_table.text(row, "mode", number)
        year = fleet_table.integer(row, "year", number)
        decreases.setdefault(mode, {})[year] = fleet_table.number(
            row, "max_modal_decrease", number
        )
    fleet = {
        mode: FleetParams(mode, lifespan, dict(sorted(decreases.get(mode, {}).items())))
        for mode, lifespan in sorted(mode_lifespan.items())
    }

    targets = {
        int(year): float(value)
        for year, value in manifest.get("emission_targets", {}).items()
    }

    instance = Instance(
        name=str(manifest["name"]),
        money_unit=str(manifest["money_unit"]),
        nodes=nodes,
        arcs=tuple(arcs),
        edges=edges,
        modes=modes,
        fuels=fuels,
        fuel_groups=fuel_groups,
        vehicle_types=vehicle_types,
        products=tuple(sorted(products)),
        terminal_classes=dict(sorted(terminal_classes.items())),
        time=time,
        demand=DemandTable(dict(sorted(demand.items()))),
        costs=costs,
        node_investments=dict(sorted(node_investments.items())),
        adoption_params=adoption_params,
        fleet=fleet,
        base_year_fuel_mix=dict(sorted(base_mix.items())),
        emission_targets=dict(sorted(targets.items())),
    )
    logger.info(
        "Loaded instance %r: %d nodes, %d arcs, %d products, %d periods, "
        "total demand %.6g tonnes",
        instance.name,
        len(nodes),
        len(arcs),
        len(instance.products),
        len(period_years),
        float(np.sum(list(demand.values()))) if demand else 0.0,
    )
    return instance
