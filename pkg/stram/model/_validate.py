#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Edge derivation and instance validation."""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

from stram.model._errors import InstanceError
from stram.model._types import MODES, Arc, ArcKey, EdgeKey, Instance
from stram.utils._iter import _format_seq_to_str

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "PUBLISHED_MODE_FUELS",
    "ValidationReport",
    "derive_edges",
    "validate_instance",
]

# Mode-fuel combinations of the published Norwegian case study.
PUBLISHED_MODE_FUELS: Dict[str, Tuple[str, ...]] = {
    "rail": ("Battery", "Biodiesel", "Catenary", "Diesel", "Hybrid", "Hydrogen"),
    "road": ("Battery", "Biodiesel", "Biogas", "Diesel", "Hydrogen"),
    "sea": ("Ammonia", "Biodiesel", "Biogas", "HFO", "Hydrogen", "LNG", "MGO"),
}

_TOL = 1e-9


@dataclass
class ValidationReport:
    """Errors and warnings found by :func:`validate_instance`."""

    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Whether no errors were found."""
        return not self.errors


def derive_edges(arcs: Iterable[Arc]) -> Dict[EdgeKey, Tuple[ArcKey, ...]]:
    """Group directed arcs into undirected edges.

    Parameters
    ----------
    arcs : iterable of Arc
        The directed arcs.

    Returns
    -------
    dict
        Edge key to the sorted keys of the arcs mapping to it.

    Raises
    ------
    InstanceError
        If the same arc (i, j, m, r) is listed twice.

    Examples
    --------
    >>> from stram.model import Arc, derive_edges
    >>> arcs = [
    ...     Arc("a", "b", "road", 1, 10.0, frozenset({"Diesel"})),
    ...     Arc("b", "a", "road", 1, 10.0, frozenset({"Diesel"})),
    ... ]
    >>> derive_edges(arcs)
    {('a', 'b', 'road', 1): (('a', 'b', 'road', 1), ('b', 'a', 'road', 1))}
    """
    seen = set()
    grouped: Dict[EdgeKey, List[ArcKey]] = {}
    for arc in arcs:
        if arc.key in seen:
            raise InstanceError(f"Duplicate arc {arc.key}.", file="arcs.csv")
        seen.add(arc.key)
        grouped.setdefault(arc.edge_key, []).append(arc.key)
    return {key: tuple(sorted(grouped[key])) for key in sorted(grouped)}


def _check_network(instance: Instance, report: ValidationReport) -> None:
    for node_id, node in instance.nodes.items():
        for mode, classes in node.terminal_classes.items():
            for terminal_class in classes:
                if terminal_class not in instance.terminal_classes:
                    msg = f"Node {node_id!r} references unknown terminal class "
                    msg += f"{terminal_class!r} on mode {mode!r}."
                    report.errors.append(msg)

    for arc in instance.arcs:
        if arc.origin not in instance.nodes or arc.destination not in instance.nodes:
            report.errors.append(f"Arc {arc.key} references an unknown node.")
        if arc.origin == arc.destination:
            report.errors.append(f"Arc {arc.key} is a loop.")
        if arc.mode not in MODES:
            msg = f"Arc {arc.key} has unknown mode {arc.mode!r}; expected "
            msg += f"{_format_seq_to_str(MODES, last_sep='or')}."
            report.errors.append(msg)
        if not arc.length_km > 0:
            report.errors.append(f"Arc {arc.key} has non-positive length.")
        allowed = set(instance.fuels_of_mode(arc.mode))
        disallowed = sorted(set(arc.allowed_fuels) - allowed)
        if disallowed:
            msg = f"Arc {arc.key}: fuel not allowed on mode {arc.mode!r}: "
            msg += f"{_format_seq_to_str(disallowed)}."
            report.errors.append(msg)
        if not arc.allowed_fuels:
            report.warnings.append(f"Arc {arc.key} allows no fuel.")

    try:
        derived = derive_edges(instance.arcs)
    except InstanceError as error:
        report.errors.append(str(error))
        return
    if set(derived) != set(instance.edges):
        missing = sorted(set(derived) - set(instance.edges))
        extra = sorted(set(instance.edges) - set(derived))
        msg = "Edge set differs from the undirected image of the arc set."
        if missing:
            msg += f" Edges without data: {_format_seq_to_str(missing)}."
        if extra:
            msg += f" Edges without arcs: {_format_seq_to_str(extra)}."
        report.errors.append(msg)
    for key, edge in instance.edges.items():
        if key in derived and tuple(edge.arcs) != derived[key]:
            report.errors.append(f"Edge {key} lists the wrong arcs.")
        if edge.mode == "rail" and edge.base_capacity is None:
            if edge.expansion is not None:
                msg = f"Rail edge {key} has an expansion option but no base capacity."
                report.errors.append(msg)
            else:
                report.warnings.append(f"Rail edge {key} is uncapacitated.")
        if edge.charging and edge.mode != "road":
            report.errors.append(f"Edge {key}: charging is only defined for road.")
        edge_fuels = set(instance.fuels_of_mode(edge.mode))
        for option in tuple(edge.charging) + tuple(edge.upgrades):
            if option.fuel not in edge_fuels:
                msg = f"Edge {key}: investment for fuel {option.fuel!r} which is "
                msg += f"not a fuel of mode {edge.mode!r}."
                report.errors.append(msg)


def _check_fuels(instance: Instance, report: ValidationReport) -> None:
    for fuel in instance.fuels.values():
        if fuel.group not in instance.fuel_groups:
            report.errors.append(f"Fuel {fuel.id!r} has unknown group {fuel.group!r}.")
        for mode in sorted(fuel.modes):
            if mode not in MODES:
                report.errors.append(f"Fuel {fuel.id!r} uses unknown mode {mode!r}.")
            elif fuel.id not in PUBLISHED_MODE_FUELS[mode]:
                msg = f"Mode-fuel combination ({mode}, {fuel.id}) is not one of the "
                msg += "published combinations."
                report.warnings.append(msg)
    for group in instance.fuel_groups.values():
        members = [f for f in instance.fuels.values() if f.group == group.id]
        has_new = any(f.is_new for f in members)
        if group.varied_in_scenarios != has_new:
            msg = f"Fuel group {group.id!r}: exactly the groups of new fuels vary "
            msg += "across scenarios, but "
            msg += f"varied_in_scenarios={group.varied_in_scenarios}."
            report.errors.append(msg)

    for vehicle in instance.vehicle_types.values():
        if not vehicle.carryable_products:
            report.errors.append(f"Vehicle type {vehicle.id!r} carries no product.")
        unknown = sorted(set(vehicle.carryable_products) - set(instance.products))
        if unknown:
            msg = f"Vehicle type {vehicle.id!r} carries unknown products "
            msg += f"{_format_seq_to_str(unknown)}."
            report.errors.append(msg)
    for mode in instance.modes:
        for product in instance.products:
            carriers = [
                v
                for v in instance.vehicle_types_of_mode(mode)
                if product in instance.vehicle_types[v].carryable_products
            ]
            if len(carriers) != 1:
                msg = f"Mode {mode!r} needs exactly one vehicle type for product "
                msg += f"{product!r}, found {len(carriers)}."
                report.errors.append(msg)


def _check_time_and_demand(instance: Instance, report: ValidationReport) -> None:
    time = instance.time
    years = time.period_years
    if any(b <= a for a, b in zip(years[:-1], years[1:])):
        report.errors.append(f"non-monotone period years: {list(years)}.")
    if years and time.horizon_end < years[-1]:
        report.errors.append("Horizon end precedes the last period year.")
    if not 0.0 < time.discount <= 1.0:
        report.errors.append(f"Discount factor {time.discount} outside (0, 1].")

    for (origin, destination, product, year), amount in instance.demand.entries.items():
        where = f"Demand ({origin}, {destination}, {product}, {year})"
        if amount < 0:
            report.errors.append(f"{where} is negative.")
        if origin == destination:
            report.errors.append(f"{where} has equal origin and destination.")
        if origin not in instance.nodes or destination not in instance.nodes:
            report.errors.append(f"{where} references an unknown node.")
        if product not in instance.products:
            report.errors.append(f"{where} references an unknown product.")
        if year not in years:
            report.errors.append(f"{where} is not given for a period year.")


def _check_costs(instance: Instance, report: ValidationReport) -> None:
    costs = instance.costs
    missing_prices = [y for y in instance.time.years if y not in costs.carbon_price]
    if missing_prices:
        msg = "Carbon price missing for years "
        msg += f"{_format_seq_to_str(missing_prices)}."
        report.errors.append(msg)
    tables = (
        ("transport cost", costs.cost_per_tkm),
        ("emission factor", costs.emission_per_tkm),
    )
    for label, table in tables:
        if any(value < 0 for value in table.values()):
            report.errors.append(f"Negative {label} entries.")
        for mode in instance.modes:
            for fuel in instance.fuels_of_mode(mode):
                for product in instance.products:
                    for year in instance.time.period_years:
                        if (mode, fuel, product, year) not in table:
                            msg = f"Missing {label} for ({mode}, {fuel}, {product}, "
                            msg += f"{year})."
                            report.errors.append(msg)
    if any(value < 0 for value in costs.carbon_price.values()):
        report.errors.append("Negative carbon prices.")
    for mode_from in instance.modes:
        for mode_to in instance.modes:
            if mode_from == mode_to:
                continue
            for product in instance.products:
                cost = costs.transfer_cost.get((mode_from, mode_to, product))
                if cost is None:
                    msg = f"Missing transfer cost {mode_from}->{mode_to} for "
                    msg += f"{product!r}."
                    report.errors.append(msg)
                elif cost < 0:
                    msg = f"Negative transfer cost {mode_from}->{mode_to}."
                    report.errors.append(msg)


def _check_investments_and_fleet(instance: Instance, report: ValidationReport) -> None:
    if not instance.node_investments:
        report.warnings.append(
            "No terminal capacity data; terminals are unconstrained."
        )
    for (node, terminal_class, mode), option in instance.node_investments.items():
        where = f"Terminal ({node}, {terminal_class}, {mode})"
        if node not in instance.nodes:
            report.errors.append(f"{where} references an unknown node.")
        klass = instance.terminal_classes.get(terminal_class)
        if klass is None:
            report.errors.append(f"{where} references an unknown terminal class.")
        elif klass.mode != mode:
            report.errors.append(f"{where} uses a class of mode {klass.mode!r}.")
        if mode not in ("rail", "sea"):
            report.errors.append(f"{where}: terminal capacity applies to rail and sea.")
        if min(option.base_capacity, option.cost, option.capacity_gain) < 0:
            report.errors.append(f"{where} has negative entries.")

    for mode in instance.modes:
        fleet = instance.fleet.get(mode)
        if fleet is None:
            report.errors.append(f"Missing fleet lifespan for mode {mode!r}.")
            continue
        if not fleet.lifespan_years > 0:
            report.errors.append(f"Mode {mode!r} has non-positive lifespan.")
        for year in instance.time.period_years[1:]:
            rho = fleet.max_modal_decrease.get(year)
            if rho is None:
                msg = f"Missing max modal decrease for mode {mode!r} in {year}."
                report.errors.append(msg)
            elif not 0.0 <= rho <= 1.0:
                report.errors.append(f"Max modal decrease {rho} outside [0, 1].")

        fuels = instance.fuels_of_mode(mode)
        shares = [instance.base_year_fuel_mix.get((mode, f), 0.0) for f in fuels]
        if abs(sum(shares) - 1.0) > _TOL:
            msg = f"Base year fuel mix of mode {mode!r} sums to {sum(shares)}."
            report.errors.append(msg)
        for fuel in instance.new_fuels_of_mode(mode):
            if instance.base_year_fuel_mix.get((mode, fuel), 0.0) > 0.0:
                msg = f"New fuel {fuel!r} on mode {mode!r} has a positive base share."
                report.errors.append(msg)
            params = instance.adoption_params.get((mode, fuel))
            if params is None:
                msg = f"Missing adoption parameters for new fuel ({mode}, {fuel})."
                report.errors.append(msg)
                continue
            if not 0.0 <= params.potential_share <= 1.0:
                msg = f"Potential share of ({mode}, {fuel}) not in [0, 1]."
                report.errors.append(msg)
            pieces = tuple(params.alpha) + tuple(params.beta)
            if any(value < 0 for _, value in pieces):
                msg = f"Negative Bass coefficients for ({mode}, {fuel})."
                report.errors.append(msg)

    if not instance.emission_targets:
        report.warnings.append("No emission targets; reports carry no target overlay.")


def validate_instance(instance: Instance) -> ValidationReport:
    """Check every invariant of the instance types.

    Parameters
    ----------
    instance : Instance
        The instance to check.

    Returns
    -------
    ValidationReport
        Errors (invariant violations) and warnings (missing optional data).

    See Also
    --------
    stram.model.load_instance :
        Read an instance directory.

    Examples
    --------
    >>> from stram.datasets import load_desk_instance
    >>> from stram.model import validate_instance
    >>> validate_instance(load_desk_instance()).errors
    []
    """
    report = ValidationReport()
    _check_network(instance, report)
    _check_fuels(instance, report)
    _check_time_and_demand(instance, report)
    _check_costs(instance, report)
    _check_investments_and_fleet(instance, report)
    return report
