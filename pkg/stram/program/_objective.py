#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Discounted scenario costs and the mean-CVaR objective."""
from typing import Dict, List, Mapping, Tuple

import numpy as np

from stram.model import (
    Instance,
    investment_discount_factor,
    operational_discount_factor,
)
from stram.paths import path_transfer_cost
from stram.program._catalog import Row, make_row
from stram.program._context import ProgramContext

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "build_objective",
    "conditional_value_at_risk",
    "mean_cvar",
    "investment_cost",
]

Expression = Dict[int, float]


def conditional_value_at_risk(
    costs: Mapping[str, float], probabilities: Mapping[str, float], level: float
) -> float:
    """Return the CVaR of discrete scenario costs at confidence `level`.

    Computes ``min_u u + E[max(cost - u, 0)] / (1 - level)``; the minimum is
    attained at one of the scenario costs.

    Parameters
    ----------
    costs : mapping
        Scenario id to cost.
    probabilities : mapping
        Scenario id to probability.
    level : float
        Confidence level in [0, 1).

    Returns
    -------
    float
        Expected cost of the worst ``1 - level`` probability mass.

    Examples
    --------
    >>> from stram.program import conditional_value_at_risk
    >>> costs = {"a": 1.0, "b": 2.0, "c": 3.0, "d": 4.0}
    >>> conditional_value_at_risk(costs, dict.fromkeys(costs, 0.25), 0.75)
    4.0
    """
    if not 0.0 <= level < 1.0:
        raise ValueError(f"`level` must be in [0, 1), but found {level}.")
    ids = list(costs)
    values = np.array([costs[s] for s in ids], dtype=float)
    weights = np.array([probabilities[s] for s in ids], dtype=float)
    excess = np.maximum(values[None, :] - values[:, None], 0.0) @ weights
    return float(np.min(values + excess / (1.0 - level)))


def mean_cvar(
    costs: Mapping[str, float],
    probabilities: Mapping[str, float],
    risk_aversion: float,
    level: float,
) -> float:
    """Return ``(1 - lambda) * mean + lambda * CVaR`` of scenario costs.

    Examples
    --------
    >>> from stram.program import mean_cvar
    >>> costs = {"a": 1.0, "b": 2.0, "c": 3.0, "d": 4.0}
    >>> round(mean_cvar(costs, dict.fromkeys(costs, 0.25), 0.2, 0.75), 12)
    2.8
    """
    mean = sum(probabilities[s] * costs[s] for s in costs)
    cvar = conditional_value_at_risk(costs, probabilities, level)
    return (1.0 - risk_aversion) * mean + risk_aversion * cvar


def investment_cost(instance: Instance, block: str, index: tuple) -> float:
    """Return the undiscounted cost of one unit of an investment variable."""
    if block == "epsilon":
        return instance.edges[index[0]].expansion.cost
    if block == "nu":
        return instance.node_investments[index].cost
    edge_key, fuel = index
    edge = instance.edges[edge_key]
    if block == "upsilon":
        return edge.upgrade_for(fuel).cost
    if block == "y":
        return next(o.unit_cost for o in edge.charging if o.fuel == fuel)
    raise KeyError(f"{block!r} is not an investment block.")


def _columns_by_owner(context: ProgramContext) -> Dict[Tuple[int, str], List[int]]:
    grouped: Dict[Tuple[int, str], List[int]] = {}
    for column, variable in enumerate(context.catalog):
        if variable.year is None or variable.block in ("u", "w"):
            continue
        grouped.setdefault((variable.year, variable.scenario), []).append(column)
    return grouped


def _scenario_cost(
    context: ProgramContext,
    scenario: str,
    grouped: Mapping[Tuple[int, str], List[int]],
    transfer: Dict[Tuple[str, str], float],
) -> Expression:
    instance, time, catalog = context.instance, context.time, context.catalog
    operational = set(context.operational_periods)
    cost = context.costs(scenario)
    expression: Expression = {}
    for t in time.periods:
        year = time.period_years[t]
        operating = operational_discount_factor(time, t)
        investing = investment_discount_factor(time, t)
        for column in grouped.get((year, context.owner(year, scenario)), ()):
            variable = catalog[column]
            block, index = variable.block, variable.index
            if block == "x" and t in operational:
                arc_key, fuel, product = index
                coef = operating * cost.total(arc_key, fuel, product, year)
            elif block == "b" and t in operational:
                arc_key, fuel, vehicle = index
                coef = operating * cost.empty_total(arc_key, fuel, vehicle, year)
            elif block == "h" and t in operational:
                if index not in transfer:
                    path = context.paths.by_id[index[0]]
                    transfer[index] = path_transfer_cost(instance, path, index[1])
                coef = operating * transfer[index]
            elif variable.is_investment:
                coef = investing * investment_cost(instance, block, index)
            else:
                continue
            if coef != 0.0:
                expression[column] = expression.get(column, 0.0) + coef
    return expression


def build_objective(
    context: ProgramContext,
) -> Tuple[Expression, Dict[str, Expression], List[Row]]:
    """Build the mean-CVaR objective and its epigraph rows.

    Each scenario's cost ``f_s`` sums discounted operating costs of loaded flows,
    empty trips and transfers over the operational periods and discounted
    investment costs over all periods. The objective is

        (1 - lambda) * sum_s P_s f_s + lambda * (u + sum_s P_s w_s / (1 - gamma))

    with ``w_s >= f_s - u`` and ``w_s >= 0``, so at the optimum the second term is
    the CVaR of the scenario costs at level ``gamma``.

    Parameters
    ----------
    context : ProgramContext
        Build state whose catalog holds every cost-carrying variable.

    Returns
    -------
    objective : dict
        Column to objective coefficient.
    scenario_costs : dict
        Scenario id to the expression of its cost ``f_s``.
    rows : list of Row
        One ``cvar`` row per scenario.
    """
    tree, options = context.tree, context.options
    lam, gamma = options.risk_aversion, options.cvar_level
    grouped = _columns_by_owner(context)
    transfer: Dict[Tuple[str, str], float] = {}
    scenario_costs = {
        s: _scenario_cost(context, s, grouped, transfer) for s in tree.ids
    }

    var_level = context.catalog.add("u", (), None, None)
    objective: Expression = {var_level: lam}
    rows: List[Row] = []
    for scenario in tree.ids:
        probability = tree.probabilities[scenario]
        excess = context.catalog.add("w", (), None, scenario)
        objective[excess] = objective.get(excess, 0.0) + lam * probability / (1 - gamma)
        terms = [(excess, 1.0), (var_level, 1.0)]
        for column, coef in scenario_costs[scenario].items():
            weight = (1 - lam) * probability * coef
            objective[column] = objective.get(column, 0.0) + weight
            terms.append((column, -coef))
        rows.append(make_row("cvar", (), None, scenario, terms, ">=", 0.0))
    objective = {c: v for c, v in objective.items() if v != 0.0}
    return objective, scenario_costs, rows
