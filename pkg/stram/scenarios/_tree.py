#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Two-stage scenario trees over fuel-group technology developments.

Every varied fuel group develops optimistically (O), as expected (B) or
pessimistically (P) from the branch year on. A tree holds every O/P combination
over the varied groups plus the scenario in which all groups follow the base
development.
"""
import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from stram._config import _CONFIG_REGISTRY, get_config
from stram.model import InstanceError
from stram.utils._iter import _format_seq_to_str

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "BASE_SCENARIO_ID",
    "ScenarioState",
    "Deviations",
    "DeviationMultipliers",
    "ScenarioSpec",
    "ScenarioTree",
    "generate_tree",
    "apply_deviations",
    "information_partition",
    "load_scenario_tree",
]

BASE_SCENARIO_ID = "base"
_PROBABILITY_TOL = 1e-12


class ScenarioState(str, enum.Enum):
    """Development of a fuel group within one scenario."""

    OPTIMISTIC = "O"
    BASE = "B"
    PESSIMISTIC = "P"


@dataclass(frozen=True)
class Deviations:
    """Relative deviation of cost and Bass coefficients from their base values."""

    cost: float = 0.25
    alpha: float = 0.25
    beta: float = 0.25


@dataclass(frozen=True)
class DeviationMultipliers:
    """Factors applied to base cost and Bass coefficients of one fuel group."""

    cost: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0


@dataclass(frozen=True)
class ScenarioSpec:
    """One scenario: its label, the state of every varied group and probability.

    Parameters
    ----------
    id : str
        Scenario identifier; the label, or ``"base"`` for a tree without varied
        groups.
    label : str
        One letter per varied group, in group order.
    states : mapping
        Fuel group id to :class:`ScenarioState`.
    probability : float
        Probability P_s in [0, 1].
    """

    id: str
    label: str
    states: Mapping[str, ScenarioState] = field(default_factory=dict)
    probability: float = 1.0

    @property
    def is_base(self) -> bool:
        """Whether every group follows its base development."""
        return all(state is ScenarioState.BASE for state in self.states.values())

    def state_of(self, group: str) -> ScenarioState:
        """Return the state of `group`, BASE for groups that are not varied."""
        return self.states.get(group, ScenarioState.BASE)


@dataclass(frozen=True)
class ScenarioTree:
    """Scenarios, branch year, deviation magnitudes and sign convention."""

    scenarios: Tuple[ScenarioSpec, ...]
    branch_year: int
    varied_groups: Tuple[str, ...] = ()
    deviations: Deviations = field(default_factory=Deviations)
    cost_sign_convention: str = "optimistic_cheaper"

    @cached_property
    def by_id(self) -> Dict[str, ScenarioSpec]:
        """Scenarios indexed by id."""
        return {spec.id: spec for spec in self.scenarios}

    @property
    def ids(self) -> Tuple[str, ...]:
        """Scenario ids in tree order."""
        return tuple(spec.id for spec in self.scenarios)

    @property
    def probabilities(self) -> Dict[str, float]:
        """Scenario id to probability."""
        return {spec.id: spec.probability for spec in self.scenarios}

    @property
    def base(self) -> ScenarioSpec:
        """The scenario in which every group follows its base development."""
        for spec in self.scenarios:
            if spec.is_base:
                return spec
        raise ValueError("The tree has no all-base scenario.")

    def is_first_stage(self, year: int) -> bool:
        """Whether decisions in `year` are taken before uncertainty resolves."""
        return year < self.branch_year

    def block_of(self, year: int, scenario: str) -> Tuple[str, ...]:
        """Return the scenarios sharing the history of `scenario` up to `year`."""
        if self.is_first_stage(year):
            return self.ids
        return (scenario,)

    def representative(self, year: int, scenario: str) -> str:
        """Return the first scenario of the block `scenario` belongs to in `year`."""
        return self.block_of(year, scenario)[0]

    def multipliers(self, scenario: str, group: str, year: int) -> DeviationMultipliers:
        """Return the deviation multipliers of `group` in `year` under `scenario`."""
        return apply_deviations(self, scenario, group, year)

    def cost_multiplier(self, scenario: str):
        """Return ``(group, year) -> factor`` for :func:`assemble_generalized_cost`."""

        def _factor(group: str, year: int) -> float:
            return self.multipliers(scenario, group, year).cost

        return _factor

    def base_only(self) -> "ScenarioTree":
        """Return the deterministic tree holding only the all-base scenario."""
        return self.single(self.base.id)

    def single(self, scenario: str) -> "ScenarioTree":
        """Return the tree holding only `scenario`, with probability 1."""
        spec = self.by_id[scenario]
        only = ScenarioSpec(spec.id, spec.label, spec.states, 1.0)
        return ScenarioTree(
            scenarios=(only,),
            branch_year=self.branch_year,
            varied_groups=self.varied_groups,
            deviations=self.deviations,
            cost_sign_convention=self.cost_sign_convention,
        )


def generate_tree(
    varied_groups: Sequence[str],
    branch_year: int,
    deviations: Optional[Deviations] = None,
    probabilities: Optional[Mapping[str, float]] = None,
    cost_sign_convention: Optional[str] = None,
) -> ScenarioTree:
    """Build the two-stage tree over the varied fuel groups.

    Parameters
    ----------
    varied_groups : sequence of str
        Fuel groups whose development is uncertain. Labels list one letter per
        group in the given order.
    branch_year : int
        First year of the second stage.
    deviations : Deviations, default=None
        Deviation magnitudes, 25% for cost and both Bass coefficients if None.
    probabilities : mapping, default=None
        Scenario id to probability. Uniform if None.
    cost_sign_convention : {"optimistic_cheaper", "as_tabulated"}, default=None
        Direction of the cost deviation; the configured value if None.

    Returns
    -------
    ScenarioTree
        ``2**k + 1`` scenarios for ``k`` varied groups: all O/P combinations
        followed by the all-base scenario.

    Raises
    ------
    ValueError
        If a group is listed twice, the cost sign convention is unknown, or
        probabilities do not cover every scenario, lie outside [0, 1] or do not
        sum to 1.

    Examples
    --------
    >>> from stram.scenarios import generate_tree
    >>> tree = generate_tree(["Battery", "Hydrogen"], branch_year=2034)
    >>> tree.ids
    ('OO', 'OP', 'PO', 'PP', 'BB')
    >>> generate_tree([], branch_year=2034).ids
    ('base',)
    """
    groups = tuple(varied_groups)
    if len(set(groups)) != len(groups):
        duplicates = sorted({g for g in groups if groups.count(g) > 1})
        msg = f"Duplicate fuel groups {_format_seq_to_str(duplicates)}."
        raise ValueError(msg)
    if cost_sign_convention is None:
        cost_sign_convention = get_config()["cost_sign_convention"]
    conventions = _CONFIG_REGISTRY["cost_sign_convention"].get_allowed_values()
    if cost_sign_convention not in conventions:
        msg = "`cost_sign_convention` must be one of "
        msg += f"{_format_seq_to_str(conventions, last_sep='or')}, "
        msg += f"but found {cost_sign_convention!r}."
        raise ValueError(msg)

    states: List[Dict[str, ScenarioState]] = [
        dict(zip(groups, combo))
        for combo in itertools.product(
            (ScenarioState.OPTIMISTIC, ScenarioState.PESSIMISTIC), repeat=len(groups)
        )
        if groups
    ]
    states.append({group: ScenarioState.BASE for group in groups})
    labels = ["".join(state[g].value for g in groups) for state in states]
    ids = [label if label else BASE_SCENARIO_ID for label in labels]

    if probabilities is None:
        values = [1.0 / len(ids)] * len(ids)
    else:
        unknown = sorted(set(probabilities) - set(ids))
        missing = [s for s in ids if s not in probabilities]
        if unknown or missing:
            msg = "Probabilities must be given for exactly the scenarios "
            msg += f"{_format_seq_to_str(ids)}."
            raise ValueError(msg)
        values = [float(probabilities[s]) for s in ids]
    if any(not 0.0 <= p <= 1.0 for p in values):
        raise ValueError("Scenario probabilities must lie in [0, 1].")
    if not math.isclose(math.fsum(values), 1.0, abs_tol=_PROBABILITY_TOL):
        raise ValueError(f"Scenario probabilities sum to {math.fsum(values)}, not 1.")

    scenarios = tuple(
        ScenarioSpec(id=s, label=label, states=state, probability=p)
        for s, label, state, p in zip(ids, labels, states, values)
    )
    return ScenarioTree(
        scenarios=scenarios,
        branch_year=int(branch_year),
        varied_groups=groups,
        deviations=deviations if deviations is not None else Deviations(),
        cost_sign_convention=cost_sign_convention,
    )


def apply_deviations(
    tree: ScenarioTree, scenario: str, group: str, year: int
) -> DeviationMultipliers:
    """Return the factors on cost, alpha and beta of `group` in `year`.

    Parameters
    ----------
    tree : ScenarioTree
        The tree holding deviation magnitudes and the branch year.
    scenario : str
        Scenario id.
    group : str
        Fuel group id.
    year : int
        Calendar year.

    Returns
    -------
    DeviationMultipliers
        All factors are 1 before the branch year, for groups that are not varied
        and for the base state. From the branch year an optimistic group has
        its cost lowered (raised under the ``"as_tabulated"`` convention) and
        its Bass coefficients raised by the deviation magnitudes; a pessimistic
        group the opposite.

    Examples
    --------
    >>> from stram.scenarios import apply_deviations, generate_tree
    >>> tree = generate_tree(["Battery"], branch_year=2034)
    >>> apply_deviations(tree, "O", "Battery", 2040)
    DeviationMultipliers(cost=0.75, alpha=1.25, beta=1.25)
    >>> apply_deviations(tree, "O", "Battery", 2030)
    DeviationMultipliers(cost=1.0, alpha=1.0, beta=1.0)
    """
    if year < tree.branch_year or group not in tree.varied_groups:
        return DeviationMultipliers()
    state = tree.by_id[scenario].state_of(group)
    if state is ScenarioState.BASE:
        return DeviationMultipliers()
    sign = 1.0 if state is ScenarioState.OPTIMISTIC else -1.0
    cost_sign = -sign if tree.cost_sign_convention == "optimistic_cheaper" else sign
    deviations = tree.deviations
    return DeviationMultipliers(
        cost=1.0 + cost_sign * deviations.cost,
        alpha=1.0 + sign * deviations.alpha,
        beta=1.0 + sign * deviations.beta,
    )


def information_partition(tree: ScenarioTree, year: int) -> Tuple[Tuple[str, ...], ...]:
    """Return the blocks of scenarios sharing the same history in `year`.

    Parameters
    ----------
    tree : ScenarioTree
        The scenario tree.
    year : int
        Start year of a period.

    Returns
    -------
    tuple of tuple of str
        A single block of all scenarios before the branch year, singletons from
        the branch year on.

    Examples
    --------
    >>> from stram.scenarios import generate_tree, information_partition
    >>> tree = generate_tree(["Battery"], branch_year=2030)
    >>> information_partition(tree, 2023)
    (('O', 'P', 'B'),)
    >>> information_partition(tree, 2030)
    (('O',), ('P',), ('B',))
    """
    if tree.is_first_stage(year):
        return (tree.ids,)
    return tuple((s,) for s in tree.ids)


def load_scenario_tree(path: Union[str, Path]) -> ScenarioTree:
    """Read a tree definition from a ``scenarios.json`` file.

    Parameters
    ----------
    path : str or Path
        The JSON file, or an instance directory holding ``scenarios.json``.

    Returns
    -------
    ScenarioTree
        The generated tree.

    Raises
    ------
    InstanceError
        If the file is missing or malformed.

    Examples
    --------
    >>> from stram.datasets import desk_instance_path
    >>> from stram.scenarios import load_scenario_tree
    >>> load_scenario_tree(desk_instance_path()).ids
    ('OO', 'OP', 'PO', 'PP', 'BB')
    """
    path = Path(path)
    if path.is_dir():
        path = path / "scenarios.json"
    name = path.name
    if not path.exists():
        raise InstanceError("Required file is missing.", file=name)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise InstanceError(f"Malformed JSON: {error}", file=name) from None
    if "branch_year" not in data:
        raise InstanceError("Missing key 'branch_year'.", file=name)
    raw = data.get("deviations", {})
    deviations = Deviations(
        cost=float(raw.get("cost", 0.25)),
        alpha=float(raw.get("alpha", 0.25)),
        beta=float(raw.get("beta", 0.25)),
    )
    try:
        return generate_tree(
            varied_groups=data.get("varied_groups", []),
            branch_year=int(data["branch_year"]),
            deviations=deviations,
            probabilities=data.get("probabilities"),
            cost_sign_convention=data.get("cost_sign_convention"),
        )
    except ValueError as error:
        raise InstanceError(str(error), file=name) from None
