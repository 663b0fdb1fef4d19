#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Options and shared state of a program build."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from stram._config import get_config
from stram.diffusion import AdoptionBoundTable
from stram.model import GeneralizedCost, Instance, assemble_generalized_cost
from stram.paths import PathSet
from stram.program._catalog import Index, VariableCatalog
from stram.scenarios import ScenarioTree, information_partition

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["ProgramOptions", "ProgramContext"]


@dataclass(frozen=True)
class ProgramOptions:
    """Risk weighting and build mode of a program.

    Parameters
    ----------
    risk_aversion : float, default=0.2
        Weight lambda in [0, 1] of the CVaR term; 0 is risk neutral.
    cvar_level : float, default=0.8
        Confidence level gamma in [0, 1) of the CVaR term.
    static_year : int, default=None
        If set, operational constraints are only built for the period starting in
        this year while investments stay available in every period.
    nonanticipativity : {"merged", "explicit"}, default=None
        How first-stage decisions are shared; the configured value if None.

    Examples
    --------
    >>> from stram.program import ProgramOptions
    >>> ProgramOptions(risk_aversion=1.5)
    Traceback (most recent call last):
    ...
    ValueError: `risk_aversion` must be in [0, 1], but found 1.5.
    """

    risk_aversion: float = 0.2
    cvar_level: float = 0.8
    static_year: Optional[int] = None
    nonanticipativity: Optional[str] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.risk_aversion <= 1.0:
            msg = f"`risk_aversion` must be in [0, 1], but found {self.risk_aversion}."
            raise ValueError(msg)
        if not 0.0 <= self.cvar_level < 1.0:
            msg = f"`cvar_level` must be in [0, 1), but found {self.cvar_level}."
            raise ValueError(msg)
        if self.nonanticipativity not in (None, "merged", "explicit"):
            msg = "`nonanticipativity` must be 'merged' or 'explicit', "
            msg += f"but found {self.nonanticipativity!r}."
            raise ValueError(msg)

    def resolved(self) -> "ProgramOptions":
        """Return a copy with configuration defaults filled in."""
        if self.nonanticipativity is not None:
            return self
        return ProgramOptions(
            risk_aversion=self.risk_aversion,
            cvar_level=self.cvar_level,
            static_year=self.static_year,
            nonanticipativity=get_config()["nonanticipativity"],
        )


@dataclass
class ProgramContext:
    """Everything a constraint builder needs, plus the shared catalog."""

    instance: Instance
    paths: PathSet
    tree: ScenarioTree
    curves: AdoptionBoundTable
    options: ProgramOptions
    catalog: VariableCatalog = field(default_factory=VariableCatalog)
    _costs: Dict[str, GeneralizedCost] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.options = self.options.resolved()
        static_year = self.options.static_year
        if static_year is not None and static_year not in self.time.period_years:
            msg = f"`static_year` must be a period start year, but found {static_year}."
            raise ValueError(msg)

    @property
    def time(self):
        """Time structure of the instance."""
        return self.instance.time

    @property
    def merged(self) -> bool:
        """Whether first-stage decisions are shared columns."""
        return self.options.nonanticipativity == "merged"

    @property
    def static(self) -> bool:
        """Whether operations are restricted to a single period."""
        return self.options.static_year is not None

    @property
    def operational_periods(self) -> Tuple[int, ...]:
        """Periods with flow, fleet and adoption constraints."""
        if self.static:
            return (self.time.period_index(self.options.static_year),)
        return self.time.periods

    def scenarios_for(self, year: int) -> Tuple[str, ...]:
        """Scenarios rows of `year` are emitted for."""
        if not self.merged:
            return self.tree.ids
        return tuple(block[0] for block in information_partition(self.tree, year))

    def owner(self, year: Optional[int], scenario: Optional[str]) -> Optional[str]:
        """Scenario owning the column of `scenario` in `year`."""
        if year is None or scenario is None or not self.merged:
            return scenario
        return self.tree.representative(year, scenario)

    def var(self, block: str, index: Index, year: Optional[int], scenario: str) -> int:
        """Return the column of a variable, creating it if needed."""
        return self.catalog.add(block, index, year, self.owner(year, scenario))

    def find(
        self, block: str, index: Index, year: Optional[int], scenario: str
    ) -> Optional[int]:
        """Return the column of an existing variable, or None."""
        return self.catalog.get(block, index, year, self.owner(year, scenario))

    def lead_periods(self, t: int, lead: int) -> Tuple[int, ...]:
        """Periods whose investments with `lead` periods of delay are ready at `t`."""
        return tuple(p for p in self.time.periods if p + lead <= t)

    def costs(self, scenario: str) -> GeneralizedCost:
        """Generalized cost tables of `scenario` at every period start year."""
        if scenario not in self._costs:
            self._costs[scenario] = assemble_generalized_cost(
                self.instance, self.tree.cost_multiplier(scenario)
            )
        return self._costs[scenario]
