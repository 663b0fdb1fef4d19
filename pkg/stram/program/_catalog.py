#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Variable catalog and constraint rows of the stochastic program.

Variable blocks:

- ``h``: path flow of a product (tonnes per year).
- ``x``: arc flow per fuel and product.
- ``h_empty``: empty-vehicle flow on a unimodal path per vehicle type.
- ``b``: empty-vehicle arc flow per fuel and vehicle type.
- ``q``: transport work per mode and fuel in a period (tonne-km).
- ``q_year``: transport work per mode and fuel in a calendar year.
- ``q_total``: transport work per mode in a calendar year.
- ``q_minus``: decrease of transport work per mode and fuel since the last period.
- ``y``: charging capacity added on a road edge.
- ``upsilon``: edge upgrade enabling a fuel (binary).
- ``epsilon``: rail edge capacity expansion (binary).
- ``nu``: terminal capacity expansion (binary).
- ``u``: value-at-risk level of the CVaR term (free).
- ``w``: excess cost of a scenario over ``u``.
"""
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "BLOCKS",
    "INVESTMENT_BLOCKS",
    "VariableDomain",
    "Variable",
    "VariableCatalog",
    "Row",
    "make_row",
]

Index = Tuple
VariableKey = Tuple[str, Index, Optional[int], Optional[str]]


@dataclass(frozen=True)
class VariableDomain:
    """Bounds and integrality shared by every variable of a block."""

    lower: float
    upper: float
    is_binary: bool = False


_NONNEGATIVE = VariableDomain(0.0, math.inf)

BLOCKS: Dict[str, VariableDomain] = {
    "h": _NONNEGATIVE,
    "x": _NONNEGATIVE,
    "h_empty": _NONNEGATIVE,
    "b": _NONNEGATIVE,
    "q": _NONNEGATIVE,
    "q_year": _NONNEGATIVE,
    "q_total": _NONNEGATIVE,
    "q_minus": _NONNEGATIVE,
    "y": _NONNEGATIVE,
    "upsilon": VariableDomain(0.0, 1.0, True),
    "epsilon": VariableDomain(0.0, 1.0, True),
    "nu": VariableDomain(0.0, 1.0, True),
    "u": VariableDomain(-math.inf, math.inf),
    "w": _NONNEGATIVE,
}

INVESTMENT_BLOCKS: Tuple[str, ...] = ("epsilon", "nu", "upsilon", "y")


@dataclass(frozen=True)
class Variable:
    """One column of the program.

    Parameters
    ----------
    block : str
        Variable block, a key of :data:`BLOCKS`.
    index : tuple
        Block-specific index, e.g. ``(arc_key, fuel, product)`` for ``x``.
    year : int or None
        Calendar year: the period start year for period variables, the year for
        yearly variables and None for the CVaR auxiliaries.
    scenario : str or None
        Scenario owning the column. Merged first-stage columns are owned by the
        first scenario of their block; ``u`` has no scenario.
    """

    block: str
    index: Index
    year: Optional[int]
    scenario: Optional[str]

    @property
    def key(self) -> VariableKey:
        """``(block, index, year, scenario)``."""
        return (self.block, self.index, self.year, self.scenario)

    @property
    def domain(self) -> VariableDomain:
        """Domain of the variable's block."""
        return BLOCKS[self.block]

    @property
    def is_binary(self) -> bool:
        """Whether the variable is 0/1."""
        return self.domain.is_binary

    @property
    def is_investment(self) -> bool:
        """Whether the variable is an investment decision."""
        return self.block in INVESTMENT_BLOCKS

    @property
    def name(self) -> str:
        """Readable name, e.g. ``x[(a, b, road, 1),Diesel,p1|2023|base]``."""
        parts = ",".join(_index_text(i) for i in self.index)
        year = "" if self.year is None else str(self.year)
        scenario = "" if self.scenario is None else self.scenario
        return f"{self.block}[{parts}|{year}|{scenario}]"


def _index_text(item) -> str:
    if isinstance(item, tuple):
        return "(" + ", ".join(str(i) for i in item) + ")"
    return str(item)


class VariableCatalog:
    """Columns of the program in creation order.

    Adding a variable twice returns the column of the first addition.

    Examples
    --------
    >>> from stram.program import VariableCatalog
    >>> catalog = VariableCatalog()
    >>> catalog.add("h", ("k0", "p1"), 2023, "base")
    0
    >>> catalog.add("h", ("k0", "p1"), 2023, "base")
    0
    >>> catalog.add("epsilon", (("a", "b", "rail", 1),), 2023, "base")
    1
    >>> len(catalog), catalog.binaries
    (2, (1,))
    """

    def __init__(self) -> None:
        self._variables: List[Variable] = []
        self._columns: Dict[VariableKey, int] = {}

    def __len__(self) -> int:
        return len(self._variables)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self._variables)

    def __getitem__(self, column: int) -> Variable:
        return self._variables[column]

    def __contains__(self, key: VariableKey) -> bool:
        return key in self._columns

    def add(
        self, block: str, index: Index, year: Optional[int], scenario: Optional[str]
    ) -> int:
        """Return the column of a variable, creating it if needed."""
        if block not in BLOCKS:
            raise KeyError(f"Unknown variable block {block!r}.")
        key = (block, tuple(index), year, scenario)
        column = self._columns.get(key)
        if column is None:
            column = len(self._variables)
            self._variables.append(Variable(*key))
            self._columns[key] = column
        return column

    def get(
        self, block: str, index: Index, year: Optional[int], scenario: Optional[str]
    ) -> Optional[int]:
        """Return the column of a variable, or None if it does not exist."""
        return self._columns.get((block, tuple(index), year, scenario))

    def columns_of(self, block: str) -> Tuple[int, ...]:
        """Return the columns of one block in creation order."""
        return tuple(c for c, v in enumerate(self._variables) if v.block == block)

    @property
    def binaries(self) -> Tuple[int, ...]:
        """Columns of binary variables."""
        return tuple(c for c, v in enumerate(self._variables) if v.is_binary)

    def bounds(self) -> Tuple[Tuple[float, float], ...]:
        """Return ``(lower, upper)`` of every column."""
        return tuple((v.domain.lower, v.domain.upper) for v in self._variables)


@dataclass(frozen=True)
class Row:
    """One linear constraint ``sum(coef * column) sense rhs``.

    Parameters
    ----------
    tag : str
        Constraint family, e.g. ``"demand"`` or ``"rail_capacity"``.
    index : tuple
        Family-specific index of the row.
    year : int or None
        Calendar year the row belongs to, None for rows spanning the horizon.
    scenario : str or None
        Scenario the row is emitted for.
    coefs : mapping
        Column to nonzero coefficient.
    sense : {"<=", "=", ">="}
        Constraint sense.
    rhs : float
        Right-hand side.
    """

    tag: str
    index: Index
    year: Optional[int]
    scenario: Optional[str]
    coefs: Mapping[int, float]
    sense: str
    rhs: float

    def activity(self, values) -> float:
        """Return the left-hand side at `values` (indexable by column)."""
        return sum(coef * float(values[c]) for c, coef in self.coefs.items())

    def violation(self, values) -> float:
        """Return how far `values` violate the row, 0 if satisfied."""
        lhs = self.activity(values)
        if self.sense == "<=":
            return max(lhs - self.rhs, 0.0)
        if self.sense == ">=":
            return max(self.rhs - lhs, 0.0)
        return abs(lhs - self.rhs)


def make_row(
    tag: str,
    index: Index,
    year: Optional[int],
    scenario: Optional[str],
    terms: Iterable[Tuple[Optional[int], float]],
    sense: str,
    rhs: float,
) -> Optional[Row]:
    """Build a row from ``(column, coefficient)`` terms.

    Terms on the same column are summed, terms on a None column are dropped and
    zero coefficients removed. Rows left without coefficients are not built.

    Returns
    -------
    Row or None
        The row, or None when no coefficient remains.
    """
    if sense not in ("<=", "=", ">="):
        raise ValueError(f"Unknown constraint sense {sense!r}.")
    coefs: Dict[int, float] = {}
    for column, coef in terms:
        if column is None:
            continue
        coefs[column] = coefs.get(column, 0.0) + float(coef)
    coefs = {c: v for c, v in coefs.items() if v != 0.0}
    if not coefs:
        return None
    return Row(tag, tuple(index), year, scenario, coefs, sense, float(rhs))
