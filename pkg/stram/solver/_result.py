#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Solve statuses, results and options."""
import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from stram._config import get_config

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["SolveStatus", "SolveResult", "SolveOptions"]


class SolveStatus(str, enum.Enum):
    """Outcome of a solve.

    The built-in solver reports OPTIMAL once the gap closes to `mip_gap`, and LIMIT
    with the incumbent and its gap when a time or iteration limit ends the search
    first.
    FEASIBLE only comes from :func:`stram.solver.import_solution`, for an imported
    solution file that carries values without an optimality status.

    Examples
    --------
    >>> from stram.solver import SolveStatus
    >>> SolveStatus("feasible") is SolveStatus.FEASIBLE
    True
    """

    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    LIMIT = "limit"


@dataclass(frozen=True)
class SolveOptions:
    """Tolerances and limits of one solve.

    Options are frozen before work is handed to workers so that no solve depends on
    the caller's thread-local configuration.

    Parameters
    ----------
    mip_gap : float, default=0.005
        Relative gap at which branch-and-bound stops.
    time_limit : float, default=inf
        Wall-clock seconds.
    feasibility_tol : float, default=1e-6
        Largest accepted bound or row violation.
    integrality_tol : float, default=1e-6
        Largest accepted distance of a binary from 0 or 1.
    max_lp_iterations : int, default=100000
        Simplex pivots per LP.
    """

    mip_gap: float = 0.005
    time_limit: float = math.inf
    feasibility_tol: float = 1e-6
    integrality_tol: float = 1e-6
    max_lp_iterations: int = 100000

    @classmethod
    def from_config(cls, **overrides) -> "SolveOptions":
        """Return options from the current configuration, with overrides.

        Overrides set to None are ignored.

        Examples
        --------
        >>> from stram import config_context
        >>> from stram.solver import SolveOptions
        >>> with config_context(mip_gap=0.01):
        ...     SolveOptions.from_config(time_limit=None).mip_gap
        0.01
        """
        config = get_config()
        values = {
            "mip_gap": config["mip_gap"],
            "time_limit": config["time_limit"],
            "feasibility_tol": config["feasibility_tol"],
            "integrality_tol": config["integrality_tol"],
            "max_lp_iterations": config["max_lp_iterations"],
        }
        for name, value in overrides.items():
            if name not in values:
                raise TypeError(f"Unknown solve option {name!r}.")
            if value is not None:
                values[name] = value
        return cls(**values)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of solving a linear or mixed-integer program.

    Parameters
    ----------
    status : SolveStatus
        Outcome.
    objective : float
        Objective of the returned values; ``inf`` without a solution.
    values : numpy.ndarray
        Variable values, empty without a solution.
    bound : float
        Best proven lower bound on the optimal objective.
    gap : float
        Relative gap ``(objective - bound) / max(|objective|, 1e-10)``.
    wall_time : float
        Seconds spent.
    iterations : int, default=0
        Simplex pivots over all LPs.
    nodes : int, default=0
        Branch-and-bound nodes solved.
    message : str, default=""
        Diagnostics, e.g. why a limit was hit.
    """

    status: SolveStatus
    objective: float
    values: np.ndarray
    bound: float
    gap: float
    wall_time: float
    iterations: int = 0
    nodes: int = 0
    message: str = ""
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def has_solution(self) -> bool:
        """Whether values are available."""
        return self.status in (
            SolveStatus.OPTIMAL,
            SolveStatus.FEASIBLE,
        ) or (self.status is SolveStatus.LIMIT and len(self.values) > 0)

    @staticmethod
    def relative_gap(objective: float, bound: float) -> float:
        """Return ``(objective - bound) / max(|objective|, 1e-10)``, 0 if negative.

        Examples
        --------
        >>> from stram.solver import SolveResult
        >>> SolveResult.relative_gap(100.0, 99.5)
        0.005
        """
        if not (math.isfinite(objective) and math.isfinite(bound)):
            return math.inf
        return max(objective - bound, 0.0) / max(abs(objective), 1e-10)


def _no_solution(
    status: SolveStatus,
    wall_time: float,
    iterations: int = 0,
    nodes: int = 0,
    message: str = "",
    bound: Optional[float] = None,
) -> SolveResult:
    return SolveResult(
        status=status,
        objective=math.inf if status is not SolveStatus.UNBOUNDED else -math.inf,
        values=np.empty(0),
        bound=-math.inf if bound is None else bound,
        gap=math.inf,
        wall_time=wall_time,
        iterations=iterations,
        nodes=nodes,
        message=message,
    )
