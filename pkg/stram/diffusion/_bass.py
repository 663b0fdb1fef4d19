#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Bass diffusion envelopes for new mode-fuel technologies.

The adopted fraction ``F`` of the market potential follows

    dF/dtau = (alpha + beta * F) * (1 - F),   F(start_year) = 0,

with innovation ``alpha`` and imitation ``beta`` held constant within each
calendar year. The fastest possible adoption level in year ``tau`` is
``A(tau) = U * F(tau)`` where ``U`` is the potential share.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import polars as pl
from joblib import Parallel, delayed

from stram._config import get_config
from stram.model import BassParams, Instance, InstanceError
from stram.scenarios import ScenarioTree

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "AdoptionCurve",
    "AdoptionBoundTable",
    "rate_coefficients",
    "simulate_bass",
    "adoption_bound_table",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdoptionCurve:
    """Maximum adoption share of one mode-fuel per calendar year.

    Parameters
    ----------
    mode : str
        Mode of the technology.
    fuel : str
        Fuel of the technology.
    scenario : str
        Scenario whose coefficients produced the curve.
    values : mapping
        Calendar year to maximum share A in [0, U].
    """

    mode: str
    fuel: str
    scenario: str
    values: Mapping[int, float]

    def __getitem__(self, year: int) -> float:
        return self.values[year]

    @property
    def years(self) -> Tuple[int, ...]:
        """Years the curve is sampled at."""
        return tuple(self.values)


def rate_coefficients(
    params: BassParams,
    year: int,
    tree: Optional[ScenarioTree] = None,
    scenario: Optional[str] = None,
) -> Tuple[float, float]:
    """Return the innovation and imitation coefficients in effect in `year`.

    Parameters
    ----------
    params : BassParams
        Base coefficient pieces of the technology.
    year : int
        Calendar year.
    tree : ScenarioTree, default=None
        Tree supplying the scenario deviations. If None base values are returned.
    scenario : str, default=None
        Scenario id; required when `tree` is given.

    Returns
    -------
    tuple of float
        ``(alpha, beta)``: the piecewise-constant base values times the
        scenario's multipliers.

    Examples
    --------
    >>> from stram.diffusion import rate_coefficients
    >>> from stram.model import BassParams
    >>> from stram.scenarios import generate_tree
    >>> params = BassParams("road", "Battery", "Battery", 2028, 1.0,
    ...                     alpha=((2023, 0.02),), beta=((2023, 0.4),))
    >>> tree = generate_tree(["Battery"], branch_year=2034)
    >>> rate_coefficients(params, 2030, tree, "P")
    (0.02, 0.4)
    >>> tuple(round(v, 6) for v in rate_coefficients(params, 2034, tree, "P"))
    (0.015, 0.3)
    """
    alpha = params.base_alpha(year)
    beta = params.base_beta(year)
    if tree is None:
        return alpha, beta
    multipliers = tree.multipliers(scenario, params.fuel_group, year)
    return alpha * multipliers.alpha, beta * multipliers.beta


def _bass_rhs(f: np.ndarray, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    return (alpha + beta * f) * (1.0 - f)


def _integrate_years(
    alpha: np.ndarray, beta: np.ndarray, steps_per_year: int
) -> np.ndarray:
    """Integrate from F=0 through consecutive years with fourth-order Runge-Kutta.

    `alpha` and `beta` have shape ``(n_curves, n_years)``; the result has shape
    ``(n_curves, n_years + 1)`` and holds F at every year boundary.
    """
    n_curves, n_years = alpha.shape
    h = 1.0 / steps_per_year
    values = np.zeros((n_curves, n_years + 1))
    f = np.zeros(n_curves)
    for year in range(n_years):
        a = alpha[:, year]
        b = beta[:, year]
        for _ in range(steps_per_year):
            k1 = _bass_rhs(f, a, b)
            k2 = _bass_rhs(f + 0.5 * h * k1, a, b)
            k3 = _bass_rhs(f + 0.5 * h * k2, a, b)
            k4 = _bass_rhs(f + h * k3, a, b)
            f = f + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        values[:, year + 1] = f
    return np.clip(values, 0.0, 1.0)


def _curves_for(
    params: BassParams,
    years: Sequence[int],
    scenarios: Sequence[str],
    tree: Optional[ScenarioTree],
    steps_per_year: int,
) -> List[AdoptionCurve]:
    years = tuple(years)
    last = max(years)
    span = tuple(range(params.start_year, last))
    alpha = np.empty((len(scenarios), len(span)))
    beta = np.empty((len(scenarios), len(span)))
    for i, scenario in enumerate(scenarios):
        for j, year in enumerate(span):
            alpha[i, j], beta[i, j] = rate_coefficients(
                params, year, tree, scenario if tree is not None else None
            )
    fractions = _integrate_years(alpha, beta, steps_per_year)
    # monotone up to floating point noise
    fractions = np.maximum.accumulate(fractions, axis=1)

    curves = []
    for i, scenario in enumerate(scenarios):
        values: Dict[int, float] = {}
        for year in years:
            offset = year - params.start_year
            share = fractions[i, offset] if offset > 0 else 0.0
            values[year] = float(params.potential_share * share)
        curves.append(AdoptionCurve(params.mode, params.fuel, scenario, values))
    return curves


def simulate_bass(
    params: BassParams,
    years: Sequence[int],
    tree: Optional[ScenarioTree] = None,
    scenario: Optional[str] = None,
    steps_per_year: Optional[int] = None,
) -> AdoptionCurve:
    """Simulate the fastest possible adoption path of one technology.

    Parameters
    ----------
    params : BassParams
        Start year, potential share and coefficient pieces.
    years : sequence of int
        Calendar years at which the curve is sampled (on January 1).
    tree : ScenarioTree, default=None
        Tree supplying coefficient deviations. If None base coefficients are used.
    scenario : str, default=None
        Scenario id, required when `tree` is given.
    steps_per_year : int, default=None
        Runge-Kutta steps per year; the configured ``bass_steps_per_year`` if None.

    Returns
    -------
    AdoptionCurve
        Zero up to and including the start year, nondecreasing and bounded by
        the potential share afterwards.

    See Also
    --------
    adoption_bound_table :
        Curves of every new technology and scenario of an instance.

    Examples
    --------
    >>> from stram.diffusion import simulate_bass
    >>> from stram.model import BassParams
    >>> params = BassParams("road", "Battery", "Battery", 0, 1.0,
    ...                     alpha=((0, 0.01),), beta=((0, 0.4),))
    >>> round(simulate_bass(params, [0, 10])[10], 4)
    0.5914
    """
    if tree is not None and scenario is None:
        raise ValueError("`scenario` is required when `tree` is given.")
    if steps_per_year is None:
        steps_per_year = get_config()["bass_steps_per_year"]
    label = scenario if scenario is not None else "base"
    return _curves_for(params, years, (label,), tree, int(steps_per_year))[0]


@dataclass(frozen=True)
class AdoptionBoundTable:
    """Adoption curves keyed by ``(mode, fuel, scenario)``."""

    curves: Mapping[Tuple[str, str, str], AdoptionCurve]

    def bound(self, mode: str, fuel: str, year: int, scenario: str) -> float:
        """Return the maximum share A of (mode, fuel) in `year` under `scenario`."""
        return self.curves[(mode, fuel, scenario)][year]

    def has(self, mode: str, fuel: str) -> bool:
        """Whether curves exist for (mode, fuel)."""
        return any(key[:2] == (mode, fuel) for key in self.curves)

    def to_frame(self) -> pl.DataFrame:
        """Return the curves as a long table for plotting."""
        rows = [
            (curve.mode, curve.fuel, curve.scenario, year, share)
            for curve in self.curves.values()
            for year, share in curve.values.items()
        ]
        return pl.DataFrame(
            rows,
            schema={
                "mode": pl.Utf8,
                "fuel": pl.Utf8,
                "scenario": pl.Utf8,
                "year": pl.Int64,
                "max_share": pl.Float64,
            },
            orient="row",
        ).sort(["mode", "fuel", "scenario", "year"])


def adoption_bound_table(
    instance: Instance,
    tree: ScenarioTree,
    years: Optional[Sequence[int]] = None,
    steps_per_year: Optional[int] = None,
    n_jobs: Optional[int] = None,
) -> AdoptionBoundTable:
    """Simulate adoption curves of every new mode-fuel under every scenario.

    Parameters
    ----------
    instance : Instance
        The instance with Bass parameters of its new technologies.
    tree : ScenarioTree
        Scenario tree supplying coefficient deviations.
    years : sequence of int, default=None
        Sampled years; every year of the horizon if None.
    steps_per_year : int, default=None
        Runge-Kutta steps per year; the configured value if None.
    n_jobs : int, default=None
        Parallel workers over technologies; the configured value if None.

    Returns
    -------
    AdoptionBoundTable
        One curve per new (mode, fuel) and scenario. Established fuels have none.

    Raises
    ------
    InstanceError
        If a new fuel has no Bass parameters.
    """
    config = get_config()
    if years is None:
        years = instance.time.years
    if steps_per_year is None:
        steps_per_year = config["bass_steps_per_year"]
    if n_jobs is None:
        n_jobs = config["n_jobs"]

    technologies = []
    for mode in instance.modes:
        for fuel in instance.new_fuels_of_mode(mode):
            params = instance.adoption_params.get((mode, fuel))
            if params is None:
                msg = f"Missing adoption parameters for new fuel ({mode}, {fuel})."
                raise InstanceError(msg, file="adoption.csv")
            technologies.append(params)

    batches = Parallel(n_jobs=n_jobs)(
        delayed(_curves_for)(params, years, tree.ids, tree, int(steps_per_year))
        for params in technologies
    )
    curves = {
        (curve.mode, curve.fuel, curve.scenario): curve
        for batch in batches
        for curve in batch
    }
    logger.debug("Simulated %d adoption curves", len(curves))
    return AdoptionBoundTable(curves=curves)
