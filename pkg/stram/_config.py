#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
# Includes functionality like get_config, set_config, and config_context
# that is similar to scikit-learn and skbase. These elements are copyrighted by
# their respective developers. For conditions see
# https://github.com/scikit-learn/scikit-learn/blob/main/COPYING
# https://github.com/sktime/skbase/blob/main/LICENSE
"""Global configuration of solver tolerances, model options and parallelism.

Settings are stored per thread. :func:`set_config` also updates the process wide
defaults unless ``local_threadsafe=True``.
"""
import math
import os
import threading
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Literal, Optional, get_args

from stram._config_param_setting import ConfigParamSetting

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "get_default_config",
    "get_config",
    "set_config",
    "reset_config",
    "config_context",
    "N_JOBS_ENV_VAR",
]

N_JOBS_ENV_VAR = "STRAM_N_JOBS"

ConfigParam = str
NONANTICIPATIVITY_MODES = Literal["merged", "explicit"]
FIRST_STAGE_FIXING = Literal["all", "investments"]
COST_SIGN_CONVENTIONS = Literal["optimistic_cheaper", "as_tabulated"]


def _n_jobs_from_env() -> int:
    raw = os.environ.get(N_JOBS_ENV_VAR, "").strip()
    try:
        n_jobs = int(raw)
    except ValueError:
        return 1
    return n_jobs if n_jobs != 0 else 1


_CONFIG_REGISTRY: Dict[ConfigParam, ConfigParamSetting] = {
    "mip_gap": ConfigParamSetting(
        name="mip_gap",
        expected_type=float,
        default_value=0.005,
        valid_range=(0.0, 1.0),
    ),
    "time_limit": ConfigParamSetting(
        name="time_limit",
        expected_type=(float, int),
        default_value=math.inf,
        valid_range=(0.0, math.inf),
    ),
    "feasibility_tol": ConfigParamSetting(
        name="feasibility_tol",
        expected_type=float,
        default_value=1e-6,
        valid_range=(1e-12, 1e-2),
    ),
    "integrality_tol": ConfigParamSetting(
        name="integrality_tol",
        expected_type=float,
        default_value=1e-6,
        valid_range=(1e-12, 0.49),
    ),
    "max_lp_iterations": ConfigParamSetting(
        name="max_lp_iterations",
        expected_type=int,
        default_value=100_000,
        valid_range=(1, math.inf),
    ),
    "max_modes": ConfigParamSetting(
        name="max_modes",
        expected_type=int,
        default_value=2,
        allowed_values=(1, 2, 3),
    ),
    "nonanticipativity": ConfigParamSetting(
        name="nonanticipativity",
        expected_type=str,
        default_value="merged",
        allowed_values=get_args(NONANTICIPATIVITY_MODES),
    ),
    "first_stage_fixing": ConfigParamSetting(
        name="first_stage_fixing",
        expected_type=str,
        default_value="all",
        allowed_values=get_args(FIRST_STAGE_FIXING),
    ),
    "cost_sign_convention": ConfigParamSetting(
        name="cost_sign_convention",
        expected_type=str,
        default_value="optimistic_cheaper",
        allowed_values=get_args(COST_SIGN_CONVENTIONS),
    ),
    "bass_steps_per_year": ConfigParamSetting(
        name="bass_steps_per_year",
        expected_type=int,
        default_value=100,
        valid_range=(1, math.inf),
    ),
    "n_jobs": ConfigParamSetting(
        name="n_jobs",
        expected_type=int,
        default_value=_n_jobs_from_env(),
    ),
}

_GLOBAL_CONFIG_DEFAULT: Dict[ConfigParam, Any] = {
    name: setting.default_value for name, setting in _CONFIG_REGISTRY.items()
}

global_config = _GLOBAL_CONFIG_DEFAULT.copy()

_THREAD_LOCAL_DATA = threading.local()


def _get_threadlocal_config() -> Dict[ConfigParam, Any]:
    """Get a threadlocal **mutable** configuration.

    If the configuration does not exist, copy the process wide configuration.

    Returns
    -------
    dict
        Threadlocal config or a copy of the process wide configuration.
    """
    if not hasattr(_THREAD_LOCAL_DATA, "global_config"):
        _THREAD_LOCAL_DATA.global_config = global_config.copy()
    return _THREAD_LOCAL_DATA.global_config  # type: ignore


def get_default_config() -> Dict[ConfigParam, Any]:
    """Retrieve the default configuration.

    Returns
    -------
    dict
        The configurable settings (keys) and their default values (values).

    See Also
    --------
    config_context :
        Configuration context manager.
    get_config :
        Retrieve current configuration values.
    set_config :
        Set configuration values.
    reset_config :
        Reset configuration to the defaults.

    Examples
    --------
    >>> from stram import get_default_config
    >>> get_default_config()["mip_gap"]
    0.005
    """
    return _GLOBAL_CONFIG_DEFAULT.copy()


def get_config() -> Dict[ConfigParam, Any]:
    """Retrieve current values for configuration set by :func:`set_config`.

    Returns
    -------
    dict
        The configurable settings (keys) and their current values (values).

    See Also
    --------
    config_context :
        Configuration context manager.
    get_default_config :
        Retrieve the default configuration.
    set_config :
        Set configuration values.
    reset_config :
        Reset configuration to the defaults.

    Examples
    --------
    >>> from stram import get_config
    >>> get_config()["nonanticipativity"]
    'merged'
    """
    return _get_threadlocal_config().copy()


def set_config(
    *,
    mip_gap: Optional[float] = None,
    time_limit: Optional[float] = None,
    feasibility_tol: Optional[float] = None,
    integrality_tol: Optional[float] = None,
    max_lp_iterations: Optional[int] = None,
    max_modes: Optional[int] = None,
    nonanticipativity: Optional[NONANTICIPATIVITY_MODES] = None,
    first_stage_fixing: Optional[FIRST_STAGE_FIXING] = None,
    cost_sign_convention: Optional[COST_SIGN_CONVENTIONS] = None,
    bass_steps_per_year: Optional[int] = None,
    n_jobs: Optional[int] = None,
    local_threadsafe: bool = False,
) -> None:
    """Set configuration values.

    Parameters left at None keep their current value.

    Parameters
    ----------
    mip_gap : float, default=None
        Relative optimality gap at which branch-and-bound stops.
    time_limit : float, default=None
        Wall clock limit in seconds for one MILP solve.
    feasibility_tol : float, default=None
        Absolute tolerance on row and bound violations.
    integrality_tol : float, default=None
        Distance from an integer below which a binary counts as integral.
    max_lp_iterations : int, default=None
        Pivot limit of one simplex call.
    max_modes : {1, 2, 3}, default=None
        Longest mode sequence considered during path generation.
    nonanticipativity : {"merged", "explicit"}, default=None
        Whether first-stage variables are shared columns or linked by equality rows.
    first_stage_fixing : {"all", "investments"}, default=None
        Which first-stage variables the EEV computation fixes.
    cost_sign_convention : {"optimistic_cheaper", "as_tabulated"}, default=None
        Direction of the cost deviation in optimistic scenarios.

        - "optimistic_cheaper": optimistic scenarios lower transport costs.
        - "as_tabulated": optimistic scenarios raise transport costs.

    bass_steps_per_year : int, default=None
        Number of fourth-order integration steps per year of Bass simulation.
    n_jobs : int, default=None
        Worker count handed to :class:`joblib.Parallel`.
    local_threadsafe : bool, default=False
        If False, the values also become the default for all threads.

    Returns
    -------
    None
        No output returned.

    See Also
    --------
    config_context :
        Configuration context manager.
    get_default_config :
        Retrieve the default configuration.
    get_config :
        Retrieve current configuration values.
    reset_config :
        Reset configuration to the defaults.

    Examples
    --------
    >>> from stram import get_config, set_config, reset_config
    >>> set_config(mip_gap=0.0)
    >>> get_config()["mip_gap"]
    0.0
    >>> reset_config()
    """
    local_config = _get_threadlocal_config()
    msg = "Attempting to set an invalid value for a global configuration.\n"
    msg += "Using current configuration value of parameter as a result.\n"

    proposed = {
        "mip_gap": mip_gap,
        "time_limit": time_limit,
        "feasibility_tol": feasibility_tol,
        "integrality_tol": integrality_tol,
        "max_lp_iterations": max_lp_iterations,
        "max_modes": max_modes,
        "nonanticipativity": nonanticipativity,
        "first_stage_fixing": first_stage_fixing,
        "cost_sign_convention": cost_sign_convention,
        "bass_steps_per_year": bass_steps_per_year,
        "n_jobs": n_jobs,
    }
    for param_name, value in proposed.items():
        if value is None:
            continue
        local_config[param_name] = _CONFIG_REGISTRY[
            param_name
        ].get_valid_param_or_default(
            value, default_value=local_config[param_name], msg=msg
        )

    if not local_threadsafe:
        global_config.update(local_config)

    return None


def reset_config() -> None:
    """Reset the configuration to the defaults.

    Returns
    -------
    None
        No output returned.

    See Also
    --------
    config_context :
        Configuration context manager.
    get_default_config :
        Retrieve the default configuration.
    get_config :
        Retrieve current configuration values.
    set_config :
        Set configuration values.

    Examples
    --------
    >>> from stram import get_config, get_default_config, set_config, reset_config
    >>> set_config(max_modes=3)
    >>> get_config() == get_default_config()
    False
    >>> reset_config()
    >>> get_config() == get_default_config()
    True
    """
    set_config(**get_default_config())
    return None


@contextmanager
def config_context(
    *,
    mip_gap: Optional[float] = None,
    time_limit: Optional[float] = None,
    feasibility_tol: Optional[float] = None,
    integrality_tol: Optional[float] = None,
    max_lp_iterations: Optional[int] = None,
    max_modes: Optional[int] = None,
    nonanticipativity: Optional[NONANTICIPATIVITY_MODES] = None,
    first_stage_fixing: Optional[FIRST_STAGE_FIXING] = None,
    cost_sign_convention: Optional[COST_SIGN_CONVENTIONS] = None,
    bass_steps_per_year: Optional[int] = None,
    n_jobs: Optional[int] = None,
    local_threadsafe: bool = False,
) -> Iterator[None]:
    """Temporarily change the configuration.

    Parameters
    ----------
    mip_gap : float, default=None
        See :func:`set_config`.
    time_limit : float, default=None
        See :func:`set_config`.
    feasibility_tol : float, default=None
        See :func:`set_config`.
    integrality_tol : float, default=None
        See :func:`set_config`.
    max_lp_iterations : int, default=None
        See :func:`set_config`.
    max_modes : {1, 2, 3}, default=None
        See :func:`set_config`.
    nonanticipativity : {"merged", "explicit"}, default=None
        See :func:`set_config`.
    first_stage_fixing : {"all", "investments"}, default=None
        See :func:`set_config`.
    cost_sign_convention : {"optimistic_cheaper", "as_tabulated"}, default=None
        See :func:`set_config`.
    bass_steps_per_year : int, default=None
        See :func:`set_config`.
    n_jobs : int, default=None
        See :func:`set_config`.
    local_threadsafe : bool, default=False
        If False, the values also become the default for all threads while the
        context is active.

    Yields
    ------
    None
        No output returned.

    See Also
    --------
    get_default_config :
        Retrieve the default configuration.
    get_config :
        Retrieve current configuration values.
    set_config :
        Set configuration values.
    reset_config :
        Reset configuration to the defaults.

    Notes
    -----
    All settings, not just those presently modified, are returned to their
    previous values when the context manager is exited.

    Examples
    --------
    >>> from stram import config_context, get_config
    >>> with config_context(nonanticipativity="explicit"):
    ...     get_config()["nonanticipativity"]
    'explicit'
    >>> get_config()["nonanticipativity"]
    'merged'
    """
    old_config = get_config()
    set_config(
        mip_gap=mip_gap,
        time_limit=time_limit,
        feasibility_tol=feasibility_tol,
        integrality_tol=integrality_tol,
        max_lp_iterations=max_lp_iterations,
        max_modes=max_modes,
        nonanticipativity=nonanticipativity,
        first_stage_fixing=first_stage_fixing,
        cost_sign_convention=cost_sign_convention,
        bass_steps_per_year=bass_steps_per_year,
        n_jobs=n_jobs,
        local_threadsafe=local_threadsafe,
    )

    try:
        yield
    finally:
        set_config(**old_config)
