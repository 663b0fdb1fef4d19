# This code reuses some tests in scikit-learn tests/test_config.py
# The code is copyrighted by the respective scikit-learn developers (BSD-3-Clause
# License): https://github.com/scikit-learn/scikit-learn/blob/main/COPYING
"""Test configuration functionality."""
import importlib
import math
import time
from concurrent.futures import ThreadPoolExecutor

import pytest
from joblib import Parallel, delayed

import stram
from stram._config import _CONFIG_REGISTRY, _GLOBAL_CONFIG_DEFAULT, N_JOBS_ENV_VAR
from stram._config_param_setting import ConfigParamSetting

NONANTICIPATIVITY_VALUES = _CONFIG_REGISTRY["nonanticipativity"].get_allowed_values()
FIXING_VALUES = _CONFIG_REGISTRY["first_stage_fixing"].get_allowed_values()
MAX_MODES_VALUES = _CONFIG_REGISTRY["max_modes"].get_allowed_values()


@pytest.fixture
def global_config_default():
    """Config registry fixture."""
    return _GLOBAL_CONFIG_DEFAULT


@pytest.mark.parametrize("allowed_values", (None, (), ("a", "b"), range(1, 4)))
def test_config_param_get_allowed_values(allowed_values):
    """Test get_allowed_values always returns a tuple."""
    setting = ConfigParamSetting(
        name="some_param",
        expected_type=str,
        default_value="a",
        allowed_values=allowed_values,
    )
    assert isinstance(setting.get_allowed_values(), tuple)


@pytest.mark.parametrize("expected_type", (int, (int, float)))
def test_config_param_get_expected_type(expected_type):
    """Test get_expected_type always returns a tuple."""
    setting = ConfigParamSetting(
        name="some_param", expected_type=expected_type, default_value=1
    )
    assert isinstance(setting.get_expected_type(), tuple)


@pytest.mark.parametrize(
    "value, expected",
    [
        (0.0, True),
        (0.5, True),
        (1.0, True),
        (-0.1, False),
        (1.5, False),
        (math.nan, False),
        ("0.1", False),
        (True, False),
    ],
)
def test_config_param_range_check(value, expected):
    """Test values are checked against type and closed range."""
    setting = ConfigParamSetting(
        name="some_param", expected_type=float, default_value=0.5, valid_range=(0, 1)
    )
    assert setting.is_valid_param_value(value) is expected


def test_config_param_get_valid_or_default_warns():
    """Test an invalid value warns and falls back to the default."""
    setting = ConfigParamSetting(
        name="some_param",
        expected_type=str,
        default_value="merged",
        allowed_values=("merged", "explicit"),
    )
    with pytest.warns(UserWarning, match=r"When setting global.*"):
        assert setting.get_valid_param_or_default(7) == "merged"
    with pytest.warns(UserWarning, match=r"some message.*"):
        value = setting.get_valid_param_or_default(
            "joined", default_value="explicit", msg="some message"
        )
    assert value == "explicit"


def test_get_default_config_always_returns_default(global_config_default):
    """Test get_default_config is unaffected by set_config."""
    assert stram.get_default_config() == global_config_default
    stram.set_config(mip_gap=0.1)
    assert stram.get_default_config() == global_config_default
    stram.reset_config()


@pytest.mark.parametrize("nonanticipativity", NONANTICIPATIVITY_VALUES)
@pytest.mark.parametrize("first_stage_fixing", FIXING_VALUES)
@pytest.mark.parametrize("max_modes", MAX_MODES_VALUES)
def test_set_config_then_get_config_returns_expected_value(
    nonanticipativity, first_stage_fixing, max_modes
):
    """Verify get_config returns the values given to set_config."""
    stram.set_config(
        nonanticipativity=nonanticipativity,
        first_stage_fixing=first_stage_fixing,
        max_modes=max_modes,
    )
    config = stram.get_config()
    assert config["nonanticipativity"] == nonanticipativity
    assert config["first_stage_fixing"] == first_stage_fixing
    assert config["max_modes"] == max_modes
    stram.reset_config()


def test_set_config_with_none_value():
    """Verify a None value leaves the setting unchanged."""
    assert stram.get_config()["mip_gap"] == 0.005
    stram.set_config(mip_gap=None)
    assert stram.get_config()["mip_gap"] == 0.005
    stram.set_config(mip_gap=0.0)
    stram.set_config(mip_gap=None)
    assert stram.get_config()["mip_gap"] == 0.0
    stram.reset_config()


def test_config_context_exception():
    """Test config_context restores settings after an exception."""
    with pytest.raises(ValueError):
        with stram.config_context(nonanticipativity="explicit"):
            assert stram.get_config()["nonanticipativity"] == "explicit"
            raise ValueError()
    assert stram.get_config()["nonanticipativity"] == "merged"


def test_config_context():
    """Verify config_context only changes settings inside its scope."""
    stram.reset_config()
    before = stram.get_config()

    # not entered, nothing changes
    stram.config_context(max_modes=3)
    assert stram.get_config() == before

    with stram.config_context(max_modes=3, time_limit=60.0):
        inside = stram.get_config()
    assert inside["max_modes"] == 3
    assert inside["time_limit"] == 60.0
    assert stram.get_config() == before

    with pytest.raises(TypeError):
        stram.config_context(True)
    with pytest.raises(TypeError):
        stram.config_context(do_something_else=True).__enter__()


def test_nested_config_context():
    """Verify nested contexts restore their own outer values."""
    with stram.config_context(first_stage_fixing="investments"):
        with stram.config_context(first_stage_fixing=None):
            assert stram.get_config()["first_stage_fixing"] == "investments"
        with stram.config_context(first_stage_fixing="all"):
            assert stram.get_config()["first_stage_fixing"] == "all"
        assert stram.get_config()["first_stage_fixing"] == "investments"
    assert stram.get_config()["first_stage_fixing"] == "all"


@pytest.mark.parametrize(
    "setting",
    [
        {"mip_gap": 2.0},
        {"mip_gap": "0.1"},
        {"max_modes": 4},
        {"nonanticipativity": "joined"},
        {"bass_steps_per_year": 0},
        {"feasibility_tol": 0.5},
    ],
)
def test_set_config_behavior_invalid_value(setting):
    """Test an invalid value warns and keeps the current configuration."""
    stram.reset_config()
    original = stram.get_config()
    with pytest.warns(UserWarning, match=r"Attempting to set an invalid value.*"):
        stram.set_config(**setting)
    assert stram.get_config() == original
    stram.reset_config()


def test_set_config_invalid_keyword_argument():
    """Test set_config rejects unknown and positional arguments."""
    with pytest.raises(TypeError):
        stram.set_config(do_something_else=True)
    with pytest.raises(TypeError):
        stram.set_config(True)


@pytest.mark.parametrize("raw, expected", [("4", 4), ("-1", -1), ("0", 1), ("x", 1)])
def test_n_jobs_default_is_read_from_environment(monkeypatch, raw, expected):
    """Test the worker count default comes from the environment variable."""
    monkeypatch.setenv(N_JOBS_ENV_VAR, raw)
    config_module = importlib.import_module("stram._config")
    assert config_module._n_jobs_from_env() == expected


def _set_nonanticipativity(mode, sleep_duration):
    """Return the nonanticipativity mode after waiting `sleep_duration`."""
    with stram.config_context(nonanticipativity=mode, local_threadsafe=True):
        time.sleep(sleep_duration)
        return stram.get_config()["nonanticipativity"]


def test_config_threadsafe():
    """Test settings made in one thread do not leak into another."""
    modes = ["merged", "explicit", "merged", "explicit"]
    sleep_durations = [0.1, 0.2, 0.1, 0.2]

    with ThreadPoolExecutor(max_workers=2) as e:
        items = list(e.map(_set_nonanticipativity, modes, sleep_durations))

    assert items == modes
    stram.reset_config()


@pytest.mark.parametrize("backend", ["loky", "multiprocessing", "threading"])
def test_config_threadsafe_joblib(backend):
    """Test the configuration is threadsafe with all joblib backends."""
    modes = ["merged", "explicit", "merged", "explicit"]
    sleep_durations = [0.1, 0.2, 0.1, 0.2]

    items = Parallel(backend=backend, n_jobs=2)(
        delayed(_set_nonanticipativity)(mode, sleep)
        for mode, sleep in zip(modes, sleep_durations)
    )

    assert items == modes
    stram.reset_config()
