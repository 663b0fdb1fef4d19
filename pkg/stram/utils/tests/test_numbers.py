#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Tests of number rounding and serialization of written files."""
import json
import math

import numpy as np
import polars as pl
import pytest

from stram.utils._numbers import _round_frame, _round_sig, _to_serializable, _write_json

__author__ = ["stram-developers"]


@pytest.mark.parametrize(
    "value, expected",
    [
        (0.1 + 0.2, 0.3),
        (123456789.0123456, 123456789.012),
        (-1.0 / 3.0, -0.333333333333),
        (0.0, 0.0),
        (1e-20 / 3.0, 3.33333333333e-21),
    ],
)
def test_round_sig(value, expected) -> None:
    """Test values keep 12 significant digits."""
    assert _round_sig(value) == expected


@pytest.mark.parametrize("value", [math.inf, -math.inf])
def test_round_sig_keeps_infinity(value) -> None:
    """Test infinite values are returned unchanged."""
    assert _round_sig(value) == value


def test_to_serializable_handles_nested_numpy_and_non_finite() -> None:
    """Test nested containers, numpy scalars and non-finite floats convert."""
    data = {
        1: (np.float64(2.0 / 3.0), np.int64(4)),
        "flags": [True, None, "x"],
        "bad": [math.nan, -math.inf],
    }
    assert _to_serializable(data) == {
        "1": [0.666666666667, 4],
        "flags": [True, None, "x"],
        "bad": ["nan", "-inf"],
    }
    with pytest.raises(TypeError, match="Cannot serialize"):
        _to_serializable({"s": {1, 2}})


def test_write_json_is_sorted_and_stable(tmp_path) -> None:
    """Test written JSON has sorted keys and identical bytes across writes."""
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    _write_json(first, {"sp": 1.0 / 3.0, "eev": math.inf})
    _write_json(second, {"eev": math.inf, "sp": 1.0 / 3.0})
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text(encoding="utf-8")) == {
        "eev": "inf",
        "sp": 0.333333333333,
    }


def test_round_frame_rounds_float_columns_only() -> None:
    """Test float columns are rounded while other columns are untouched."""
    df = pl.DataFrame({"year": [2023, 2026], "cost": [0.1 + 0.2, 2.0 / 3.0]})
    rounded = _round_frame(df)
    assert rounded["year"].to_list() == [2023, 2026]
    assert rounded["cost"].to_list() == [0.3, 0.666666666667]
    text = pl.DataFrame({"mode": ["road"]})
    assert _round_frame(text).equals(text)
