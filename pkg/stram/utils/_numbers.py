#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Number formatting shared by every file written by ``stram``.

All numbers leave the package with 12 significant digits.
"""
import json
import math
from pathlib import Path
from typing import Any, List, Union

import polars as pl

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "SIGNIFICANT_DIGITS",
    "_round_sig",
    "_to_serializable",
    "_write_json",
    "_round_frame",
]

SIGNIFICANT_DIGITS = 12


def _round_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round `value` to `digits` significant digits.

    Parameters
    ----------
    value : float
        The number to round.
    digits : int, default=12
        Significant digits kept.

    Returns
    -------
    float
        The rounded number; non-finite values are returned unchanged.

    Examples
    --------
    >>> from stram.utils._numbers import _round_sig
    >>> _round_sig(0.1 + 0.2)
    0.3
    >>> _round_sig(2.0 / 3.0, digits=3)
    0.667
    """
    if not math.isfinite(value) or value == 0.0:
        return float(value)
    return float(f"{value:.{digits}g}")


def _to_serializable(obj: Any) -> Any:
    """Convert nested containers into JSON-ready values with rounded floats.

    Non-finite floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.

    Parameters
    ----------
    obj : Any
        Nested dict, list, tuple, float, int, str, bool or None.

    Returns
    -------
    Any
        The converted structure.

    Examples
    --------
    >>> from stram.utils._numbers import _to_serializable
    >>> _to_serializable({"eev": float("inf"), "sp": 1 / 3})
    {'eev': 'inf', 'sp': 0.333333333333}
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return _round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): _to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_serializable(v) for v in obj]
    # numpy scalars
    if hasattr(obj, "item"):
        return _to_serializable(obj.item())
    raise TypeError(f"Cannot serialize object of type {type(obj)}.")


def _write_json(path: Union[str, Path], obj: Any) -> None:
    """Write `obj` as indented, key-sorted JSON with rounded numbers.

    Parameters
    ----------
    path : str or Path
        Output file.
    obj : Any
        Data accepted by :func:`_to_serializable`.
    """
    text = json.dumps(_to_serializable(obj), indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _round_frame(df: pl.DataFrame) -> pl.DataFrame:
    """Round every float column of `df` to 12 significant digits.

    Parameters
    ----------
    df : polars.DataFrame
        The table to round.

    Returns
    -------
    polars.DataFrame
        A copy with rounded float columns.
    """
    float_cols = [
        name for name, dtype in df.schema.items() if dtype in (pl.Float32, pl.Float64)
    ]
    if not float_cols:
        return df
    return df.with_columns(
        [
            pl.col(name).map_elements(_round_sig, return_dtype=pl.Float64)
            for name in float_cols
        ]
    )
