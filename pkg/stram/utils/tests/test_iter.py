#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
# Elements of stram.utils reuse code developed for skbase. These elements
# are copyrighted by the skbase developers, BSD-3-Clause License. For
# conditions see https://github.com/sktime/skbase/blob/main/LICENSE
"""Tests of the functionality for working with iterables.

tests in this module include:

- test_remove_type_text: verify the ``<class ...>`` wrapper is removed.
- test_format_seq_to_str: verify _format_seq_to_str outputs the expected format.
- test_format_seq_to_str_raises: verify _format_seq_to_str rejects iterators.
- test_chain_pairs: verify consecutive pairs span the items.
"""
from collections.abc import Sequence

import pytest

from stram.utils._iter import _chain_pairs, _format_seq_to_str, _remove_type_text

__author__ = ["stram-developers"]


def test_remove_type_text() -> None:
    """Test _remove_type_text removes <class ... > text as expected."""
    assert _remove_type_text(int) == "int"
    assert _remove_type_text(Sequence) == "collections.abc.Sequence"
    assert _remove_type_text("<class 'int'>") == "int"
    assert _remove_type_text("int") == "int"
    assert _remove_type_text("<type 'int'>") == "<type 'int'>"


def test_format_seq_to_str() -> None:
    """Test _format_seq_to_str returns expected output."""
    seq = ["rail", "road", 3, "sea"]
    assert _format_seq_to_str(seq) == "rail, road, 3, sea"
    assert _format_seq_to_str(seq, last_sep="and") == "rail, road, 3 and sea"
    assert _format_seq_to_str(seq, sep=";") == "rail;road;3;sea"

    assert _format_seq_to_str([list, tuple]) == "<class 'list'>, <class 'tuple'>"
    assert (
        _format_seq_to_str([float, int], last_sep="or", remove_type_text=True)
        == "float or int"
    )
    assert _format_seq_to_str(int, remove_type_text=True) == "int"

    # sets are sorted so messages do not depend on hashing
    assert _format_seq_to_str({"sea", "rail"}) == "rail, sea"
    assert _format_seq_to_str(frozenset({2023, 2026})) == "2023, 2026"

    # scalars ignore the separators
    assert _format_seq_to_str(7, sep=";") == "7"
    assert _format_seq_to_str("road", last_sep="or") == "road"
    assert _format_seq_to_str(["road"], last_sep="or") == "road"


def test_format_seq_to_str_raises() -> None:
    """Test _format_seq_to_str raises error when input is unexpected type."""
    with pytest.raises(TypeError, match="`seq` must be a sequence, set or scalar.*"):
        _format_seq_to_str(c for c in [1, 2, 3])


@pytest.mark.parametrize(
    "items, expected",
    [
        ([], []),
        (["base"], []),
        (["O", "P"], [("O", "P")]),
        (iter(["O", "P", "B"]), [("O", "P"), ("P", "B")]),
    ],
)
def test_chain_pairs(items, expected) -> None:
    """Test _chain_pairs links every item to its successor."""
    assert _chain_pairs(items) == expected
