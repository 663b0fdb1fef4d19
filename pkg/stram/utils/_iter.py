#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
# Elements of stram.utils reuse code developed for skbase. These elements
# are copyrighted by the skbase developers, BSD-3-Clause License. For
# conditions see https://github.com/sktime/skbase/blob/main/LICENSE
"""Utility functionality for working with sequences."""  # numpydoc ignore=ES01
import collections
import re
from typing import Any, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "_remove_type_text",
    "_format_seq_to_str",
    "_chain_pairs",
]

T = TypeVar("T")


def _remove_type_text(input_: Union[str, type]) -> str:
    """Remove the ``<class '...'>`` wrapper from a printed type.

    Parameters
    ----------
    input_ : str | type
        A type or its string form.

    Returns
    -------
    str
        The type name without the wrapper.

    Examples
    --------
    >>> from stram.utils._iter import _remove_type_text
    >>> _remove_type_text(float)
    'float'
    >>> _remove_type_text("float")
    'float'
    """
    if not isinstance(input_, str):
        input_ = str(input_)

    m = re.match("^<class '(.*)'>$", input_)
    return m[1] if m else input_


def _format_seq_to_str(
    seq: Union[Any, Sequence[Any]],
    sep: str = ", ",
    last_sep: Optional[str] = None,
    remove_type_text: bool = False,
) -> str:
    """Format a sequence as a delimited string for error messages.

    Parameters
    ----------
    seq : Any | Sequence[Any]
        The sequence (or scalar) to format.
    sep : str, default=", "
        The separator placed between elements.
    last_sep : str, default=None
        Word placed before the last element, e.g. "and" or "or". If None `sep`
        is used throughout.
    remove_type_text : bool, default=False
        Whether types are printed without their ``<class '...'>`` wrapper.

    Returns
    -------
    str
        The formatted string.

    Examples
    --------
    >>> from stram.utils._iter import _format_seq_to_str
    >>> _format_seq_to_str(["rail", "road", "sea"])
    'rail, road, sea'
    >>> _format_seq_to_str(["rail", "road", "sea"], last_sep="or")
    'rail, road or sea'
    >>> _format_seq_to_str((float, int), last_sep="or", remove_type_text=True)
    'float or int'
    """
    if isinstance(seq, str):
        return seq
    elif isinstance(seq, (int, float, bool)):
        return str(seq)
    elif isinstance(seq, type):
        return _remove_type_text(seq) if remove_type_text else str(seq)
    elif isinstance(seq, (set, frozenset)):
        seq = sorted(seq, key=str)
    elif not isinstance(seq, collections.abc.Sequence):
        msg = "`seq` must be a sequence, set or scalar str, int, float, bool or type."
        msg += f"\nBut found {type(seq)}."
        raise TypeError(msg)

    seq_str = [str(e) for e in seq]
    if remove_type_text:
        seq_str = [_remove_type_text(s) for s in seq_str]

    if last_sep is None or len(seq_str) < 2:
        return sep.join(seq_str)
    return sep.join(seq_str[:-1]) + f" {last_sep} " + seq_str[-1]


def _chain_pairs(items: Iterable[T]) -> List[Tuple[T, T]]:
    """Return consecutive pairs of `items`, a spanning chain over them.

    Parameters
    ----------
    items : Iterable
        The items to link.

    Returns
    -------
    list of tuple
        ``len(items) - 1`` pairs ``(items[i], items[i + 1])``.

    Examples
    --------
    >>> from stram.utils._iter import _chain_pairs
    >>> _chain_pairs(["OO", "OP", "BB"])
    [('OO', 'OP'), ('OP', 'BB')]
    >>> _chain_pairs(["BB"])
    []
    """
    items = list(items)
    return list(zip(items[:-1], items[1:]))
