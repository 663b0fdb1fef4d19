#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Cheapest unimodal paths and their composition along mode sequences.

Ties between equal-cost paths are broken by the lexicographic order of the arc key
sequence, so every table and composition is deterministic.
"""
import heapq
import itertools
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from stram.model import Arc, ArcKey, PathGenerationError

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["unimodal_cheapest", "compose_mode_sequence", "mode_sequences"]

Route = Tuple[float, Tuple[ArcKey, ...]]
UnimodalTable = Dict[Tuple[str, str], Route]


def _single_source(
    source: str, adjacency: Mapping[str, Sequence[Tuple[ArcKey, float]]]
) -> Dict[str, Route]:
    best: Dict[str, Route] = {source: (0.0, ())}
    heap: List[Tuple[float, Tuple[ArcKey, ...], str]] = [(0.0, (), source)]
    settled = set()
    while heap:
        cost, route, node = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        for key, arc_cost in adjacency.get(node, ()):
            target = key[1]
            if target in settled:
                continue
            candidate = (cost + arc_cost, route + (key,))
            if target not in best or candidate < best[target]:
                best[target] = candidate
                heapq.heappush(heap, (candidate[0], candidate[1], target))
    del best[source]
    return best


def unimodal_cheapest(
    arcs: Iterable[Arc], mode: str, arc_cost: Mapping[ArcKey, float]
) -> UnimodalTable:
    """Compute all-pairs cheapest paths on the arcs of one mode.

    Parameters
    ----------
    arcs : iterable of Arc
        Network arcs; arcs of other modes are ignored.
    mode : str
        The mode.
    arc_cost : mapping
        Arc key to a nonnegative cost. Arcs without a cost are not usable.

    Returns
    -------
    dict
        ``(origin, destination)`` to ``(cost, arc keys)`` for every reachable pair
        with ``origin != destination``.

    Raises
    ------
    PathGenerationError
        If a usable arc has a negative cost.

    Examples
    --------
    >>> from stram.model import Arc
    >>> from stram.paths import unimodal_cheapest
    >>> arcs = [Arc("A", "B", "road", 1, 1.0, frozenset({"Diesel"})),
    ...         Arc("B", "C", "road", 1, 1.0, frozenset({"Diesel"})),
    ...         Arc("A", "C", "road", 1, 1.0, frozenset({"Diesel"}))]
    >>> costs = {arcs[0].key: 5.0, arcs[1].key: 4.0, arcs[2].key: 10.0}
    >>> cost, route = unimodal_cheapest(arcs, "road", costs)[("A", "C")]
    >>> cost, [key[:2] for key in route]
    (9.0, [('A', 'B'), ('B', 'C')])
    """
    adjacency: Dict[str, List[Tuple[ArcKey, float]]] = {}
    nodes = set()
    for arc in arcs:
        if arc.mode != mode or arc.key not in arc_cost:
            continue
        cost = float(arc_cost[arc.key])
        if cost < 0:
            raise PathGenerationError(f"Negative cost {cost} on arc {arc.key}.")
        adjacency.setdefault(arc.origin, []).append((arc.key, cost))
        nodes.update((arc.origin, arc.destination))

    table: UnimodalTable = {}
    for source in sorted(nodes):
        for target, route in _single_source(source, adjacency).items():
            table[(source, target)] = route
    return table


def compose_mode_sequence(
    origin: str,
    destination: str,
    sequence: Sequence[str],
    tables: Mapping[str, UnimodalTable],
    transfer_cost: Callable[[str, str], float],
    memo: Optional[Dict[Tuple[str, str, Tuple[str, ...]], Optional[Route]]] = None,
) -> Optional[Route]:
    """Find the cheapest path from `origin` to `destination` along `sequence`.

    A two-mode path picks the transfer node minimizing the sum of both unimodal
    legs and the transfer cost. A three-mode path picks the first transfer node
    and continues with the best two-mode path from there.

    Parameters
    ----------
    origin, destination : str
        End nodes.
    sequence : sequence of str
        Modes in travel order, one to three of them, no consecutive repeats.
    tables : mapping
        Mode to its :func:`unimodal_cheapest` table.
    transfer_cost : callable
        ``(mode_from, mode_to) -> cost`` per tonne.
    memo : dict, default=None
        Cache of two-mode results shared across calls.

    Returns
    -------
    tuple or None
        ``(cost, arc keys)``, or None if no admissible path exists.
    """
    sequence = tuple(sequence)
    if not 1 <= len(sequence) <= 3:
        raise ValueError("Mode sequences hold one to three modes.")
    if len(sequence) == 1:
        return tables.get(sequence[0], {}).get((origin, destination))

    key = (origin, destination, sequence)
    if memo is not None and key in memo:
        return memo[key]

    first = tables.get(sequence[0], {})
    best: Optional[Route] = None
    for (start, node), (cost, route) in first.items():
        if start != origin or node in (origin, destination):
            continue
        rest = compose_mode_sequence(
            node, destination, sequence[1:], tables, transfer_cost, memo
        )
        if rest is None:
            continue
        candidate = (
            cost + transfer_cost(sequence[0], sequence[1]) + rest[0],
            route + rest[1],
        )
        if best is None or candidate < best:
            best = candidate

    if memo is not None:
        memo[key] = best
    return best


def mode_sequences(modes: Sequence[str], max_modes: int) -> Tuple[Tuple[str, ...], ...]:
    """Enumerate mode sequences of one to `max_modes` modes without repeats in a row.

    Examples
    --------
    >>> from stram.paths import mode_sequences
    >>> mode_sequences(["rail", "road"], 2)
    (('rail',), ('road',), ('rail', 'road'), ('road', 'rail'))
    """
    if not 1 <= max_modes <= 3:
        raise ValueError("`max_modes` must be 1, 2 or 3.")
    sequences = []
    for length in range(1, max_modes + 1):
        for sequence in itertools.product(sorted(modes), repeat=length):
            if all(a != b for a, b in zip(sequence[:-1], sequence[1:])):
                sequences.append(sequence)
    return tuple(sequences)
