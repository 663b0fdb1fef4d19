#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Paths, path sets and their CSV form."""
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path as FilePath
from typing import Dict, List, Sequence, Tuple, Union

import polars as pl

from stram.model import ArcKey, InstanceError

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["Path", "PathSet", "read_paths", "write_paths"]

_PATH_COLUMNS = ("path_id", "position", "origin", "destination", "mode", "route")


@dataclass(frozen=True)
class Path:
    """An ordered sequence of directed arcs from an origin to a destination.

    Parameters
    ----------
    id : str
        Path identifier.
    arcs : tuple of arc keys
        Arcs in travel order; each arc starts where the previous one ends.
    """

    id: str
    arcs: Tuple[ArcKey, ...]

    def __post_init__(self) -> None:
        if not self.arcs:
            raise ValueError(f"Path {self.id!r} has no arcs.")
        for previous, current in zip(self.arcs[:-1], self.arcs[1:]):
            if previous[1] != current[0]:
                msg = f"Path {self.id!r}: arc {current} does not start where "
                msg += f"{previous} ends."
                raise ValueError(msg)

    @property
    def origin(self) -> str:
        """First node of the path."""
        return self.arcs[0][0]

    @property
    def destination(self) -> str:
        """Last node of the path."""
        return self.arcs[-1][1]

    @property
    def od(self) -> Tuple[str, str]:
        """``(origin, destination)``."""
        return (self.origin, self.destination)

    @property
    def nodes(self) -> Tuple[str, ...]:
        """Visited nodes in order."""
        return (self.origin,) + tuple(arc[1] for arc in self.arcs)

    @property
    def mode_sequence(self) -> Tuple[str, ...]:
        """Modes in travel order with consecutive repeats collapsed."""
        modes: List[str] = []
        for arc in self.arcs:
            if not modes or modes[-1] != arc[2]:
                modes.append(arc[2])
        return tuple(modes)

    @property
    def transfers(self) -> Tuple[Tuple[str, str, str], ...]:
        """Mode changes as ``(node, mode_from, mode_to)``."""
        return tuple(
            (previous[1], previous[2], current[2])
            for previous, current in zip(self.arcs[:-1], self.arcs[1:])
            if previous[2] != current[2]
        )

    @property
    def is_unimodal(self) -> bool:
        """Whether all arcs share one mode."""
        return len(self.mode_sequence) == 1


@dataclass(frozen=True)
class PathSet:
    """Deduplicated admissible paths with lookup indices.

    Examples
    --------
    >>> from stram.paths import Path, PathSet
    >>> paths = PathSet((
    ...     Path("k0", (("a", "b", "road", 1),)),
    ...     Path("k1", (("a", "c", "road", 1), ("c", "b", "sea", 1))),
    ... ))
    >>> paths.index_by_od[("a", "b")]
    ('k0', 'k1')
    >>> paths.terminal_usage[("c", "sea")]
    ('k1',)
    """

    paths: Tuple[Path, ...]

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    @cached_property
    def by_id(self) -> Dict[str, Path]:
        """Paths indexed by id."""
        return {path.id: path for path in self.paths}

    @cached_property
    def index_by_od(self) -> Dict[Tuple[str, str], Tuple[str, ...]]:
        """``(origin, destination)`` to the ids of its paths."""
        index: Dict[Tuple[str, str], List[str]] = {}
        for path in self.paths:
            index.setdefault(path.od, []).append(path.id)
        return {key: tuple(ids) for key, ids in index.items()}

    @cached_property
    def index_by_arc(self) -> Dict[ArcKey, Tuple[str, ...]]:
        """Arc key to the ids of the paths using it."""
        index: Dict[ArcKey, List[str]] = {}
        for path in self.paths:
            for arc in dict.fromkeys(path.arcs):
                index.setdefault(arc, []).append(path.id)
        return {key: tuple(ids) for key, ids in index.items()}

    @cached_property
    def unimodal(self) -> Tuple[str, ...]:
        """Ids of the single-mode paths."""
        return tuple(path.id for path in self.paths if path.is_unimodal)

    @cached_property
    def unimodal_by_mode(self) -> Dict[str, Tuple[str, ...]]:
        """Mode to the ids of its single-mode paths."""
        index: Dict[str, List[str]] = {}
        for path_id in self.unimodal:
            index.setdefault(self.by_id[path_id].mode_sequence[0], []).append(path_id)
        return {key: tuple(ids) for key, ids in index.items()}

    @cached_property
    def terminal_usage(self) -> Dict[Tuple[str, str], Tuple[str, ...]]:
        """``(node, mode)`` to the paths starting, ending or transferring there."""
        index: Dict[Tuple[str, str], List[str]] = {}

        def _add(node: str, mode: str, path_id: str) -> None:
            ids = index.setdefault((node, mode), [])
            if not ids or ids[-1] != path_id:
                ids.append(path_id)

        for path in self.paths:
            _add(path.origin, path.arcs[0][2], path.id)
            for node, mode_from, mode_to in path.transfers:
                _add(node, mode_from, path.id)
                _add(node, mode_to, path.id)
            _add(path.destination, path.arcs[-1][2], path.id)
        return {key: tuple(dict.fromkeys(ids)) for key, ids in sorted(index.items())}


def write_paths(paths: PathSet, file: Union[str, FilePath]) -> None:
    """Write a path set as ``paths.csv``, one row per arc.

    Parameters
    ----------
    paths : PathSet
        The paths to write.
    file : str or Path
        Target file.
    """
    rows = [
        (path.id, position, *arc)
        for path in paths
        for position, arc in enumerate(path.arcs)
    ]
    frame = pl.DataFrame(
        rows,
        schema={
            "path_id": pl.Utf8,
            "position": pl.Int64,
            "origin": pl.Utf8,
            "destination": pl.Utf8,
            "mode": pl.Utf8,
            "route": pl.Int64,
        },
        orient="row",
    )
    frame.write_csv(file)


def read_paths(file: Union[str, FilePath]) -> PathSet:
    """Read a path set written by :func:`write_paths`.

    Parameters
    ----------
    file : str or Path
        The ``paths.csv`` file.

    Returns
    -------
    PathSet
        Paths in order of first appearance.

    Raises
    ------
    InstanceError
        If the file is missing, lacks columns or holds paths that do not chain.
    """
    file = FilePath(file)
    name = file.name
    if not file.exists():
        raise InstanceError("File is missing.", file=name)
    frame = pl.read_csv(file, infer_schema_length=0)
    missing = [c for c in _PATH_COLUMNS if c not in frame.columns]
    if missing:
        raise InstanceError(f"Missing columns {missing}.", file=name)

    arcs: Dict[str, List[Tuple[int, ArcKey]]] = {}
    for number, row in enumerate(frame.iter_rows(named=True), start=1):
        try:
            position = int(row["position"])
            route = int(row["route"])
        except (TypeError, ValueError):
            msg = "Position and route must be integers."
            raise InstanceError(msg, name, number) from None
        arc = (row["origin"], row["destination"], row["mode"], route)
        arcs.setdefault(row["path_id"], []).append((position, arc))

    paths: List[Path] = []
    for path_id, entries in arcs.items():
        ordered: Sequence[ArcKey] = [arc for _, arc in sorted(entries)]
        try:
            paths.append(Path(path_id, tuple(ordered)))
        except ValueError as error:
            raise InstanceError(str(error), file=name) from None
    return PathSet(tuple(paths))
