#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Fixed-format MPS export and import, and the solution text format.

Rows are written as ``R0000001``, ``R0000002``, ... and columns as ``C0000001``,
... in program order, the objective row as ``COST``. The readable names are kept
in a JSON sidecar next to the model (``model.mps`` -> ``model.names.json``).
Integer columns are wrapped in ``INTORG``/``INTEND`` markers and always carry an
explicit upper bound.

A solution file holds one ``<column> <value>`` pair per line, where the column is
an alias or a readable name. Optional header lines ``status <status>``,
``objective <value>`` and ``bound <value>`` may precede the values; lines starting
with ``#`` are comments. Columns not listed are zero.
"""
import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from stram.model import ModelFormatError
from stram.solver._lp import LinearProgram
from stram.solver._result import SolveResult, SolveStatus, _no_solution

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "export_model",
    "import_solution",
    "read_mps",
    "write_mps",
    "write_solution",
    "sidecar_path",
]

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
OBJECTIVE_ROW = "COST"
MAX_ALIASES = 9_999_999
_SENSE_CODES = {"<=": "L", ">=": "G", "=": "E"}
_CODE_SENSES = {code: sense for sense, code in _SENSE_CODES.items()}


def sidecar_path(file: PathLike) -> Path:
    """Return the name map path of a model file.

    Examples
    --------
    >>> from stram.solver import sidecar_path
    >>> sidecar_path("out/model.mps").as_posix()
    'out/model.names.json'
    """
    return Path(file).with_suffix(".names.json")


def _alias(prefix: str, position: int) -> str:
    return f"{prefix}{position + 1:07d}"


def _number(value: float) -> str:
    """Return `value` in at most 12 characters.

    Examples
    --------
    >>> from stram.solver._mps import _number
    >>> _number(2.0), _number(-0.125), _number(1234567.891234567)
    ('2', '-0.125', '1234567.8912')
    """
    value = float(value)
    text = repr(value)
    if text.endswith(".0"):
        text = text[:-2]
    if len(text) <= 12:
        return text
    for digits in range(11, 0, -1):
        text = f"{value:.{digits}g}"
        if len(text) <= 12:
            return text
    raise ModelFormatError(f"Cannot write {value!r} in a fixed-format field.")


def _line(*fields: str) -> str:
    padded = list(fields) + [""] * (6 - len(fields))
    f1, f2, f3, f4, f5, f6 = padded
    return f" {f1:<2} {f2:<8}  {f3:<8}  {f4:<12}   {f5:<8}  {f6:<12}".rstrip()


def _check_names(lp: LinearProgram) -> None:
    m, n = lp.shape
    if n > MAX_ALIASES or m > MAX_ALIASES:
        raise ModelFormatError("Program is too large for 8-character aliases.")
    seen, duplicates = set(), []
    for name in lp.column_names:
        if name in seen:
            duplicates.append(name)
        seen.add(name)
    if duplicates:
        msg = "Column names collide in the name map: "
        msg += ", ".join(sorted(set(duplicates))[:5])
        raise ModelFormatError(msg)


def _bound_lines(j: int, lower: float, upper: float, integer: bool) -> List[str]:
    column = _alias("C", j)
    if lower == upper:
        return [_line("FX", "BND", column, _number(lower))]
    lines = []
    if math.isinf(lower) and math.isinf(upper):
        return [_line("FR", "BND", column)]
    if math.isinf(lower):
        lines.append(_line("MI", "BND", column))
    elif lower != 0.0:
        lines.append(_line("LO", "BND", column, _number(lower)))
    if math.isfinite(upper):
        lines.append(_line("UP", "BND", column, _number(upper)))
    elif integer:
        lines.append(_line("PL", "BND", column))
    return lines


def write_mps(lp: LinearProgram, file: PathLike, name: str = "STRAM") -> Path:
    """Write `lp` as fixed-format MPS and its name map as a JSON sidecar.

    Parameters
    ----------
    lp : LinearProgram
        Program to write.
    file : str or Path
        Model file.
    name : str, default="STRAM"
        Model name in the NAME record.

    Returns
    -------
    Path
        The sidecar file.

    Raises
    ------
    ModelFormatError
        If column names collide or the program exceeds the alias space.
    """
    _check_names(lp)
    m, n = lp.shape
    csc = sparse.csc_matrix(lp.A)
    lines = [f"{'NAME':<14}{name[:8]}", "ROWS", _line("N", OBJECTIVE_ROW)]
    lines += [_line(_SENSE_CODES[s], _alias("R", i)) for i, s in enumerate(lp.senses)]

    lines.append("COLUMNS")
    in_marker = False
    for j in range(n):
        integer = bool(lp.integrality[j])
        if integer != in_marker:
            marker = "'INTORG'" if integer else "'INTEND'"
            lines.append(_line("", "MARKER", "'MARKER'", "", marker))
            in_marker = integer
        column = _alias("C", j)
        entries: List[Tuple[str, float]] = []
        if lp.c[j] != 0.0:
            entries.append((OBJECTIVE_ROW, lp.c[j]))
        start, stop = csc.indptr[j], csc.indptr[j + 1]
        order = np.argsort(csc.indices[start:stop], kind="stable")
        for k in order:
            value = csc.data[start + k]
            if value != 0.0:
                entries.append((_alias("R", int(csc.indices[start + k])), value))
        if not entries:
            entries.append((OBJECTIVE_ROW, 0.0))
        for k in range(0, len(entries), 2):
            fields = [column, entries[k][0], _number(entries[k][1])]
            if k + 1 < len(entries):
                fields += [entries[k + 1][0], _number(entries[k + 1][1])]
            lines.append(_line("", *fields))
    if in_marker:
        lines.append(_line("", "MARKER", "'MARKER'", "", "'INTEND'"))

    lines.append("RHS")
    nonzero = [(i, v) for i, v in enumerate(lp.rhs) if v != 0.0]
    for k in range(0, len(nonzero), 2):
        fields = ["RHS", _alias("R", nonzero[k][0]), _number(nonzero[k][1])]
        if k + 1 < len(nonzero):
            fields += [_alias("R", nonzero[k + 1][0]), _number(nonzero[k + 1][1])]
        lines.append(_line("", *fields))

    bounds = []
    for j in range(n):
        bounds += _bound_lines(
            j, lp.lower[j], lp.upper[j], bool(lp.integrality[j])
        )
    if bounds:
        lines.append("BOUNDS")
        lines += bounds
    lines.append("ENDATA")

    file = Path(file)
    file.parent.mkdir(parents=True, exist_ok=True)
    file.write_text("\n".join(lines) + "\n", encoding="utf-8")
    names = {
        "columns": {_alias("C", j): lp.column_names[j] for j in range(n)},
        "rows": {_alias("R", i): lp.row_names[i] for i in range(m)},
    }
    sidecar = sidecar_path(file)
    sidecar.write_text(json.dumps(names, indent=1) + "\n", encoding="utf-8")
    logger.info("Wrote %d rows and %d columns to %s", m, n, file)
    return sidecar


def export_model(program, file: PathLike, format: str = "mps") -> Path:
    """Export a program for an external solver.

    Parameters
    ----------
    program : StochasticProgram or LinearProgram
        Program to export.
    file : str or Path
        Model file; the name map is written next to it.
    format : {"mps"}, default="mps"
        File format.

    Returns
    -------
    Path
        The model file.
    """
    if format.lower() != "mps":
        raise ValueError(f"`format` must be 'mps', but found {format!r}.")
    if isinstance(program, LinearProgram):
        lp = program
    else:
        lp = LinearProgram.from_program(program)
    write_mps(lp, file)
    return Path(file)


def _read_names(file: Path) -> Tuple[Dict[str, str], Dict[str, str]]:
    sidecar = sidecar_path(file)
    if not sidecar.exists():
        return {}, {}
    names = json.loads(sidecar.read_text(encoding="utf-8"))
    return names.get("columns", {}), names.get("rows", {})


def read_mps(file: PathLike) -> LinearProgram:
    """Read a fixed- or free-format MPS file without RANGES.

    Names are taken from the sidecar when present.

    Raises
    ------
    ModelFormatError
        If the file holds an unknown section, row, column or bound type.
    """
    file = Path(file)
    rows: Dict[str, int] = {}
    senses: List[str] = []
    objective_row: Optional[str] = None
    columns: Dict[str, int] = {}
    integer: List[bool] = []
    entries: Dict[Tuple[int, int], float] = {}
    costs: Dict[int, float] = {}
    rhs: Dict[int, float] = {}
    bounds: Dict[int, List[float]] = {}
    section = None
    in_marker = False

    def _row(name: str, number: int) -> Optional[int]:
        if name == objective_row:
            return None
        if name not in rows:
            raise ModelFormatError(f"{file.name}:{number}: unknown row {name!r}.")
        return rows[name]

    def _column(name: str, number: int) -> int:
        if name not in columns:
            raise ModelFormatError(f"{file.name}:{number}: unknown column {name!r}.")
        return columns[name]

    lines = file.read_text(encoding="utf-8").splitlines()
    for number, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.startswith("*"):
            continue
        tokens = raw.split()
        if not raw[0].isspace():
            section = tokens[0].upper()
            if section not in ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"):
                msg = f"{file.name}:{number}: unsupported section {section!r}."
                raise ModelFormatError(msg)
            if section == "ENDATA":
                break
            continue
        if section == "ROWS":
            code, name = tokens[0].upper(), tokens[1]
            if code == "N":
                objective_row = objective_row or name
                continue
            if code not in _CODE_SENSES:
                raise ModelFormatError(f"{file.name}:{number}: bad row type {code!r}.")
            rows[name] = len(senses)
            senses.append(_CODE_SENSES[code])
        elif section == "COLUMNS":
            if len(tokens) >= 3 and tokens[1] == "'MARKER'":
                in_marker = tokens[2] == "'INTORG'"
                continue
            name = tokens[0]
            if name not in columns:
                columns[name] = len(integer)
                integer.append(in_marker)
            j = columns[name]
            for row_name, value in zip(tokens[1::2], tokens[2::2]):
                i = _row(row_name, number)
                if i is None:
                    costs[j] = costs.get(j, 0.0) + float(value)
                else:
                    entries[(i, j)] = entries.get((i, j), 0.0) + float(value)
        elif section == "RHS":
            pairs = tokens[1:] if len(tokens) % 2 == 1 else tokens
            for row_name, value in zip(pairs[0::2], pairs[1::2]):
                i = _row(row_name, number)
                if i is not None:
                    rhs[i] = float(value)
        elif section == "BOUNDS":
            code, j = tokens[0].upper(), _column(tokens[2], number)
            value = float(tokens[3]) if len(tokens) > 3 else 0.0
            bound = bounds.setdefault(j, [0.0, math.inf])
            if code == "UP":
                bound[1] = value
                if value < 0 and bound[0] == 0.0:
                    bound[0] = -math.inf
            elif code == "LO":
                bound[0] = value
            elif code == "FX":
                bound[0] = bound[1] = value
            elif code == "FR":
                bound[0], bound[1] = -math.inf, math.inf
            elif code == "MI":
                bound[0] = -math.inf
            elif code == "PL":
                bound[1] = math.inf
            elif code == "BV":
                bound[0], bound[1] = 0.0, 1.0
                integer[j] = True
            else:
                raise ModelFormatError(f"{file.name}:{number}: bad bound {code!r}.")

    m, n = len(senses), len(integer)
    column_names, row_names = _read_names(file)
    by_column = {j: name for name, j in columns.items()}
    by_row = {i: name for name, i in rows.items()}
    keys = list(entries)
    A = sparse.csr_matrix(
        (
            [entries[k] for k in keys],
            ([k[0] for k in keys], [k[1] for k in keys]),
        ),
        shape=(m, n),
    )
    return LinearProgram(
        c=np.array([costs.get(j, 0.0) for j in range(n)]),
        A=A,
        senses=tuple(senses),
        rhs=np.array([rhs.get(i, 0.0) for i in range(m)]),
        lower=np.array([bounds.get(j, [0.0, math.inf])[0] for j in range(n)]),
        upper=np.array([bounds.get(j, [0.0, math.inf])[1] for j in range(n)]),
        integrality=np.array(integer, dtype=bool),
        column_names=tuple(
            column_names.get(by_column[j], by_column[j]) for j in range(n)
        ),
        row_names=tuple(row_names.get(by_row[i], by_row[i]) for i in range(m)),
    )


def write_solution(
    result: SolveResult, lp: LinearProgram, file: PathLike
) -> None:
    """Write a solve result in the solution text format, by column alias."""
    lines = [f"status {result.status.value}"]
    if result.has_solution:
        lines.append(f"objective {result.objective!r}")
        if math.isfinite(result.bound):
            lines.append(f"bound {result.bound!r}")
        for j, value in enumerate(result.values):
            if value != 0.0:
                lines.append(f"{_alias('C', j)} {float(value)!r}")
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8")


def import_solution(file: PathLike, lp: LinearProgram) -> SolveResult:
    """Read a solution file of `lp`.

    Parameters
    ----------
    file : str or Path
        Solution file.
    lp : LinearProgram
        The exported program; names resolve against its aliases and its readable
        column names.

    Returns
    -------
    SolveResult
        Values with the objective recomputed from them. The status is taken from
        the file and is FEASIBLE if absent; the gap is 0 for OPTIMAL, computed
        from a reported bound otherwise.

    Raises
    ------
    ModelFormatError
        If the file is missing, a line is malformed or names an unknown column.
    """
    file = Path(file)
    if not file.exists():
        raise ModelFormatError(f"Solution file {file} is missing.")
    lookup = {_alias("C", j): j for j in range(lp.shape[1])}
    lookup.update({name: j for j, name in enumerate(lp.column_names)})
    values = np.zeros(lp.shape[1])
    status, bound = SolveStatus.FEASIBLE, -math.inf
    for number, raw in enumerate(file.read_text(encoding="utf-8").splitlines(), 1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.rsplit(maxsplit=1)
        if len(parts) != 2:
            raise ModelFormatError(f"{file.name}:{number}: expected 'name value'.")
        name, value = parts
        if name == "status":
            try:
                status = SolveStatus(value.lower())
            except ValueError:
                raise ModelFormatError(
                    f"{file.name}:{number}: unknown status {value!r}."
                ) from None
            continue
        try:
            number_value = float(value)
        except ValueError:
            raise ModelFormatError(
                f"{file.name}:{number}: {value!r} is not a number."
            ) from None
        if name == "objective":
            continue
        if name == "bound":
            bound = number_value
            continue
        if name not in lookup:
            msg = f"{file.name}:{number}: unknown variable {name!r}."
            raise ModelFormatError(msg)
        values[lookup[name]] = number_value

    if status in (SolveStatus.INFEASIBLE, SolveStatus.UNBOUNDED):
        return _no_solution(status, 0.0, message=f"Reported by {file.name}.")
    objective = lp.objective_value(values)
    if status is SolveStatus.OPTIMAL:
        bound, gap = objective, 0.0
    else:
        gap = SolveResult.relative_gap(objective, bound)
    return SolveResult(
        status=status,
        objective=objective,
        values=values,
        bound=bound,
        gap=gap,
        wall_time=0.0,
        message=f"Imported from {file.name}.",
    )
