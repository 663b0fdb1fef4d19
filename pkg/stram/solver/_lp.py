#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Matrix form of a minimization program."""
from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from stram.model import ModelFormatError

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["LinearProgram"]

SENSES: Tuple[str, ...] = ("<=", "=", ">=")


@dataclass(frozen=True)
class LinearProgram:
    """``min c x`` subject to ``A x (sense) rhs`` and ``lower <= x <= upper``.

    Parameters
    ----------
    c : array-like of shape (n,)
        Objective coefficients.
    A : array-like or sparse matrix of shape (m, n)
        Constraint matrix.
    senses : sequence of {"<=", "=", ">="}, length m
        Row senses.
    rhs : array-like of shape (m,)
        Right-hand sides.
    lower, upper : array-like of shape (n,), default=None
        Bounds; ``0`` and ``inf`` if None.
    integrality : array-like of bool of shape (n,), default=None
        Integer columns; none if None.
    column_names, row_names : sequence of str, default=None
        Readable names, ``c<j>`` and ``r<i>`` if None.

    Examples
    --------
    >>> from stram.solver import LinearProgram
    >>> lp = LinearProgram([1.0, 2.0], [[1.0, 1.0]], [">="], [3.0])
    >>> lp.shape
    (1, 2)
    >>> lp.objective_value([3.0, 0.0])
    3.0
    """

    c: np.ndarray
    A: sparse.csr_matrix
    senses: Tuple[str, ...]
    rhs: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    integrality: Optional[np.ndarray] = None
    column_names: Optional[Tuple[str, ...]] = None
    row_names: Optional[Tuple[str, ...]] = None
    row_tags: Optional[Tuple[str, ...]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float).ravel()
        n = c.shape[0]
        A = sparse.csr_matrix(self.A, dtype=float)
        if A.shape[0] == 0:
            A = sparse.csr_matrix((0, n))
        m = A.shape[0]
        if A.shape[1] != n:
            raise ValueError(f"`A` must have {n} columns, but found {A.shape[1]}.")
        senses = tuple(self.senses)
        if len(senses) != m or any(s not in SENSES for s in senses):
            raise ValueError("`senses` must hold one of '<=', '=', '>=' per row.")
        rhs = np.asarray(self.rhs, dtype=float).reshape(m)
        lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, float)
        upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper)
        upper = upper.astype(float)
        if np.any(lower > upper):
            raise ValueError("`lower` must not exceed `upper`.")
        integrality = (
            np.zeros(n, dtype=bool)
            if self.integrality is None
            else np.asarray(self.integrality, dtype=bool)
        )
        column_names = tuple(
            self.column_names or (f"c{j}" for j in range(n))
        )
        row_names = tuple(self.row_names or (f"r{i}" for i in range(m)))
        if len(column_names) != n or len(row_names) != m:
            raise ValueError("Names must match the number of columns and rows.")
        for name, value in (
            ("c", c),
            ("A", A),
            ("senses", senses),
            ("rhs", rhs),
            ("lower", lower.reshape(n)),
            ("upper", upper.reshape(n)),
            ("integrality", integrality.reshape(n)),
            ("column_names", column_names),
            ("row_names", row_names),
        ):
            object.__setattr__(self, name, value)

    @property
    def shape(self) -> Tuple[int, int]:
        """``(rows, columns)``."""
        return self.A.shape

    def objective_value(self, values: Sequence[float]) -> float:
        """Return ``c x``."""
        return float(self.c @ np.asarray(values, dtype=float))

    def max_violation(self, values: Sequence[float]) -> float:
        """Return the largest row or bound violation of `values`."""
        x = np.asarray(values, dtype=float)
        worst = float(np.max(np.maximum(self.lower - x, x - self.upper), initial=0.0))
        if self.A.shape[0] == 0:
            return max(worst, 0.0)
        activity = self.A @ x
        senses = np.asarray(self.senses)
        excess = np.where(
            senses == "<=",
            activity - self.rhs,
            np.where(senses == ">=", self.rhs - activity, np.abs(activity - self.rhs)),
        )
        return max(worst, float(np.max(excess, initial=0.0)), 0.0)

    def with_bounds(
        self, lower: np.ndarray, upper: np.ndarray
    ) -> "LinearProgram":
        """Return a copy with other bounds."""
        return LinearProgram(
            self.c,
            self.A,
            self.senses,
            self.rhs,
            lower,
            upper,
            self.integrality,
            self.column_names,
            self.row_names,
            self.row_tags,
        )

    def fix(self, fixed: Mapping[int, float]) -> "LinearProgram":
        """Return a copy with the columns in `fixed` fixed to their values."""
        lower, upper = self.lower.copy(), self.upper.copy()
        for column, value in fixed.items():
            lower[column] = upper[column] = float(value)
        return self.with_bounds(lower, upper)

    @classmethod
    def from_program(cls, program) -> "LinearProgram":
        """Return the matrix form of a :class:`~stram.program.StochasticProgram`.

        Raises
        ------
        ModelFormatError
            If a coefficient or right-hand side is not finite.
        """
        catalog = program.catalog
        n = len(catalog)
        c = np.zeros(n)
        for column, coef in program.objective.items():
            c[column] = coef
        data, indices, indptr = [], [], [0]
        for row in program.rows:
            indices.extend(row.coefs.keys())
            data.extend(row.coefs.values())
            indptr.append(len(indices))
        A = sparse.csr_matrix(
            (np.asarray(data, float), np.asarray(indices, int), indptr),
            shape=(len(program.rows), n),
        )
        rhs = np.array([row.rhs for row in program.rows], dtype=float)
        if not (np.all(np.isfinite(A.data)) and np.all(np.isfinite(rhs))):
            raise ModelFormatError("Program holds a non-finite coefficient.")
        if not np.all(np.isfinite(c)):
            raise ModelFormatError("Program holds a non-finite objective coefficient.")
        bounds = np.array(catalog.bounds(), dtype=float).reshape(n, 2)
        return cls(
            c=c,
            A=A,
            senses=tuple(row.sense for row in program.rows),
            rhs=rhs,
            lower=bounds[:, 0],
            upper=bounds[:, 1],
            integrality=np.array([v.is_binary for v in catalog], dtype=bool),
            column_names=tuple(v.name for v in catalog),
            row_names=tuple(
                f"{row.tag}[{row.index}|{row.year}|{row.scenario}]"
                for row in program.rows
            ),
            row_tags=tuple(row.tag for row in program.rows),
        )
