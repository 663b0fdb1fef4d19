#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Bounded-variable revised primal simplex.

The basis is held as sparse LU factors from :func:`scipy.sparse.linalg.splu`
followed by a product of eta matrices, one per pivot. Forward and backward
solves apply the etas after, respectively before, the LU solve. The factors are
rebuilt from scratch every ``refactor_every`` pivots and the basic values are then
recomputed from the nonbasic ones.
"""
import logging
import math
import time
from typing import List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from stram.solver._lp import LinearProgram
from stram.solver._result import (
    SolveOptions,
    SolveResult,
    SolveStatus,
    _no_solution,
)

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["solve_lp"]

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
DEGENERATE_STEP = 1e-12
BLAND_AFTER = 50
REFACTOR_EVERY = 50


class _BasisFactor:
    """LU factors of a basis followed by eta updates."""

    def __init__(self, matrix: sparse.csc_matrix) -> None:
        self._matrix = matrix
        self._lu = None
        self._etas: List[Tuple[int, np.ndarray]] = []

    @property
    def n_etas(self) -> int:
        return len(self._etas)

    def refactor(self, basis: np.ndarray) -> None:
        """Factor the basis columns; raises RuntimeError if singular."""
        self._lu = splu(sparse.csc_matrix(self._matrix[:, basis]))
        self._etas = []

    def update(self, row: int, w: np.ndarray) -> None:
        """Record the pivot replacing basis position `row`; `w` is B^-1 a_j."""
        self._etas.append((row, w.copy()))

    def ftran(self, v: np.ndarray) -> np.ndarray:
        """Solve ``B z = v``."""
        z = self._lu.solve(v)
        for row, w in self._etas:
            z_row = z[row] / w[row]
            z -= w * z_row
            z[row] = z_row
        return z

    def btran(self, v: np.ndarray) -> np.ndarray:
        """Solve ``B^T u = v``."""
        u = np.array(v, dtype=float)
        for row, w in reversed(self._etas):
            others = w @ u - w[row] * u[row]
            u[row] = (u[row] - others) / w[row]
        return self._lu.solve(u, trans="T")


class _RevisedSimplex:
    """Two-phase bounded primal simplex on ``A x + s = b``.

    Slack bounds encode the row senses: ``[0, inf)`` for ``<=``, ``(-inf, 0]`` for
    ``>=`` and ``[0, 0]`` for ``=``. Rows whose slack cannot absorb the residual of
    the starting point get an artificial column, driven to zero in phase one and
    fixed at zero afterwards.
    """

    def __init__(
        self, lp: LinearProgram, options: SolveOptions, deadline: float
    ) -> None:
        self.lp = lp
        self.options = options
        self.deadline = deadline
        self.iterations = 0
        m, n = lp.shape
        self.m, self.n = m, n

        slack_lower = np.array([-math.inf if s == ">=" else 0.0 for s in lp.senses])
        slack_upper = np.array([math.inf if s == "<=" else 0.0 for s in lp.senses])
        lower = np.concatenate([lp.lower, slack_lower])
        upper = np.concatenate([lp.upper, slack_upper])

        x = np.where(
            np.isfinite(lp.lower),
            lp.lower,
            np.where(np.isfinite(lp.upper), lp.upper, 0.0),
        )
        residual = lp.rhs - lp.A @ x
        slack = np.clip(residual, slack_lower, slack_upper)
        gap = residual - slack
        needs = np.flatnonzero(np.abs(gap) > 0.0)
        signs = np.sign(gap[needs])

        blocks = [sparse.csc_matrix(lp.A), sparse.identity(m, format="csc")]
        if len(needs):
            blocks.append(
                sparse.csc_matrix(
                    (signs, (needs, np.arange(len(needs)))), shape=(m, len(needs))
                )
            )
        self.matrix = sparse.hstack(blocks, format="csc")
        self.matrix_t = self.matrix.T.tocsr()
        self.artificials = np.arange(n + m, n + m + len(needs))
        self.lower = np.concatenate([lower, np.zeros(len(needs))])
        self.upper = np.concatenate([upper, np.full(len(needs), math.inf)])
        self.x = np.concatenate([x, slack, np.abs(gap[needs])])

        basis = np.arange(n, n + m)
        basis[needs] = self.artificials
        self.basis = basis
        self.is_basic = np.zeros(self.matrix.shape[1], dtype=bool)
        self.is_basic[basis] = True
        self.factor = _BasisFactor(self.matrix)

    def _column(self, j: int) -> np.ndarray:
        start, stop = self.matrix.indptr[j], self.matrix.indptr[j + 1]
        column = np.zeros(self.m)
        column[self.matrix.indices[start:stop]] = self.matrix.data[start:stop]
        return column

    def _refactor(self) -> None:
        self.factor.refactor(self.basis)
        nonbasic = self.x.copy()
        nonbasic[self.basis] = 0.0
        self.x[self.basis] = self.factor.ftran(self.lp.rhs - self.matrix @ nonbasic)

    def _entering(
        self, reduced: np.ndarray, tol: float, bland: bool
    ) -> Tuple[Optional[int], int]:
        x, lower, upper = self.x, self.lower, self.upper
        movable = ~self.is_basic & (upper > lower)
        increase = movable & (reduced < -tol) & (x < upper)
        decrease = movable & (reduced > tol) & (x > lower)
        eligible = increase | decrease
        if not eligible.any():
            return None, 0
        if bland:
            j = int(np.flatnonzero(eligible)[0])
        else:
            j = int(np.argmax(np.where(eligible, np.abs(reduced), -1.0)))
        return j, 1 if increase[j] else -1

    def _ratio_test(
        self, w: np.ndarray, direction: int, j: int, bland: bool
    ) -> Tuple[float, Optional[int], np.ndarray]:
        delta = -direction * w
        basic_x = self.x[self.basis]
        basic_lower = self.lower[self.basis]
        basic_upper = self.upper[self.basis]
        ratios = np.full(self.m, math.inf)
        falling = delta < -PIVOT_TOL
        rising = delta > PIVOT_TOL
        with np.errstate(invalid="ignore"):
            ratios[falling] = (basic_x - basic_lower)[falling] / -delta[falling]
            ratios[rising] = (basic_upper - basic_x)[rising] / delta[rising]
        ratios = np.maximum(np.nan_to_num(ratios, nan=math.inf), 0.0)

        flip = self.upper[j] - self.lower[j]
        best = float(ratios.min()) if self.m else math.inf
        if flip <= best:
            return float(flip), None, delta
        if math.isinf(best):
            return math.inf, None, delta
        tied = np.flatnonzero(ratios <= best * (1.0 + 1e-9) + DEGENERATE_STEP)
        if bland:
            row = int(tied[np.argmin(self.basis[tied])])
        else:
            row = int(tied[np.argmax(np.abs(w[tied]))])
        return float(ratios[row]), row, delta

    def run(self, costs: np.ndarray) -> str:
        """Minimize ``costs x`` from the current basis.

        Returns one of ``"optimal"``, ``"unbounded"``, ``"limit"`` or
        ``"singular"``.
        """
        tol = 1e-9 * max(1.0, float(np.max(np.abs(costs), initial=0.0)))
        degenerate, bland = 0, False
        try:
            self._refactor()
        except RuntimeError:
            return "singular"
        while True:
            if self.iterations >= self.options.max_lp_iterations:
                return "limit"
            if time.perf_counter() > self.deadline:
                return "limit"
            if self.factor.n_etas >= REFACTOR_EVERY:
                try:
                    self._refactor()
                except RuntimeError:
                    return "singular"

            duals = self.factor.btran(costs[self.basis])
            reduced = costs - self.matrix_t @ duals
            j, direction = self._entering(reduced, tol, bland)
            if j is None:
                return "optimal"
            w = self.factor.ftran(self._column(j))
            theta, row, delta = self._ratio_test(w, direction, j, bland)
            if math.isinf(theta):
                return "unbounded"

            self.x[j] += direction * theta
            self.x[self.basis] += delta * theta
            if row is None:
                self.x[j] = self.upper[j] if direction > 0 else self.lower[j]
            else:
                leaving = self.basis[row]
                bound = self.lower if delta[row] < 0 else self.upper
                self.x[leaving] = bound[leaving]
                self.basis[row] = j
                self.is_basic[j] = True
                self.is_basic[leaving] = False
                self.factor.update(row, w)
            self.iterations += 1

            if theta <= DEGENERATE_STEP:
                degenerate += 1
                bland = bland or degenerate >= BLAND_AFTER
            else:
                degenerate, bland = 0, False

    def infeasibility(self) -> float:
        return float(self.x[self.artificials].sum())

    def fix_artificials(self) -> None:
        self.upper[self.artificials] = 0.0


def _solve_without_rows(lp: LinearProgram, started: float) -> SolveResult:
    values = np.where(
        np.isfinite(lp.lower), lp.lower, np.where(np.isfinite(lp.upper), lp.upper, 0.0)
    )
    for j, cost in enumerate(lp.c):
        if cost == 0.0:
            continue
        bound = lp.upper[j] if cost < 0 else lp.lower[j]
        if math.isinf(bound):
            return _no_solution(SolveStatus.UNBOUNDED, time.perf_counter() - started)
        values[j] = bound
    objective = lp.objective_value(values)
    return SolveResult(
        status=SolveStatus.OPTIMAL,
        objective=objective,
        values=values,
        bound=objective,
        gap=0.0,
        wall_time=time.perf_counter() - started,
    )


def solve_lp(
    lp: LinearProgram,
    options: Optional[SolveOptions] = None,
    deadline: Optional[float] = None,
) -> SolveResult:
    """Solve the continuous relaxation of a linear program.

    Parameters
    ----------
    lp : LinearProgram
        The program; integrality is ignored.
    options : SolveOptions, default=None
        Tolerances and limits; from the configuration if None.
    deadline : float, default=None
        Absolute :func:`time.perf_counter` value after which the solve stops with
        status LIMIT. Derived from ``options.time_limit`` if None.

    Returns
    -------
    SolveResult
        OPTIMAL with values, or INFEASIBLE, UNBOUNDED or LIMIT without. A basis that
        cannot be factored ends the solve with status LIMIT.

    Examples
    --------
    >>> from stram.solver import LinearProgram, solve_lp
    >>> lp = LinearProgram([-3.0, -2.0], [[1.0, 1.0], [1.0, 0.0]], ["<=", "<="],
    ...                    [4.0, 2.0])
    >>> result = solve_lp(lp)
    >>> result.status.value, round(result.objective, 9)
    ('optimal', -10.0)
    """
    options = SolveOptions.from_config() if options is None else options
    started = time.perf_counter()
    if deadline is None:
        deadline = started + options.time_limit
    if lp.shape[0] == 0:
        return _solve_without_rows(lp, started)

    simplex = _RevisedSimplex(lp, options, deadline)

    def _stopped(status: SolveStatus, message: str) -> SolveResult:
        return _no_solution(
            status,
            time.perf_counter() - started,
            iterations=simplex.iterations,
            message=message,
        )

    if len(simplex.artificials):
        phase_one = np.zeros(len(simplex.x))
        phase_one[simplex.artificials] = 1.0
        outcome = simplex.run(phase_one)
        if outcome in ("limit", "singular"):
            return _stopped(SolveStatus.LIMIT, f"Phase one stopped: {outcome}.")
        scale = max(1.0, float(np.max(np.abs(lp.rhs), initial=0.0)))
        if simplex.infeasibility() > options.feasibility_tol * scale:
            return _stopped(SolveStatus.INFEASIBLE, "No feasible point.")
        simplex.fix_artificials()

    costs = np.concatenate([lp.c, np.zeros(len(simplex.x) - simplex.n)])
    outcome = simplex.run(costs)
    if outcome == "unbounded":
        return _stopped(SolveStatus.UNBOUNDED, "Objective is unbounded below.")
    if outcome != "optimal":
        return _stopped(SolveStatus.LIMIT, f"Phase two stopped: {outcome}.")

    values = np.clip(simplex.x[: simplex.n], lp.lower, lp.upper)
    objective = lp.objective_value(values)
    logger.debug(
        "LP solved in %d pivots, objective %.6g", simplex.iterations, objective
    )
    return SolveResult(
        status=SolveStatus.OPTIMAL,
        objective=objective,
        values=values,
        bound=objective,
        gap=0.0,
        wall_time=time.perf_counter() - started,
        iterations=simplex.iterations,
    )
