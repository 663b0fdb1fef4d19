#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Branch-and-bound over the integer columns of a linear program."""
import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from stram.solver._lp import LinearProgram
from stram.solver._result import (
    SolveOptions,
    SolveResult,
    SolveStatus,
    _no_solution,
)
from stram.solver._simplex import solve_lp

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["solve_milp"]

logger = logging.getLogger(__name__)


@dataclass(order=True)
class _Node:
    bound: float
    order: int
    lower: np.ndarray = field(compare=False)
    upper: np.ndarray = field(compare=False)


def _most_fractional(
    values: np.ndarray, integer: np.ndarray, tol: float
) -> Optional[int]:
    """Return the integer column farthest from integrality, lowest index on ties.

    Examples
    --------
    >>> import numpy as np
    >>> from stram.solver._branch import _most_fractional
    >>> _most_fractional(np.array([0.5, 0.2, 0.5]), np.array([True] * 3), 1e-6)
    0
    >>> _most_fractional(np.array([1.0, 0.0]), np.array([True, True]), 1e-6) is None
    True
    """
    fraction = values - np.floor(values)
    distance = np.where(integer, np.minimum(fraction, 1.0 - fraction), 0.0)
    if not np.any(distance > tol):
        return None
    return int(np.argmax(distance))


def solve_milp(
    lp: LinearProgram, options: Optional[SolveOptions] = None
) -> SolveResult:
    """Solve a mixed-integer linear program by LP-based branch-and-bound.

    Open nodes are explored best bound first. After branching, the child on the
    side the fractional value is rounded to is solved next (plunging) until the
    dive is pruned, so that incumbents are found early. Branching picks the most
    fractional integer column, the lowest index on ties. The search stops when the
    relative gap ``(incumbent - bound) / max(|incumbent|, 1e-10)`` is at most
    ``options.mip_gap``.

    Parameters
    ----------
    lp : LinearProgram
        The program; columns flagged in ``lp.integrality`` must be integral.
    options : SolveOptions, default=None
        Gap, tolerances and limits; from the configuration if None.

    Returns
    -------
    SolveResult
        OPTIMAL within the gap; LIMIT with the best incumbent (if any) when the
        time limit or an LP limit ends the search; INFEASIBLE or UNBOUNDED if the
        root relaxation is.

    Examples
    --------
    >>> from stram.solver import LinearProgram, solve_milp
    >>> lp = LinearProgram([-1.0, -2.0], [[1.0, 1.0]], ["<="], [1.5],
    ...                    upper=[1.0, 1.0], integrality=[True, True])
    >>> result = solve_milp(lp)
    >>> result.status.value, round(result.objective, 9)
    ('optimal', -2.0)
    """
    options = SolveOptions.from_config() if options is None else options
    started = time.perf_counter()
    deadline = started + options.time_limit
    integer = lp.integrality
    iterations, nodes = 0, 0

    root = solve_lp(lp, options, deadline)
    iterations += root.iterations
    nodes += 1
    if root.status is not SolveStatus.OPTIMAL:
        return _no_solution(
            root.status,
            time.perf_counter() - started,
            iterations=iterations,
            nodes=nodes,
            message=root.message,
        )
    if not integer.any():
        return root

    counter = itertools.count()
    heap: List[_Node] = []
    incumbent: Optional[np.ndarray] = None
    incumbent_value = math.inf
    dive: Optional[Tuple[_Node, SolveResult]] = (
        _Node(root.objective, next(counter), lp.lower.copy(), lp.upper.copy()),
        root,
    )
    message = ""
    proven: Optional[float] = None

    def _gap(bound: float) -> float:
        return SolveResult.relative_gap(incumbent_value, bound)

    def _open_bound(extra: float = math.inf) -> float:
        return min(min((n.bound for n in heap), default=math.inf), extra)

    while dive is not None or heap:
        if dive is None:
            node = heapq.heappop(heap)
            if node.bound >= incumbent_value or (
                incumbent is not None
                and _gap(min(node.bound, _open_bound())) <= options.mip_gap
            ):
                proven = min(node.bound, incumbent_value)
                heap.clear()
                break
            bounded = lp.with_bounds(node.lower, node.upper)
            relaxed = solve_lp(bounded, options, deadline)
            iterations += relaxed.iterations
            nodes += 1
        else:
            node, relaxed = dive
            dive = None

        if relaxed.status is SolveStatus.LIMIT:
            heapq.heappush(heap, node)
            message = relaxed.message or "Limit reached."
            break
        if relaxed.status is not SolveStatus.OPTIMAL:
            continue
        if relaxed.objective >= incumbent_value:
            continue

        column = _most_fractional(relaxed.values, integer, options.integrality_tol)
        if column is None:
            incumbent = np.where(integer, np.round(relaxed.values), relaxed.values)
            incumbent_value = lp.objective_value(incumbent)
            logger.debug("Incumbent %.6g after %d nodes", incumbent_value, nodes)
            heap = [n for n in heap if n.bound < incumbent_value]
            heapq.heapify(heap)
            if _gap(_open_bound(incumbent_value)) <= options.mip_gap:
                proven = _open_bound(incumbent_value)
                heap.clear()
                break
            continue

        value = relaxed.values[column]
        down_upper = node.upper.copy()
        down_upper[column] = math.floor(value)
        up_lower = node.lower.copy()
        up_lower[column] = math.ceil(value)
        down = _Node(relaxed.objective, next(counter), node.lower, down_upper)
        up = _Node(relaxed.objective, next(counter), up_lower, node.upper)
        first, second = (up, down) if value - math.floor(value) >= 0.5 else (down, up)
        heapq.heappush(heap, second)

        if time.perf_counter() > deadline:
            heapq.heappush(heap, first)
            message = "Time limit reached."
            break
        child = solve_lp(lp.with_bounds(first.lower, first.upper), options, deadline)
        iterations += child.iterations
        nodes += 1
        dive = (first, child)

    wall_time = time.perf_counter() - started
    if proven is not None:
        bound = proven
    else:
        bound = min(_open_bound(), incumbent_value)
    if incumbent is None:
        if heap or message:
            return _no_solution(
                SolveStatus.LIMIT,
                wall_time,
                iterations=iterations,
                nodes=nodes,
                message=message or "Limit reached without incumbent.",
                bound=_open_bound(),
            )
        return _no_solution(
            SolveStatus.INFEASIBLE,
            wall_time,
            iterations=iterations,
            nodes=nodes,
            message="No integer feasible point.",
        )

    gap = _gap(bound)
    status = SolveStatus.OPTIMAL if gap <= options.mip_gap else SolveStatus.LIMIT
    logger.info(
        "Branch-and-bound finished: %s, objective %.6g, gap %.4g, %d nodes",
        status.value,
        incumbent_value,
        gap,
        nodes,
    )
    return SolveResult(
        status=status,
        objective=incumbent_value,
        values=incumbent,
        bound=bound,
        gap=gap,
        wall_time=wall_time,
        iterations=iterations,
        nodes=nodes,
        message=message,
    )
