#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Test the simplex, branch-and-bound and the MPS exchange."""
import math
import shlex
import sys

import numpy as np
import pytest
from scipy import optimize

from stram.model import ModelFormatError
from stram.solver import (
    LinearProgram,
    SolveOptions,
    SolveStatus,
    export_model,
    import_solution,
    parse_solver,
    read_mps,
    sidecar_path,
    solve,
    solve_external,
    solve_lp,
    solve_milp,
    write_mps,
    write_solution,
)

__author__ = ["stram-developers"]

EXACT = SolveOptions(mip_gap=0.0)


def _random_lp(seed, integer=False):
    """Return a feasible bounded program built around a random point."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 16))
    m = int(rng.integers(1, 11))
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    upper = np.full(n, 5.0)
    integrality = np.zeros(n, dtype=bool)
    if integer:
        n_binary = int(rng.integers(1, min(n, 10) + 1))
        integrality[:n_binary] = True
        upper[:n_binary] = 1.0
    point = rng.uniform(0.0, 1.0, size=n) * upper
    point[integrality] = rng.integers(0, 2, size=integrality.sum())
    senses = tuple(
        str(s) for s in rng.choice(["<=", ">=", "="], size=m, p=[0.5, 0.3, 0.2])
    )
    activity = A @ point
    slack = rng.uniform(0.0, 3.0, size=m)
    rhs = np.where(
        np.array(senses) == "<=",
        activity + slack,
        np.where(np.array(senses) == ">=", activity - slack, activity),
    )
    c = rng.integers(-10, 11, size=n).astype(float)
    return LinearProgram(c, A, senses, rhs, np.zeros(n), upper, integrality)


def _scipy_constraints(lp):
    A = lp.A.toarray()
    senses = np.array(lp.senses)
    lower = np.where(senses == "<=", -np.inf, lp.rhs)
    upper = np.where(senses == ">=", np.inf, lp.rhs)
    return optimize.LinearConstraint(A, lower, upper)


def test_solve_lp_maximization_example():
    """Test max 3x + 2y with x <= 2, y <= 3, x + y <= 4 ends at (2, 2)."""
    lp = LinearProgram(
        [-3.0, -2.0],
        [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
        ["<=", "<=", "<="],
        [2.0, 3.0, 4.0],
    )
    result = solve_lp(lp)
    assert result.status is SolveStatus.OPTIMAL
    np.testing.assert_allclose(result.values, [2.0, 2.0], atol=1e-9)
    assert result.objective == pytest.approx(-10.0, abs=1e-9)


def test_solve_lp_equality_example():
    """Test min x with x + y = 5 puts everything on y."""
    lp = LinearProgram([1.0, 0.0], [[1.0, 1.0]], ["="], [5.0])
    result = solve_lp(lp)
    np.testing.assert_allclose(result.values, [0.0, 5.0], atol=1e-9)


def test_solve_lp_without_rows():
    """Test min 0 over x >= 0 is 0, and a negative cost without bound is unbounded."""
    lp = LinearProgram([0.0], np.zeros((0, 1)), [], [])
    assert solve_lp(lp).objective == 0.0
    unbounded = LinearProgram([-1.0], np.zeros((0, 1)), [], [])
    assert solve_lp(unbounded).status is SolveStatus.UNBOUNDED


def test_solve_lp_infeasible_and_unbounded():
    """Test contradictory rows are infeasible and a ray makes the LP unbounded."""
    infeasible = LinearProgram(
        [1.0, 1.0], [[1.0, 1.0], [1.0, 1.0]], [">=", "<="], [3.0, 1.0]
    )
    assert solve_lp(infeasible).status is SolveStatus.INFEASIBLE
    unbounded = LinearProgram([-1.0, 0.0], [[1.0, -1.0]], ["<="], [1.0])
    assert solve_lp(unbounded).status is SolveStatus.UNBOUNDED


def test_solve_lp_free_variable():
    """Test a free variable moves below zero to its row bound."""
    lp = LinearProgram(
        [1.0], [[1.0]], [">="], [-2.0], lower=[-math.inf], upper=[math.inf]
    )
    result = solve_lp(lp)
    assert result.objective == pytest.approx(-2.0)


def test_solve_lp_terminates_on_cycling_example():
    """Test the classic cycling example terminates at its optimum of -1/20."""
    c = [-0.75, 150.0, -0.02, 6.0]
    A = [
        [0.25, -60.0, -0.04, 9.0],
        [0.5, -90.0, -0.02, 3.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
    lp = LinearProgram(c, A, ["<=", "<=", "<="], [0.0, 0.0, 1.0])
    result = solve_lp(lp)
    assert result.status is SolveStatus.OPTIMAL
    assert result.objective == pytest.approx(-0.05, abs=1e-9)


def test_solve_lp_time_limit():
    """Test an exhausted time limit ends with status LIMIT and no values."""
    lp = _random_lp(3)
    result = solve_lp(lp, SolveOptions(time_limit=0.0))
    assert result.status is SolveStatus.LIMIT
    assert not result.has_solution


@pytest.mark.parametrize("seed", range(200))
def test_solve_lp_matches_highs(seed):
    """Test random bounded LPs reach the objective of scipy's HiGHS."""
    lp = _random_lp(seed)
    expected = optimize.milp(
        lp.c,
        constraints=_scipy_constraints(lp),
        bounds=optimize.Bounds(lp.lower, lp.upper),
    )
    result = solve_lp(lp)
    assert result.status is SolveStatus.OPTIMAL
    msg = f"Objective {result.objective} differs from {expected.fun} "
    msg += f"for seed {seed}."
    assert result.objective == pytest.approx(expected.fun, abs=1e-6, rel=1e-9), msg
    assert lp.max_violation(result.values) <= 1e-6


def test_solve_milp_binary_example():
    """Test min -(x + 2y) with x + y <= 3 over binaries ends at (1, 1)."""
    lp = LinearProgram(
        [-1.0, -2.0], [[1.0, 1.0]], ["<="], [3.0], upper=[1.0, 1.0],
        integrality=[True, True],
    )
    result = solve_milp(lp, EXACT)
    assert result.objective == pytest.approx(-3.0)
    np.testing.assert_allclose(result.values, [1.0, 1.0])
    assert result.nodes == 1


def test_solve_milp_branches_on_fractional_root():
    """Test a fractional root is branched and the incumbent is proven optimal."""
    lp = LinearProgram(
        [-1.0, -2.0], [[1.0, 1.0]], ["<="], [1.5], upper=[1.0, 1.0],
        integrality=[True, True],
    )
    result = solve_milp(lp, EXACT)
    assert result.status is SolveStatus.OPTIMAL
    assert result.objective == pytest.approx(-2.0)
    assert result.nodes > 1
    assert result.bound <= result.objective + 1e-9


def test_solve_milp_infeasible():
    """Test a relaxation that is feasible only at fractional points."""
    lp = LinearProgram(
        [0.0], [[2.0]], ["="], [1.0], upper=[1.0], integrality=[True]
    )
    assert solve_milp(lp, EXACT).status is SolveStatus.INFEASIBLE


@pytest.mark.parametrize("seed", range(100))
def test_solve_milp_matches_highs(seed):
    """Test random mixed-binary programs reach the objective of scipy's HiGHS."""
    lp = _random_lp(seed, integer=True)
    expected = optimize.milp(
        lp.c,
        constraints=_scipy_constraints(lp),
        bounds=optimize.Bounds(lp.lower, lp.upper),
        integrality=lp.integrality.astype(int),
    )
    result = solve_milp(lp, EXACT)
    assert result.status is SolveStatus.OPTIMAL
    assert result.objective == pytest.approx(expected.fun, abs=1e-6, rel=1e-9)
    assert result.bound <= result.objective + 1e-9
    binaries = result.values[lp.integrality]
    np.testing.assert_allclose(binaries, np.round(binaries), atol=1e-6)
    assert lp.max_violation(result.values) <= 1e-6


def test_solve_milp_time_limit_reports_limit():
    """Test an exhausted time limit ends branch-and-bound with status LIMIT."""
    lp = _random_lp(5, integer=True)
    result = solve_milp(lp, SolveOptions(mip_gap=0.0, time_limit=0.0))
    assert result.status is SolveStatus.LIMIT


def test_solve_milp_is_deterministic():
    """Test repeated solves return identical incumbents."""
    lp = _random_lp(11, integer=True)
    first, second = solve_milp(lp, EXACT), solve_milp(lp, EXACT)
    np.testing.assert_array_equal(first.values, second.values)


def test_solve_fixes_columns():
    """Test fixed columns keep their values."""
    lp = LinearProgram([1.0, 1.0], [[1.0, 1.0]], [">="], [2.0])
    result = solve(lp, fixed={0: 1.5})
    np.testing.assert_allclose(result.values, [1.5, 0.5], atol=1e-9)


def test_parse_solver_rejects_unknown_choice():
    """Test a solver choice other than builtin or external is rejected."""
    with pytest.raises(ValueError, match="builtin"):
        parse_solver("cplex")
    with pytest.raises(ValueError, match="builtin"):
        parse_solver("external:")


def test_mps_of_empty_program(tmp_path):
    """Test an empty program is written with its header and ENDATA only."""
    lp = LinearProgram(np.zeros(0), np.zeros((0, 0)), [], [])
    write_mps(lp, tmp_path / "empty.mps")
    text = (tmp_path / "empty.mps").read_text()
    assert text.startswith("NAME")
    assert text.rstrip().endswith("ENDATA")
    assert "BOUNDS" not in text


def test_mps_marks_binaries(tmp_path):
    """Test binaries are written inside markers with a 0/1 upper bound."""
    lp = LinearProgram(
        [1.0, -1.0], [[1.0, 1.0]], ["<="], [1.0], upper=[math.inf, 1.0],
        integrality=[False, True],
    )
    write_mps(lp, tmp_path / "model.mps")
    lines = (tmp_path / "model.mps").read_text().splitlines()
    start = next(i for i, line in enumerate(lines) if "'INTORG'" in line)
    end = next(i for i, line in enumerate(lines) if "'INTEND'" in line)
    assert all("C0000002" in line for line in lines[start + 1 : end])
    assert " UP BND       C0000002  1" in lines
    for line in lines:
        assert len(line) <= 61


def test_mps_round_trip(tmp_path):
    """Test a program read back from MPS has the same optimum and names."""
    lp = _random_lp(5, integer=True)
    file = tmp_path / "model.mps"
    write_mps(lp, file)
    assert sidecar_path(file).exists()
    read = read_mps(file)
    assert read.shape == lp.shape
    assert read.column_names == lp.column_names
    np.testing.assert_array_equal(read.integrality, lp.integrality)
    expected = solve_milp(lp, EXACT).objective
    assert solve_milp(read, EXACT).objective == pytest.approx(expected, abs=1e-6)


def test_mps_rejects_colliding_names(tmp_path):
    """Test duplicate readable column names are rejected."""
    lp = LinearProgram(
        [1.0, 1.0], [[1.0, 1.0]], [">="], [1.0], column_names=("x", "x")
    )
    with pytest.raises(ModelFormatError, match="collide"):
        write_mps(lp, tmp_path / "model.mps")


def test_solution_round_trip(tmp_path):
    """Test an exported solution imports with the same objective."""
    lp = _random_lp(7, integer=True)
    result = solve_milp(lp, EXACT)
    write_solution(result, lp, tmp_path / "solution.txt")
    imported = import_solution(tmp_path / "solution.txt", lp)
    assert imported.status is SolveStatus.OPTIMAL
    assert abs(imported.objective - result.objective) <= 1e-9


def test_import_solution_errors(tmp_path):
    """Test unknown variables and missing files are rejected."""
    lp = LinearProgram([1.0], [[1.0]], [">="], [1.0])
    file = tmp_path / "solution.txt"
    file.write_text("# comment\nstatus optimal\nC0000009 1.0\n")
    with pytest.raises(ModelFormatError, match="unknown variable"):
        import_solution(file, lp)
    with pytest.raises(ModelFormatError, match="missing"):
        import_solution(tmp_path / "absent.txt", lp)


def test_import_solution_by_readable_name(tmp_path):
    """Test readable names resolve and a reported bound sets the gap."""
    lp = LinearProgram([1.0, 2.0], [[1.0, 1.0]], [">="], [1.0])
    file = tmp_path / "solution.txt"
    file.write_text("bound 0.5\nc0 1\n")
    result = import_solution(file, lp)
    assert result.status is SolveStatus.FEASIBLE
    assert result.objective == 1.0
    assert result.gap == pytest.approx(0.5)


def test_export_model_of_program(tmp_path):
    """Test export_model accepts a linear program and rejects other formats."""
    lp = LinearProgram([1.0], [[1.0]], [">="], [1.0])
    path = export_model(lp, tmp_path / "model.mps")
    assert path.read_text().startswith("NAME")
    with pytest.raises(ValueError, match="mps"):
        export_model(lp, tmp_path / "model.lp", format="lp")


def test_solve_external_copies_prepared_solution(tmp_path):
    """Test the bridge runs a command and imports the solution it writes."""
    lp = LinearProgram([1.0, 1.0], [[1.0, 1.0]], [">="], [2.0])
    prepared = tmp_path / "prepared.txt"
    prepared.write_text("status optimal\nC0000001 2\n")
    script = "import shutil, sys; shutil.copy(sys.argv[1], sys.argv[2])"
    command = " ".join(
        [shlex.quote(sys.executable), "-c", shlex.quote(script)]
        + [shlex.quote(str(prepared)), "{solution}", "{mps}"]
    )
    result = solve_external(lp, command, workdir=tmp_path / "work")
    assert result.status is SolveStatus.OPTIMAL
    assert result.objective == 2.0
    assert (tmp_path / "work" / "model.mps").exists()


def test_solve_external_failure_is_limit(tmp_path):
    """Test a failing command ends with status LIMIT."""
    lp = LinearProgram([1.0], [[1.0]], [">="], [1.0])
    command = f"{shlex.quote(sys.executable)} -c 'import sys; sys.exit(3)' "
    command += "{mps} {solution}"
    result = solve_external(lp, command, workdir=tmp_path)
    assert result.status is SolveStatus.LIMIT
    with pytest.raises(ValueError, match="placeholders"):
        solve_external(lp, "solver-without-placeholders")
