#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Commands of the ``stram`` executable.

Every command takes the parsed arguments and returns the process exit code.
"""
import argparse
import json
import logging
from collections import Counter
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from stram.analysis import (
    Solution,
    carbon_sensitivity,
    compute_eev,
    compute_wait_and_see,
    kpis,
    run_model,
    sensitivity_frame,
    static_run,
    write_kpi_tables,
    write_solution_json,
)
from stram.diffusion import adoption_bound_table
from stram.model import Instance, InstanceError, load_instance, validate_instance
from stram.paths import PathSet, generate_path_set, write_paths
from stram.program import ProgramOptions, assemble, write_program_stats
from stram.scenarios import ScenarioTree, generate_tree, load_scenario_tree
from stram.solver import (
    SolveOptions,
    SolveStatus,
    export_model,
    parse_solver,
    sidecar_path,
)
from stram.utils._numbers import _round_frame, _write_json

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "EXIT_OK",
    "EXIT_INPUT",
    "EXIT_LIMIT",
    "EXIT_INFEASIBLE",
    "exit_code_of",
    "cmd_validate",
    "cmd_solve",
    "cmd_vss",
    "cmd_sensitivity",
    "cmd_static",
    "cmd_paths",
    "cmd_export_mps",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LIMIT = 3
EXIT_INFEASIBLE = 4


def exit_code_of(status: str) -> int:
    """Return the exit code of a solver status.

    Examples
    --------
    >>> from stram.cli import exit_code_of
    >>> exit_code_of("optimal"), exit_code_of("limit"), exit_code_of("unbounded")
    (0, 3, 4)
    """
    status = SolveStatus(status)
    if status in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE):
        return EXIT_OK
    if status is SolveStatus.LIMIT:
        return EXIT_LIMIT
    return EXIT_INFEASIBLE


def _scenario_file(directory: Path) -> Path:
    name = "scenarios.json"
    manifest = directory / "instance.json"
    if manifest.exists():
        try:
            name = json.loads(manifest.read_text(encoding="utf-8")).get(
                "scenarios", name
            )
        except json.JSONDecodeError as error:
            msg = f"Malformed JSON: {error}"
            raise InstanceError(msg, file=manifest.name) from None
    return directory / name


def load_inputs(args: argparse.Namespace) -> Tuple[Instance, ScenarioTree]:
    """Load the instance and its scenario tree.

    Without a scenario file the tree holds the all-base scenario only.

    Raises
    ------
    InstanceError
        If the instance or an explicitly given scenario file is invalid.
    """
    directory = Path(args.instance)
    instance = load_instance(directory)
    if args.scenarios is not None:
        return instance, load_scenario_tree(args.scenarios)
    scenario_file = _scenario_file(directory)
    if scenario_file.exists():
        return instance, load_scenario_tree(scenario_file)
    years = instance.time.period_years
    logger.info("No %s, planning for the base scenario only", scenario_file.name)
    return instance, generate_tree([], years[1] if len(years) > 1 else years[0])


def program_options(args: argparse.Namespace, **overrides) -> ProgramOptions:
    """Return the program options of the command line."""
    return ProgramOptions(
        risk_aversion=args.risk_aversion,
        cvar_level=args.cvar_level,
        nonanticipativity=args.nonanticipativity,
        **overrides,
    ).resolved()


def solve_options(args: argparse.Namespace) -> SolveOptions:
    """Return the solver options of the command line over the configuration."""
    return SolveOptions.from_config(mip_gap=args.gap, time_limit=args.time_limit)


def _output(args: argparse.Namespace, *parts: str) -> Path:
    directory = Path(args.out, *parts)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _write_run(
    solution: Solution, instance: Instance, directory: Path, curves=None
) -> None:
    write_solution_json(solution, directory / "solution.json")
    write_program_stats(solution.program, directory / "program_stats.json")
    if solution.result.has_solution:
        write_kpi_tables(kpis(solution, instance), directory, curves=curves)


def cmd_validate(args: argparse.Namespace) -> int:
    """Validate an instance directory and report errors and warnings."""
    instance, tree = load_inputs(args)
    report = validate_instance(instance)
    for warning in report.warnings:
        logger.warning("%s", warning)
    for error in report.errors:
        logger.error("%s", error)
    summary = {
        "instance": instance.name,
        "scenarios": list(tree.ids),
        "errors": report.errors,
        "warnings": report.warnings,
    }
    if args.out is not None:
        _write_json(_output(args) / "validation.json", summary)
    print(
        f"{instance.name}: {len(report.errors)} error(s), "
        f"{len(report.warnings)} warning(s), {len(tree.ids)} scenario(s)"
    )
    return EXIT_OK if report.ok else EXIT_INPUT


def _paths(args: argparse.Namespace, instance: Instance, tree: ScenarioTree) -> PathSet:
    return generate_path_set(instance, tree, max_modes=args.max_modes)


def cmd_solve(args: argparse.Namespace) -> int:
    """Solve the stochastic program and write the solution and indicators."""
    instance, tree = load_inputs(args)
    out = _output(args)
    paths = _paths(args, instance, tree)
    write_paths(paths, out / "paths.csv")
    solution = run_model(
        instance,
        tree,
        paths,
        program_options(args),
        solve_options(args),
        args.solver,
    )
    curves = adoption_bound_table(instance, tree)
    _write_run(solution, instance, out, curves=curves)
    return exit_code_of(solution.result.status.value)


def cmd_vss(args: argparse.Namespace) -> int:
    """Compute the value of the stochastic solution."""
    instance, tree = load_inputs(args)
    out = _output(args)
    paths = _paths(args, instance, tree)
    options = program_options(args)
    report, solutions = compute_eev(
        instance, paths, tree, options, solve_options(args), args.solver
    )
    report.write_json(out / "vss.json")
    for name, solution in solutions.items():
        _write_run(solution, instance, _output(args, name))
    if args.wait_and_see:
        bound = compute_wait_and_see(
            instance, paths, tree, options, solve_options(args), args.solver
        )
        _write_json(out / "wait_and_see.json", bound.to_dict())
    legs = ("sp", "ev")
    return max(exit_code_of(report.statuses[leg]) for leg in legs)


def _parse_factors(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        msg = "`--factors` must be a comma separated list of numbers, "
        msg += f"but found {text!r}."
        raise ValueError(msg) from None


def cmd_sensitivity(args: argparse.Namespace) -> int:
    """Solve once per carbon price factor."""
    instance, tree = load_inputs(args)
    factors = _parse_factors(args.factors)
    out = _output(args)
    paths = _paths(args, instance, tree)
    runs = carbon_sensitivity(
        instance,
        tree,
        factors,
        paths=paths,
        program_options=program_options(args),
        solve_options=solve_options(args),
        solver=args.solver,
    )
    for factor, run in runs.items():
        scaled = instance if factor == 1.0 else instance.with_carbon_factor(factor)
        _write_run(run.solution, scaled, _output(args, f"factor_{factor:g}"))
    _round_frame(sensitivity_frame(runs)).write_csv(out / "sensitivity.csv")
    statuses = [run.solution.result.status.value for run in runs.values()]
    return max(exit_code_of(status) for status in statuses)


def cmd_static(args: argparse.Namespace) -> int:
    """Compare the static model of one period with the dynamic model."""
    instance, tree = load_inputs(args)
    if args.year is None:
        raise ValueError("`--year` is required for the static command.")
    instance.time.period_index(args.year)
    out = _output(args)
    paths = _paths(args, instance, tree)
    comparison = static_run(
        instance,
        tree,
        args.year,
        paths=paths,
        program_options=program_options(args),
        solve_options=solve_options(args),
        solver=args.solver,
    )
    legs = (("static", comparison.static), ("dynamic", comparison.dynamic))
    for name, solution in legs:
        _write_run(solution, instance, _output(args, name))
    _round_frame(comparison.mode_fuel()).write_csv(out / "static_comparison.csv")
    _write_json(
        out / "static.json",
        {
            "year": comparison.year,
            "static_objective": comparison.static.objective,
            "dynamic_objective": comparison.dynamic.objective,
            "dynamic_restricted_objective": comparison.dynamic_restricted_objective,
        },
    )
    return max(
        exit_code_of(comparison.static.result.status.value),
        exit_code_of(comparison.dynamic.result.status.value),
    )


def path_summary(paths: PathSet) -> Dict:
    """Return the number of paths in total, per mode sequence and per OD pair."""
    sequences = Counter("-".join(path.mode_sequence) for path in paths)
    pairs = Counter(f"{path.origin}-{path.destination}" for path in paths)
    return {
        "paths": len(paths),
        "by_mode_sequence": dict(sorted(sequences.items())),
        "by_od": dict(sorted(pairs.items())),
    }


def cmd_paths(args: argparse.Namespace) -> int:
    """Generate and write the admissible paths."""
    instance, tree = load_inputs(args)
    out = _output(args)
    paths = _paths(args, instance, tree)
    write_paths(paths, out / "paths.csv")
    summary = path_summary(paths)
    _write_json(out / "path_summary.json", summary)
    print(f"{summary['paths']} paths")
    return EXIT_OK


def cmd_export_mps(args: argparse.Namespace) -> int:
    """Assemble the program and write it as MPS with its name sidecar."""
    instance, tree = load_inputs(args)
    out = _output(args)
    paths = _paths(args, instance, tree)
    program = assemble(instance, paths, tree, program_options(args))
    model = export_model(program, out / "model.mps")
    write_program_stats(program, out / "program_stats.json")
    logger.info("Wrote %s and %s", model, sidecar_path(model))
    return EXIT_OK


def check_solver(solver: Optional[str]) -> Optional[str]:
    """Validate the solver choice early, before any work is done."""
    parse_solver(solver)
    return solver
