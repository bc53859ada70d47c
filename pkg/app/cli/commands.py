import argparse
from pathlib import Path
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from app.cli.dependencies import (
    describe_error,
    get_barrier,
    get_mbm_service,
    get_oracle_service,
    get_problem_instance,
    get_start,
    get_sweep_family,
    load_config,
    parse_params,
)
from app.models.config_models import OracleSection
from app.models.oracle_models import Grid, WeightingOutcome
from app.models.problem_models import Problem
from app.models.solver_models import RunStatus, RunTrace
from app.services.problem_registry import registry_get
from app.utils.helpers import numbered_columns, read_points, write_table_atomic
from app.utils.validators import ConfigurationError, InputError, SolverError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_INNER_FAILURE = 3

STATUS_EXIT_CODES = {
    RunStatus.CONVERGED: EXIT_OK,
    RunStatus.OUTER_BUDGET_EXHAUSTED: EXIT_BUDGET,
    RunStatus.INNER_FAILURE: EXIT_INNER_FAILURE,
}

INVALID_INPUT_ERRORS = (ValidationError, SolverError, OSError, ValueError)


def _invalid(command: str, error: Exception) -> int:
    logger.error(f"{command}: {describe_error(error)}")
    return EXIT_INVALID


def _output_path(args: argparse.Namespace, configured: Optional[str], default: str) -> Path:
    return Path(args.out or configured or default)


def _oracle_grid(section: OracleSection) -> Grid:
    return Grid(bounds=section.bounds, counts=section.counts, cap=section.cap)


def write_trace(path: Path, problem: Problem, trace: RunTrace) -> Path:
    """TraceFile: k, tau, x_*, f_*, phi, inner_iterations, alpha_*, kkt_residual"""
    header = (["k", "tau"] + numbered_columns("x", problem.n) + numbered_columns("f", problem.m)
              + ["phi", "inner_iterations"] + numbered_columns("alpha", problem.m) + ["kkt_residual"])
    rows = []
    for record in trace.records:
        alpha = record.alpha if record.alpha is not None else [None] * problem.m
        rows.append([record.k, record.tau, *record.x, *record.f, record.phi_value,
                     record.inner_iterations, *alpha, record.kkt_residual])
    return write_table_atomic(path, header, rows)


def cmd_run(args: argparse.Namespace) -> int:
    """Run the barrier method from a config file and write its trace"""
    try:
        config = load_config(args.config)
        problem = get_problem_instance(config.problem).problem
        barrier = get_barrier(problem, config)
        x0 = get_start(config, problem)
        trace = get_mbm_service().mbm_run(problem, barrier, config.phi, x0, config.mbm_config())
    except INVALID_INPUT_ERRORS as e:
        return _invalid("run", e)

    path = write_trace(_output_path(args, config.output.trace, "trace.csv"), problem, trace)
    print(f"status: {trace.status.value}")
    print(f"iterations: {len(trace.records)}")
    if trace.x_final is not None:
        print(f"x_final: {trace.x_final}")
        print(f"phi_limit: {trace.phi_limit!r}")
    if trace.failure_reason:
        print(f"failure: {trace.failure_reason}")

    if config.oracle is not None and trace.x_final is not None:
        try:
            classification = get_oracle_service().classify_point(
                problem, trace.x_final, _oracle_grid(config.oracle), config.oracle.tol)
            print(f"classification: {classification.value}")
        except INVALID_INPUT_ERRORS as e:
            return _invalid("run", e)

    print(f"trace: {path}")
    return STATUS_EXIT_CODES[trace.status]


def cmd_sweep(args: argparse.Namespace) -> int:
    """One run per member of the config's sweep family; writes the front"""
    try:
        config = load_config(args.config)
        problem = get_problem_instance(config.problem).problem
        barrier = get_barrier(problem, config)
        family = get_sweep_family(config)
        sweep = config.sweep
        if sweep.starts is not None:
            def start(index, phi):
                return sweep.starts[index]
        else:
            start = get_start(config, problem)
        results = get_mbm_service().pareto_sweep(problem, barrier, family, config.mbm_config(), start,
                                                 boxes=sweep.boxes, workers=args.workers)
    except INVALID_INPUT_ERRORS as e:
        return _invalid("sweep", e)

    classifications: List[Optional[str]] = [None] * len(results)
    if config.oracle is not None:
        finished = [(i, r.x_final) for i, r in enumerate(results) if r.x_final is not None]
        try:
            labels = get_oracle_service().classify_points(
                problem, [x for _, x in finished], _oracle_grid(config.oracle), config.oracle.tol)
        except INVALID_INPUT_ERRORS as e:
            return _invalid("sweep", e)
        for (i, _), label in zip(finished, labels):
            classifications[i] = label.value

    parameter_size = max(len(r.parameter) for r in results)
    header = (["index"] + numbered_columns("param", parameter_size) + numbered_columns("x", problem.n)
              + numbered_columns("f", problem.m) + ["status", "classification"])
    rows = []
    for result, classification in zip(results, classifications):
        x = result.x_final if result.x_final is not None else [None] * problem.n
        f = result.f_final if result.f_final is not None else [None] * problem.m
        rows.append([result.index, *result.parameter, *x, *f, result.status.value, classification])
    path = write_table_atomic(_output_path(args, config.output.front, "front.csv"), header, rows)

    converged = sum(1 for r in results if r.status == RunStatus.CONVERGED)
    print(f"members: {len(results)}, converged: {converged}")
    print(f"front: {path}")
    return EXIT_OK if converged == len(results) else EXIT_BUDGET


def cmd_oracle(args: argparse.Namespace) -> int:
    """Nondominated grid points, or classification of candidate points"""
    try:
        problem = registry_get(args.problem, parse_params(args.param)).problem
        if not args.bounds or not args.counts:
            raise InputError("oracle needs --bounds and --counts", field="grid")
        grid = Grid(bounds=args.bounds, counts=args.counts)
        service = get_oracle_service()

        if args.candidates:
            candidates = read_points(args.candidates, problem.n)
            labels = service.classify_points(problem, candidates, grid, args.tol)
        else:
            points = service.brute_force_nondominated(problem, grid)
    except INVALID_INPUT_ERRORS as e:
        return _invalid("oracle", e)

    x_columns, f_columns = numbered_columns("x", problem.n), numbered_columns("f", problem.m)
    if args.candidates:
        header = ["index"] + x_columns + f_columns + ["classification"]
        rows = [[i, *x, *problem.f(x), label.value] for i, (x, label) in enumerate(zip(candidates, labels))]
        path = write_table_atomic(_output_path(args, None, "classification.csv"), header, rows)
        for i, label in enumerate(labels):
            print(f"candidate {i}: {label.value}")
    else:
        rows = [[*x, *problem.f(x)] for x in points]
        path = write_table_atomic(_output_path(args, None, "nondominated.csv"), x_columns + f_columns, rows)
        print(f"nondominated points: {len(rows)}")

    print(f"output: {path}")
    return EXIT_OK


def cmd_weighting(args: argparse.Namespace) -> int:
    """Weighting-method baseline for one weight or a weight grid"""
    try:
        problem = registry_get(args.problem, parse_params(args.param)).problem
        service = get_oracle_service()
        if args.alpha is not None:
            results = [service.weighting_method_solve(problem, args.alpha, args.start, args.budget)]
        elif args.grid is not None:
            results = service.weighting_sweep(problem, args.grid, args.start, args.budget)
        else:
            raise ConfigurationError("weighting needs --alpha or --grid", field="alpha")
    except INVALID_INPUT_ERRORS as e:
        return _invalid("weighting", e)

    header = (numbered_columns("alpha", problem.m) + ["outcome"] + numbered_columns("x", problem.n)
              + ["value", "iterations"])
    rows = [[*r.alpha, r.outcome.value, *(r.x or [None] * problem.n), r.value, r.iterations] for r in results]
    path = write_table_atomic(_output_path(args, None, "weighting.csv"), header, rows)

    for result in results:
        print(f"alpha={result.alpha}: {result.outcome.value}")
    if args.grid is not None:
        failures = sum(1 for r in results if r.outcome == WeightingOutcome.UNBOUNDED)
        print(f"failure fraction: {failures / len(results):.4f}")
    print(f"output: {path}")
    return EXIT_OK
