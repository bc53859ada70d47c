import asyncio
import itertools
import os
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from app.config import settings
from app.models.auxiliary_models import AuxiliaryFunction, AuxiliaryKind, Monotonicity
from app.models.barrier_models import Barrier
from app.models.problem_models import Box, Problem
from app.models.solver_models import (
    CompositeObjective,
    InnerStatus,
    IterationRecord,
    MbmConfig,
    MbmMode,
    RecoveredWeights,
    RunStatus,
    RunTrace,
    SweepResult,
)
from app.services import auxiliary_service
from app.services.inner_solver import InnerSolver, IterationCallback
from app.utils.helpers import as_list, as_point
from app.utils.validators import (
    CapabilityError,
    ConfigurationError,
    InputError,
    PreconditionError,
    SolverError,
    validate_box,
)

StartStrategy = Union[Sequence[float], Callable[[int, AuxiliaryFunction], Sequence[float]]]

# Active sets up to this size are solved by subset enumeration
ENUMERATION_LIMIT = 10
NEGATIVE_WEIGHT_TOLERANCE = 1e-12


def check_phi_monotone_trace(trace: RunTrace, slack: float = 1e-8) -> bool:
    """True iff Phi_{k+1} <= Phi_k + slack for all consecutive records"""
    values = trace.phi_values
    if not values:
        raise InputError("Trace has no records", field="trace")
    return all(later <= earlier + slack for earlier, later in zip(values, values[1:]))


def _project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {a >= 0, sum a = 1}"""
    ordered = np.sort(v)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    index = np.arange(1, v.size + 1)
    rho = np.flatnonzero(ordered - cumulative / index > 0)[-1]
    return np.maximum(v - cumulative[rho] / (rho + 1), 0.0)


def _simplex_least_squares(rows: np.ndarray) -> np.ndarray:
    """Minimize |rows^T a|^2 over the simplex"""
    k = rows.shape[0]
    if k == 1:
        return np.ones(1)

    gram = rows @ rows.T
    best, best_residual = None, np.inf
    if k <= ENUMERATION_LIMIT:
        for size in range(1, k + 1):
            for subset in itertools.combinations(range(k), size):
                idx = list(subset)
                q = gram[np.ix_(idx, idx)]
                kkt = np.zeros((size + 1, size + 1))
                kkt[:size, :size] = 2.0 * q
                kkt[:size, size] = 1.0
                kkt[size, :size] = 1.0
                rhs = np.zeros(size + 1)
                rhs[size] = 1.0
                solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:size]
                if np.any(solution < -NEGATIVE_WEIGHT_TOLERANCE) or abs(solution.sum() - 1.0) > 1e-8:
                    continue
                alpha = np.zeros(k)
                alpha[idx] = np.maximum(solution, 0.0)
                alpha /= alpha.sum()
                residual = float(np.linalg.norm(rows.T @ alpha))
                if residual < best_residual:
                    best, best_residual = alpha, residual
        if best is not None:
            return best

    # projected gradient on the simplex
    alpha = np.full(k, 1.0 / k)
    step = 1.0 / (2.0 * max(np.linalg.norm(gram, 2), 1e-300))
    for _ in range(2000):
        alpha = _project_to_simplex(alpha - step * 2.0 * gram @ alpha)
    return alpha


def recover_weights(problem: Problem, barrier: Barrier, phi: AuxiliaryFunction, x, tau: float,
                    tie_tolerance: Optional[float] = None,
                    allow_finite_differences: bool = False) -> RecoveredWeights:
    """
    Implicit scalarization weights of a max-type run at x

    The active set collects the indices within the tie tolerance of the max of
    f(x) + tau B(x) (+ omega); alpha minimizes |sum alpha_i grad(f_i + tau B_i)(x)|
    over the simplex restricted to that set.

    Args:
        problem: Problem of the run
        barrier: Barrier of the run
        phi: Max or ShiftedMax
        x: Strictly feasible point
        tau: Penalty parameter
        tie_tolerance: Absolute tolerance; defaults to 1e-6 * (1 + |max|)
        allow_finite_differences: Accept problems without analytic Jacobians

    Returns:
        RecoveredWeights with alpha, the active set and the residual
    """
    if not phi.is_max_type:
        raise CapabilityError(f"Weight recovery needs a max-type Phi, got {phi.kind.value}", field="phi")
    if not problem.has_analytic_jacobians and not allow_finite_differences:
        raise CapabilityError("Weight recovery needs analytic Jacobians", field="problem")

    point = problem.check_dimension(x)
    if not problem.is_strictly_feasible(point):
        raise PreconditionError(f"Weight recovery at an infeasible point {point.tolist()}", field="x")

    u = problem.f(point) + tau * barrier.evaluate(point)
    shifted = u + np.asarray(phi.omega) if phi.kind == AuxiliaryKind.SHIFTED_MAX else u
    top = float(np.max(shifted))
    tolerance = settings.weight_tie_tolerance * (1.0 + abs(top)) if tie_tolerance is None else tie_tolerance
    active = auxiliary_service.active_set(phi, u, tolerance)

    gradients = problem.jac_f(point) + tau * barrier.jacobian(point)
    weights = _simplex_least_squares(gradients[active])

    alpha = np.zeros(problem.m)
    alpha[active] = weights
    residual = float(np.linalg.norm(gradients.T @ alpha))
    return RecoveredWeights(alpha=as_list(alpha), active_set=[int(i) for i in active], residual=residual)


class MbmService:
    """Outer loop of the multiobjective barrier method: global and local runs, sweeps"""

    def __init__(self, inner_solver: Optional[InnerSolver] = None):
        self.inner_solver = inner_solver or InnerSolver()

    def _check_inputs(self, problem: Problem, phi: AuxiliaryFunction, x0: np.ndarray, config: MbmConfig) -> None:
        expected = auxiliary_service.expected_dimension(phi)
        if expected is not None and expected != problem.m:
            raise ConfigurationError(f"Phi has {expected} parameters but the problem has {problem.m} objectives",
                                     field="phi")
        if config.mode == MbmMode.STRONG and phi.monotonicity != Monotonicity.S_INCREASING:
            raise ConfigurationError(f"Strong mode needs an s-increasing Phi; {phi.kind.value} is "
                                     f"{phi.monotonicity.value}", field="mode")

        if config.local_box is not None:
            is_valid, error = validate_box(config.local_box.lower, config.local_box.upper, problem.n)
            if not is_valid:
                raise ConfigurationError(error, field="local_box")
            if not config.local_box.contains_interior(x0):
                raise PreconditionError(f"Start point {x0.tolist()} is not inside the open box", field="x0")

        if not problem.is_strictly_feasible(x0):
            raise PreconditionError(f"Start point {x0.tolist()} is not strictly feasible", field="x0")

    def mbm_run(self, problem: Problem, barrier: Barrier, phi: AuxiliaryFunction, x0,
                config: Optional[MbmConfig] = None, callback: Optional[IterationCallback] = None) -> RunTrace:
        """
        Run the barrier method: x^k minimizes Phi(f(x) + tau_k B(x)) over D^o

        Iteration k = 1, 2, ... uses tau_k = schedule.value(k - 1) and starts
        the inner solver at x^{k-1} (x0 for k = 1, or always with warm_start off).

        Args:
            problem: Problem to solve
            barrier: Barrier for its constraints
            phi: Auxiliary function
            x0: Strictly feasible start (inside the open box for local runs)
            config: Outer-loop settings
            callback: Inner instrumentation hook, receives every accepted point

        Returns:
            RunTrace with one record per completed outer iteration
        """
        config = config or MbmConfig()
        x0 = problem.check_dimension(x0, field="x0")
        self._check_inputs(problem, phi, x0, config)

        logger.info(f"Starting {config.mode.value} run on {problem.name} with {phi.kind.value}, "
                    f"{config.schedule.rule.value} schedule, {config.outer_iterations} outer iterations"
                    f"{' in a local box' if config.local_box is not None else ''}")

        trace = RunTrace()
        previous = x0
        warned_recovery = False

        for k in range(1, config.outer_iterations + 1):
            tau = config.schedule.value(k - 1)
            objective = CompositeObjective(problem=problem, barrier=barrier, phi=phi, tau=tau, box=config.local_box)
            start = previous if config.warm_start else x0

            try:
                result = self.inner_solver.minimize(objective, start, config.inner, callback)
            except PreconditionError as e:
                logger.error(f"Inner solver rejected the start of outer iteration {k}: {e.message}")
                trace.status = RunStatus.INNER_FAILURE
                trace.failure_reason = e.message
                break

            if result.status == InnerStatus.UNBOUNDED:
                logger.warning(f"Composite unbounded below at outer iteration {k} (value {result.value:.6g})")
                trace.status = RunStatus.INNER_FAILURE
                trace.failure_reason = "unbounded"
                break

            x = as_point(result.x)
            record = IterationRecord(
                k=k,
                tau=tau,
                x=result.x,
                f=as_list(problem.f(x)),
                barrier=as_list(barrier.evaluate(x)),
                phi_value=result.value,
                inner_iterations=result.iterations,
                inner_status=result.status,
            )

            if config.recover_weights:
                if phi.is_max_type:
                    weights = recover_weights(problem, barrier, phi, x, tau, config.weight_tie_tolerance)
                    record.alpha = weights.alpha
                    record.kkt_residual = weights.residual
                elif not warned_recovery:
                    logger.warning(f"Weight recovery skipped: {phi.kind.value} is not max-type")
                    warned_recovery = True

            trace.records.append(record)
            logger.debug(f"k={k} tau={tau:.3e} x={result.x} phi={result.value:.12g} inner={result.iterations}")

            step = float(np.max(np.abs(x - previous)))
            previous = x
            if step < config.outer_tolerance and tau < config.tau_stop:
                trace.status = RunStatus.CONVERGED
                break

        if trace.records:
            trace.x_final = trace.records[-1].x
            trace.phi_limit = trace.records[-1].phi_value

        logger.info(f"Run on {problem.name} finished: {trace.status.value} after {len(trace.records)} iterations")
        return trace

    def local_mbm_run(self, problem: Problem, barrier: Barrier, phi: AuxiliaryFunction, x0,
                      config: MbmConfig, callback: Optional[IterationCallback] = None) -> RunTrace:
        """mbm_run restricted to the interior of config.local_box"""
        if config.local_box is None:
            raise ConfigurationError("Local runs need a local_box", field="local_box")
        return self.mbm_run(problem, barrier, phi, x0, config, callback)

    def _run_member(self, index: int, problem: Problem, barrier: Barrier, phi: AuxiliaryFunction,
                    start: StartStrategy, config: MbmConfig, box: Optional[Box]) -> SweepResult:
        parameter = phi.parameters
        try:
            x0 = start(index, phi) if callable(start) else start
            member_config = config if box is None else config.model_copy(update={"local_box": box})
            trace = self.mbm_run(problem, barrier, phi, x0, member_config)
        except SolverError as e:
            logger.warning(f"Sweep member {index} ({parameter}) failed: {e.message}")
            return SweepResult(index=index, parameter=parameter, status=RunStatus.INNER_FAILURE,
                               failure_reason=e.message)

        f_final = as_list(problem.f(trace.x_final)) if trace.x_final is not None else None
        return SweepResult(
            index=index,
            parameter=parameter,
            x_final=trace.x_final,
            f_final=f_final,
            status=trace.status,
            failure_reason=trace.failure_reason,
            trace=trace,
        )

    async def pareto_sweep_async(self, problem: Problem, barrier: Barrier, family: List[AuxiliaryFunction],
                                 config: MbmConfig, start: StartStrategy,
                                 boxes: Optional[List[Box]] = None,
                                 workers: Optional[int] = None) -> List[SweepResult]:
        """Run one member per thread, at most `workers` at a time; results in family order"""
        if not family:
            raise InputError("Sweep family is empty", field="family")
        if boxes is not None and len(boxes) != len(family):
            raise InputError("boxes must have one entry per family member", field="boxes")

        workers = workers or settings.default_workers or os.cpu_count() or 1
        semaphore = asyncio.Semaphore(workers)
        logger.info(f"Dispatching {len(family)} sweep members on {problem.name} with {workers} workers")

        async def run(index: int, phi: AuxiliaryFunction) -> SweepResult:
            async with semaphore:
                box = boxes[index] if boxes is not None else None
                return await asyncio.to_thread(self._run_member, index, problem, barrier, phi, start, config, box)

        return list(await asyncio.gather(*(run(i, phi) for i, phi in enumerate(family))))

    def pareto_sweep(self, problem: Problem, barrier: Barrier, family: List[AuxiliaryFunction],
                     config: MbmConfig, start: StartStrategy, boxes: Optional[List[Box]] = None,
                     workers: Optional[int] = None) -> List[SweepResult]:
        """
        One barrier-method run per family member

        Failed members are reported with status inner_failure and the reason.

        Args:
            problem: Problem to solve
            barrier: Barrier shared by all runs
            family: Auxiliary functions, e.g. shifted maxima over an omega grid
            config: Per-run settings
            start: Start point, or callable (index, phi) -> start point
            boxes: Optional local box per member
            workers: Concurrent runs (defaults to available parallelism)

        Returns:
            Results ordered by family index
        """
        return asyncio.run(self.pareto_sweep_async(problem, barrier, family, config, start, boxes, workers))
