from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from app.config import settings
from app.models.oracle_models import Classification, Grid, WeightingOutcome, WeightingResult
from app.models.problem_models import Problem
from app.models.solver_models import CompositeObjective, InnerSolverConfig, InnerStatus, SolverMethod
from app.services.auxiliary_service import weighted_sum
from app.services.barrier_service import make_inverse_summed_replicated
from app.services.inner_solver import InnerSolver, IterationCallback
from app.utils.helpers import as_list
from app.utils.validators import (
    CapabilityError,
    ConfigurationError,
    InputError,
    PreconditionError,
    validate_grid,
    validate_simplex_weight,
)


class OracleService:
    """Grid-based Pareto oracles and the weighting-method baseline"""

    def __init__(self, inner_solver: Optional[InnerSolver] = None):
        self.inner_solver = inner_solver or InnerSolver()

    def feasible_grid(self, problem: Problem, grid: Grid) -> np.ndarray:
        """Lattice points with g <= 0 (boundary included)"""
        is_valid, error = validate_grid(grid.counts, grid.bounds, grid.cap)
        if not is_valid:
            raise ConfigurationError(error, field="grid")
        if grid.dimension != problem.n:
            raise InputError(f"Grid has dimension {grid.dimension}, problem has {problem.n}", field="grid")

        points = grid.points()
        if problem.p == 0:
            return points
        feasible = np.array([np.all(problem.g(point) <= 0) for point in points], dtype=bool)
        return points[feasible]

    def objective_values(self, problem: Problem, points: np.ndarray) -> np.ndarray:
        if len(points) == 0:
            return np.zeros((0, problem.m))
        return np.array([problem.f(point) for point in points])

    def brute_force_nondominated(self, problem: Problem, grid: Grid) -> np.ndarray:
        """
        Feasible grid points not Pareto-dominated by another feasible grid point

        Args:
            problem: Problem to evaluate
            grid: Lattice within its cap

        Returns:
            (k x n) array of nondominated points in lattice order
        """
        points = self.feasible_grid(problem, grid)
        values = self.objective_values(problem, points)
        keep = np.ones(len(points), dtype=bool)

        chunk = settings.oracle_chunk_size
        for start in range(0, len(points), chunk):
            block = values[start:start + chunk]
            # [i, j]: grid point j dominates block point i
            no_worse = np.all(values[None, :, :] <= block[:, None, :], axis=2)
            better = np.any(values[None, :, :] < block[:, None, :], axis=2)
            keep[start:start + chunk] = ~np.any(no_worse & better, axis=1)

        logger.info(f"{int(keep.sum())} of {len(points)} feasible grid points of {problem.name} are nondominated")
        return points[keep]

    def classify_points(self, problem: Problem, candidates: Sequence, grid: Grid, tol: float) -> List[Classification]:
        """classify_point for many candidates against one grid evaluation"""
        values = self.objective_values(problem, self.feasible_grid(problem, grid))
        classifications = []
        for x in candidates:
            point = problem.check_dimension(x)
            if not problem.is_feasible(point):
                raise PreconditionError(f"Candidate {point.tolist()} is infeasible", field="x")
            fx = problem.f(point)

            if np.any(np.all(values < fx - tol, axis=1)):
                classifications.append(Classification.DOMINATED)
                continue
            weakly_better = np.all(values <= fx + tol, axis=1) & np.any(values < fx - tol, axis=1)
            if np.any(weakly_better):
                classifications.append(Classification.APPROX_WEAK_PARETO_ONLY)
            else:
                classifications.append(Classification.APPROX_PARETO)
        return classifications

    def classify_point(self, problem: Problem, x, grid: Grid, tol: float) -> Classification:
        """
        Dominated if some grid point improves every objective by more than tol;
        ApproxWeakParetoOnly if some grid point is within tol everywhere and
        improves one objective by more than tol; ApproxPareto otherwise
        """
        return self.classify_points(problem, [x], grid, tol)[0]

    def weighting_method_solve(self, problem: Problem, alpha: Sequence[float], x_start=None,
                               budget: Optional[int] = None,
                               callback: Optional[IterationCallback] = None) -> WeightingResult:
        """
        Minimize <alpha, f(x)> over D

        Gradient backtracking on the weighted-sum composite with a summed
        inverse barrier at a fixed tiny tau; unbounded when the value drops
        below settings.unbounded_value or the iterate norm exceeds
        settings.unbounded_norm.

        Args:
            problem: Problem to scalarize
            alpha: Weight on the unit simplex
            x_start: Strictly feasible start (defaults to the problem's)
            budget: Iteration budget (defaults to settings.weighting_budget)
            callback: Inner instrumentation hook

        Returns:
            WeightingResult
        """
        is_valid, error = validate_simplex_weight(alpha, problem.m)
        if not is_valid:
            raise InputError(error, field="alpha")
        if budget is None:
            budget = settings.weighting_budget
        elif budget < 1:
            raise InputError("budget must be at least 1", field="budget")

        start = problem.strictly_feasible_start if x_start is None else x_start
        if start is None:
            raise PreconditionError("No start point given and the problem has no strictly feasible start",
                                    field="x_start")

        objective = CompositeObjective(
            problem=problem,
            barrier=make_inverse_summed_replicated(problem),
            phi=weighted_sum(alpha),
            tau=settings.weighting_tau,
        )
        config = InnerSolverConfig(method=SolverMethod.GRADIENT_BACKTRACKING,
                                   max_iterations=budget)
        result = self.inner_solver.minimize(objective, start, config, callback)

        outcome = {
            InnerStatus.CONVERGED: WeightingOutcome.MINIMIZER,
            InnerStatus.UNBOUNDED: WeightingOutcome.UNBOUNDED,
            InnerStatus.MAX_ITERATIONS: WeightingOutcome.BUDGET_EXHAUSTED,
        }[result.status]
        logger.debug(f"Weighting alpha={as_list(alpha)} on {problem.name}: {outcome.value} after "
                     f"{result.iterations} iterations")
        return WeightingResult(alpha=as_list(alpha), outcome=outcome, x=result.x,
                               value=result.value, iterations=result.iterations)

    def weighting_sweep(self, problem: Problem, alpha_grid: int, x_start=None,
                        budget: Optional[int] = None) -> List[WeightingResult]:
        """weighting_method_solve for alpha = (a, 1 - a), a on a uniform grid of [0, 1]"""
        if problem.m != 2:
            raise CapabilityError(f"Weighting sweeps are defined for two objectives (m = {problem.m})",
                                  field="problem")
        if alpha_grid < 2:
            raise InputError("alpha_grid must be at least 2", field="alpha_grid")

        results = []
        for a in np.linspace(0.0, 1.0, alpha_grid):
            results.append(self.weighting_method_solve(problem, [float(a), float(1.0 - a)], x_start, budget))
        return results

    def weighting_failure_fraction(self, problem: Problem, alpha_grid: int, x_start=None,
                                   budget: Optional[int] = None) -> float:
        """Fraction of the weight grid for which the weighted problem is unbounded"""
        results = self.weighting_sweep(problem, alpha_grid, x_start, budget)
        failures = sum(1 for result in results if result.outcome == WeightingOutcome.UNBOUNDED)
        fraction = failures / len(results)
        logger.info(f"Weighting method fails on {failures}/{len(results)} weights of {problem.name} "
                    f"(fraction {fraction:.4f})")
        return fraction
