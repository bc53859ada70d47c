import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from loguru import logger

from app.config import settings
from app.models.solver_models import (
    CompositeObjective,
    InnerResult,
    InnerSolverConfig,
    InnerStatus,
    SolverMethod,
)
from app.services import auxiliary_service
from app.utils.helpers import as_list, as_point
from app.utils.validators import DomainError, PreconditionError, TieError

# (iteration, accepted point, composite value)
IterationCallback = Callable[[int, np.ndarray, float], None]

# Nelder-Mead coefficients: reflection, expansion, contraction, shrink
REFLECTION = 1.0
EXPANSION = 2.0
CONTRACTION = 0.5
SHRINK = 0.5


def evaluate_composite(obj: CompositeObjective, x) -> float:
    """
    Phi(f(x) + tau B(x)) on D^o (inside the open box when present)

    Points outside return +inf, as do NaN values, so derivative-free
    methods reject them.
    """
    point = obj.problem.check_dimension(x)
    if obj.box is not None and not obj.box.contains_interior(point):
        return math.inf
    if not obj.problem.is_strictly_feasible(point):
        return math.inf

    try:
        u = obj.problem.f(point) + obj.tau * obj.barrier.evaluate(point)
    except DomainError:
        return math.inf

    value = auxiliary_service.evaluate(obj.phi, u)
    if math.isnan(value):
        return math.inf
    return value


def composite_gradient(obj: CompositeObjective, x) -> np.ndarray:
    """
    Chain-rule gradient grad Phi(u)^T (J_f(x) + tau J_B(x)), u = f(x) + tau B(x)

    Raises DomainError within settings.boundary_proximity of the boundary
    and TieError for max-type Phi at ties.
    """
    point = obj.problem.check_dimension(x)
    gx = obj.problem.g(point)
    if np.any(gx > -settings.boundary_proximity):
        raise DomainError(f"Gradient requested at or near the boundary (g = {gx.tolist()})", field="x")
    if obj.box is not None and not obj.box.contains_interior(point):
        raise DomainError("Gradient requested outside the open box", field="x")

    u = obj.problem.f(point) + obj.tau * obj.barrier.evaluate(point)
    grad_phi = auxiliary_service.gradient(obj.phi, u)
    jacobian = obj.problem.jac_f(point) + obj.tau * obj.barrier.jacobian(point)
    return jacobian.T @ grad_phi


class InnerSolver:
    """
    Minimizes a composite objective keeping every accepted point strictly feasible

    Gradient backtracking uses an Armijo rule with a fraction-to-boundary
    safeguard on the constraints and box faces. Nelder-Mead sees +inf outside
    the interior and never accepts such points.
    """

    def __init__(self, config: Optional[InnerSolverConfig] = None):
        self.config = config or InnerSolverConfig()

    def select_method(self, obj: CompositeObjective, config: InnerSolverConfig) -> SolverMethod:
        if config.method is not None:
            return config.method
        if obj.phi.is_smooth:
            return SolverMethod.GRADIENT_BACKTRACKING
        return SolverMethod.NELDER_MEAD

    def minimize(self, obj: CompositeObjective, x_start, config: Optional[InnerSolverConfig] = None,
                 callback: Optional[IterationCallback] = None) -> InnerResult:
        """
        Minimize obj starting from a strictly feasible point

        Args:
            obj: Composite objective for one penalty parameter
            x_start: Start point (strictly feasible, inside the box when present)
            config: Overrides the solver's default config
            callback: Called with (iteration, x, value) for every accepted iterate

        Returns:
            InnerResult with the final point, its value, iteration count and status
        """
        config = config or self.config
        x = obj.problem.check_dimension(x_start, field="x_start")

        if not obj.problem.is_strictly_feasible(x):
            raise PreconditionError(f"Start point {x.tolist()} is not strictly feasible", field="x_start")
        if obj.box is not None and not obj.box.contains_interior(x):
            raise PreconditionError(f"Start point {x.tolist()} is not inside the open box", field="x_start")

        value = evaluate_composite(obj, x)
        if not math.isfinite(value):
            raise PreconditionError(f"Composite value at the start point is not finite ({value})", field="x_start")

        method = self.select_method(obj, config)
        if callback is not None:
            callback(0, x.copy(), value)

        if method == SolverMethod.GRADIENT_BACKTRACKING:
            return self._gradient_backtracking(obj, x, value, config, callback)
        return self._nelder_mead(obj, x, value, config, callback)

    def _is_unbounded(self, x: np.ndarray, value: float) -> bool:
        return value < settings.unbounded_value or float(np.linalg.norm(x)) > settings.unbounded_norm

    def _result(self, x: np.ndarray, value: float, iterations: int, status: InnerStatus,
                method: SolverMethod) -> InnerResult:
        if status == InnerStatus.MAX_ITERATIONS:
            logger.warning(f"Inner {method.value} hit its iteration budget ({iterations}) at value {value:.6g}")
        return InnerResult(x=as_list(x), value=float(value), iterations=iterations, status=status, method=method)

    def _slack_vector(self, obj: CompositeObjective, x: np.ndarray) -> np.ndarray:
        """Positive slacks of the constraints and of the box faces"""
        slacks = -obj.problem.g(x)
        if obj.box is not None:
            slacks = np.concatenate([slacks, obj.box.slacks(x)])
        return slacks

    def _boundary_step(self, obj: CompositeObjective, x: np.ndarray, direction: np.ndarray,
                       step: float, config: InnerSolverConfig) -> float:
        """Largest step of the form step * shrink^j keeping each slack above (1 - factor) of its current value"""
        floor = (1.0 - config.safeguard_factor) * self._slack_vector(obj, x)
        for _ in range(settings.max_backtracks):
            trial = x + step * direction
            if np.all(self._slack_vector(obj, trial) >= floor):
                return step
            step *= config.shrink_factor
        return 0.0

    def _gradient_backtracking(self, obj: CompositeObjective, x: np.ndarray, value: float,
                               config: InnerSolverConfig, callback: Optional[IterationCallback]) -> InnerResult:
        method = SolverMethod.GRADIENT_BACKTRACKING
        trial_step = config.initial_step

        for iteration in range(1, config.max_iterations + 1):
            try:
                grad = composite_gradient(obj, x)
            except TieError:
                logger.debug(f"Tie in max-type Phi at x = {x.tolist()}; continuing with Nelder-Mead")
                remaining = config.max_iterations - iteration + 1
                return self._nelder_mead(obj, x, value, config.model_copy(update={"max_iterations": remaining}),
                                         callback, offset=iteration - 1)
            except DomainError:
                return self._result(x, value, iteration - 1, InnerStatus.CONVERGED, method)

            squared_norm = float(grad @ grad)
            if squared_norm == 0.0 or not math.isfinite(squared_norm):
                return self._result(x, value, iteration - 1, InnerStatus.CONVERGED, method)

            direction = -grad
            step = self._boundary_step(obj, x, direction, trial_step, config)

            accepted = False
            trial, trial_value = x, value
            for _ in range(settings.max_backtracks):
                if step <= 0.0:
                    break
                trial = x + step * direction
                trial_value = evaluate_composite(obj, trial)
                if trial_value <= value - config.armijo_parameter * step * squared_norm:
                    accepted = True
                    break
                step *= config.shrink_factor

            if not accepted:
                # no Armijo step: stationary to working precision
                return self._result(x, value, iteration - 1, InnerStatus.CONVERGED, method)

            decrease = value - trial_value
            step_norm = step * math.sqrt(squared_norm)
            x, value = trial, trial_value
            trial_step = 2.0 * step
            if callback is not None:
                callback(iteration, x.copy(), value)

            if self._is_unbounded(x, value):
                return self._result(x, value, iteration, InnerStatus.UNBOUNDED, method)
            if step_norm < config.step_tolerance or decrease < config.value_tolerance:
                return self._result(x, value, iteration, InnerStatus.CONVERGED, method)

        return self._result(x, value, config.max_iterations, InnerStatus.MAX_ITERATIONS, method)

    def _initial_simplex(self, obj: CompositeObjective, x: np.ndarray, value: float,
                         config: InnerSolverConfig) -> Tuple[List[np.ndarray], List[float]]:
        """x plus one finite vertex per coordinate direction"""
        vertices, values = [x.copy()], [value]
        for i in range(x.size):
            base = config.simplex_step * max(1.0, abs(x[i]))
            vertex, vertex_value = x.copy(), value
            found = False
            for sign in (1.0, -1.0):
                offset = base
                for _ in range(settings.max_backtracks):
                    candidate = x.copy()
                    candidate[i] += sign * offset
                    candidate_value = evaluate_composite(obj, candidate)
                    if math.isfinite(candidate_value):
                        vertex, vertex_value = candidate, candidate_value
                        found = True
                        break
                    offset *= 0.5
                if found:
                    break
            vertices.append(vertex)
            values.append(vertex_value)
        return vertices, values

    def _shrink_vertex(self, obj: CompositeObjective, best: np.ndarray, vertex: np.ndarray) -> Tuple[np.ndarray, float]:
        """Move vertex toward best, halving further until the value is finite"""
        fraction = SHRINK
        for _ in range(settings.max_backtracks):
            candidate = best + fraction * (vertex - best)
            candidate_value = evaluate_composite(obj, candidate)
            if math.isfinite(candidate_value):
                return candidate, candidate_value
            fraction *= 0.5
        return best.copy(), evaluate_composite(obj, best)

    def _nelder_mead(self, obj: CompositeObjective, x: np.ndarray, value: float, config: InnerSolverConfig,
                     callback: Optional[IterationCallback], offset: int = 0) -> InnerResult:
        method = SolverMethod.NELDER_MEAD
        vertices, values = self._initial_simplex(obj, x, value, config)
        simplex = np.array(vertices)
        fvalues = np.array(values)

        for iteration in range(1, config.max_iterations + 1):
            order = np.argsort(fvalues, kind="stable")
            simplex, fvalues = simplex[order], fvalues[order]

            diameter = float(np.max(np.abs(simplex[1:] - simplex[0]))) if len(simplex) > 1 else 0.0
            if diameter < config.step_tolerance:
                return self._result(simplex[0], fvalues[0], offset + iteration - 1, InnerStatus.CONVERGED, method)

            centroid = simplex[:-1].mean(axis=0)
            worst = simplex[-1]

            reflected = centroid + REFLECTION * (centroid - worst)
            f_reflected = evaluate_composite(obj, reflected)

            if f_reflected < fvalues[0]:
                expanded = centroid + EXPANSION * (centroid - worst)
                f_expanded = evaluate_composite(obj, expanded)
                if f_expanded < f_reflected:
                    simplex[-1], fvalues[-1] = expanded, f_expanded
                else:
                    simplex[-1], fvalues[-1] = reflected, f_reflected
            elif f_reflected < fvalues[-2]:
                simplex[-1], fvalues[-1] = reflected, f_reflected
            else:
                if f_reflected < fvalues[-1]:
                    contracted = centroid + CONTRACTION * (reflected - centroid)
                    f_contracted = evaluate_composite(obj, contracted)
                    accept = f_contracted <= f_reflected
                else:
                    contracted = centroid + CONTRACTION * (worst - centroid)
                    f_contracted = evaluate_composite(obj, contracted)
                    accept = f_contracted < fvalues[-1]

                if accept:
                    simplex[-1], fvalues[-1] = contracted, f_contracted
                else:
                    for j in range(1, len(simplex)):
                        simplex[j], fvalues[j] = self._shrink_vertex(obj, simplex[0], simplex[j])

            best = int(np.argmin(fvalues))
            if callback is not None:
                callback(offset + iteration, simplex[best].copy(), float(fvalues[best]))
            if self._is_unbounded(simplex[best], fvalues[best]):
                return self._result(simplex[best], fvalues[best], offset + iteration, InnerStatus.UNBOUNDED, method)

        best = int(np.argmin(fvalues))
        return self._result(simplex[best], fvalues[best], offset + config.max_iterations,
                            InnerStatus.MAX_ITERATIONS, method)


def minimize(obj: CompositeObjective, x_start, config: Optional[InnerSolverConfig] = None,
             callback: Optional[IterationCallback] = None) -> InnerResult:
    """Module-level shortcut for InnerSolver(config).minimize(obj, x_start)"""
    return InnerSolver(config).minimize(obj, as_point(x_start), callback=callback)
