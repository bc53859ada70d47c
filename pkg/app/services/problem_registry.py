from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger

from app.models.problem_models import Problem, ProblemInstance
from app.utils.validators import ConfigurationError, ProblemLookupError


def build_ex51(a: float = 9.0) -> ProblemInstance:
    """f(t) = (t, -a t) on D = {t >= 0}: every feasible point is Pareto optimal"""
    if a <= 0:
        raise ConfigurationError("Parameter a must be positive", field="problem.params.a")

    problem = Problem(
        name="ex51",
        n=1, m=2, p=1,
        objective=lambda x: np.array([x[0], -a * x[0]]),
        constraints=lambda x: np.array([-x[0]]),
        objective_jacobian=lambda x: np.array([[1.0], [-a]]),
        constraint_jacobian=lambda x: np.array([[-1.0]]),
        strictly_feasible_start=[1.0],
    )
    return ProblemInstance(
        name="ex51",
        problem=problem,
        known_solution=(f"Pareto set is D = [0, inf); weighting fails for alpha_1 < {a / (1 + a):.6g}; "
                        "max-type runs with B = (1/t, 1/t), tau_k = 1/k give t_k = k^(-1/2)"),
    )


def build_ex52() -> ProblemInstance:
    """f(t) = (t^2 + 1, t^2 - 2t + 1) on D = {t >= -2}: Pareto set [0, 1]"""
    problem = Problem(
        name="ex52",
        n=1, m=2, p=1,
        objective=lambda x: np.array([x[0] ** 2 + 1.0, x[0] ** 2 - 2.0 * x[0] + 1.0]),
        constraints=lambda x: np.array([-x[0] - 2.0]),
        objective_jacobian=lambda x: np.array([[2.0 * x[0]], [2.0 * x[0] - 2.0]]),
        constraint_jacobian=lambda x: np.array([[-1.0]]),
        strictly_feasible_start=[-1.0],
    )
    return ProblemInstance(
        name="ex52",
        problem=problem,
        known_solution="Pareto set [0, 1]; shifted max with omega = (alpha, 0) has minimizer t = -alpha/2",
    )


def build_disk2d() -> ProblemInstance:
    """f(x) = x on the closed unit disk: Pareto set is the arc |x| = 1, x <= 0"""
    problem = Problem(
        name="disk2d",
        n=2, m=2, p=1,
        objective=lambda x: np.array([x[0], x[1]]),
        constraints=lambda x: np.array([x[0] ** 2 + x[1] ** 2 - 1.0]),
        objective_jacobian=lambda x: np.eye(2),
        constraint_jacobian=lambda x: np.array([[2.0 * x[0], 2.0 * x[1]]]),
        strictly_feasible_start=[0.0, 0.0],
    )
    return ProblemInstance(
        name="disk2d",
        problem=problem,
        known_solution="Pareto set is the arc {x : |x| = 1, x <= 0}",
    )


_REGISTRY: Dict[str, Callable[..., ProblemInstance]] = {
    "ex51": build_ex51,
    "ex52": build_ex52,
    "disk2d": build_disk2d,
}


def registry_names() -> List[str]:
    return sorted(_REGISTRY)


def registry_get(name: str, params: Optional[Dict[str, float]] = None) -> ProblemInstance:
    """
    Look up a built-in problem instance

    Args:
        name: Registry identifier
        params: Instance parameters (e.g. {"a": 9.0} for ex51)

    Returns:
        The instance
    """
    builder = _REGISTRY.get(name)
    if builder is None:
        raise ProblemLookupError(f"Unknown problem '{name}'. Available: {', '.join(registry_names())}",
                                 field="problem.name")

    try:
        return builder(**(params or {}))
    except TypeError as e:
        logger.error(f"Invalid parameters {params} for problem '{name}': {e}")
        raise ConfigurationError(f"Invalid parameters for problem '{name}': {e}", field="problem.params")


def is_strictly_feasible(problem: Problem, x) -> bool:
    """True iff every component of g(x) is strictly negative"""
    return problem.is_strictly_feasible(x)
