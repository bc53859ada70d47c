from typing import Iterable, List, Optional, Sequence

import numpy as np
from loguru import logger

from app.config import settings
from app.models.barrier_models import Barrier, BarrierKind, BarrierSpec
from app.models.problem_models import Problem
from app.utils.helpers import as_point
from app.utils.validators import ConfigurationError, validate_grouping


def make_inverse_assigned(problem: Problem) -> Barrier:
    """B_i = 1/(-g_i) for i < p, zero for the remaining m - p components"""
    if problem.p > problem.m:
        raise ConfigurationError(
            f"inverse_assigned needs p <= m (p={problem.p}, m={problem.m}); "
            "use inverse_grouped or inverse_summed_replicated",
            field="barrier.kind",
        )
    return Barrier(kind=BarrierKind.INVERSE_ASSIGNED, problem=problem)


def make_inverse_summed_replicated(problem: Problem) -> Barrier:
    """Every component equals sum_i 1/(-g_i)"""
    return Barrier(kind=BarrierKind.INVERSE_SUMMED_REPLICATED, problem=problem)


def make_inverse_grouped(problem: Problem, grouping: Sequence[Sequence[int]]) -> Barrier:
    """B_j = sum of 1/(-g_i) over the constraints assigned to objective j"""
    is_valid, error = validate_grouping(grouping, problem.p, problem.m)
    if not is_valid:
        raise ConfigurationError(error, field="barrier.grouping")
    return Barrier(kind=BarrierKind.INVERSE_GROUPED, problem=problem,
                   grouping=[[int(i) for i in group] for group in grouping])


def make_log_replicated_shifted(problem: Problem, rho: float) -> Barrier:
    """Every component equals -sum_i log(-g_i) - rho"""
    return Barrier(kind=BarrierKind.LOG_REPLICATED_SHIFTED, problem=problem, rho=float(rho))


def evaluate_barrier(barrier: Barrier, x) -> np.ndarray:
    """B(x); raises DomainError outside the strict interior"""
    return barrier.evaluate(x)


def estimate_log_shift(problem: Problem, samples: Iterable, margin: Optional[float] = None) -> float:
    """
    Estimate rho for the shifted log barrier

    rho = min over the samples of the unshifted value, minus a margin, so the
    shifted barrier is positive on the sampled region.

    Args:
        problem: Problem whose constraints define the barrier
        samples: Strictly feasible points
        margin: Safety margin (defaults to settings.log_barrier_margin)

    Returns:
        Estimated shift
    """
    unshifted = make_log_replicated_shifted(problem, 0.0)
    values = [float(unshifted.evaluate(x)[0]) for x in samples if problem.is_strictly_feasible(x)]
    if not values:
        raise ConfigurationError("No strictly feasible samples to estimate rho", field="barrier.rho_samples")

    margin = settings.log_barrier_margin if margin is None else margin
    rho = min(values) - margin
    logger.debug(f"Estimated log-barrier shift rho = {rho:.6g} from {len(values)} samples")
    return rho


def check_barrier_nonnegative(barrier: Barrier, samples: Iterable) -> bool:
    """False (with a warning) when some sampled strictly feasible point gives B(x) < 0"""
    for x in samples:
        point = as_point(x)
        if not barrier.problem.is_strictly_feasible(point):
            continue
        values = barrier.evaluate(point)
        if np.any(values < 0):
            logger.warning(f"Barrier {barrier.kind.value} is negative at x = {point.tolist()}: {values.tolist()}")
            return False
    return True


def build_barrier(problem: Problem, spec: BarrierSpec) -> Barrier:
    """Construct a barrier from a config section"""
    if spec.kind == BarrierKind.INVERSE_ASSIGNED:
        return make_inverse_assigned(problem)
    if spec.kind == BarrierKind.INVERSE_SUMMED_REPLICATED:
        return make_inverse_summed_replicated(problem)
    if spec.kind == BarrierKind.INVERSE_GROUPED:
        if spec.grouping is None:
            raise ConfigurationError("inverse_grouped requires a grouping", field="barrier.grouping")
        return make_inverse_grouped(problem, spec.grouping)

    rho = spec.rho
    if rho is None:
        if spec.rho_samples:
            rho = estimate_log_shift(problem, spec.rho_samples)
        else:
            logger.warning("Log barrier without rho or rho_samples; using rho = 0")
            rho = 0.0
    barrier = make_log_replicated_shifted(problem, rho)
    if spec.rho_samples and not check_barrier_nonnegative(barrier, spec.rho_samples):
        logger.warning("Shifted log barrier takes negative values on the supplied samples")
    return barrier


def boundary_ray(problem: Problem, origin: Sequence[float], direction: Sequence[float],
                 slacks: Sequence[float]) -> List[np.ndarray]:
    """
    Points on the ray origin + s * direction whose largest constraint value is -slack

    Bisection along the ray; used to probe divergence near the boundary.
    """
    start = as_point(origin)
    d = as_point(direction)
    if not problem.is_strictly_feasible(start):
        raise ConfigurationError("Ray origin must be strictly feasible", field="origin")

    high = 1.0
    while np.max(problem.g(start + high * d)) < 0:
        high *= 2.0
        if high > 1e12:
            raise ConfigurationError("Ray never leaves the feasible set", field="direction")

    points = []
    for slack in slacks:
        low, up = 0.0, high
        for _ in range(200):
            mid = 0.5 * (low + up)
            if np.max(problem.g(start + mid * d)) < -slack:
                low = mid
            else:
                up = mid
        points.append(start + low * d)
    return points
