from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from app.models.auxiliary_models import (
    AuxiliaryFunction,
    AuxiliaryKind,
    Monotonicity,
    MonotonicityReport,
)
from app.utils.helpers import as_point
from app.utils.validators import InputError, TieError, validate_vector_dimension


def max_function() -> AuxiliaryFunction:
    return AuxiliaryFunction(kind=AuxiliaryKind.MAX)


def shifted_max(omega: Sequence[float]) -> AuxiliaryFunction:
    return AuxiliaryFunction(kind=AuxiliaryKind.SHIFTED_MAX, omega=[float(w) for w in omega])


def weighted_sum(weights: Sequence[float]) -> AuxiliaryFunction:
    return AuxiliaryFunction(kind=AuxiliaryKind.WEIGHTED_SUM, weights=[float(w) for w in weights])


def sum_arctan() -> AuxiliaryFunction:
    return AuxiliaryFunction(kind=AuxiliaryKind.SUM_ARCTAN)


def log_sum_exp(beta: Optional[float] = None) -> AuxiliaryFunction:
    if beta is None:
        return AuxiliaryFunction(kind=AuxiliaryKind.LOG_SUM_EXP)
    return AuxiliaryFunction(kind=AuxiliaryKind.LOG_SUM_EXP, beta=float(beta))


def expected_dimension(phi: AuxiliaryFunction) -> Optional[int]:
    """Dimension fixed by the parameters of phi, None when any m works"""
    if phi.kind == AuxiliaryKind.SHIFTED_MAX:
        return len(phi.omega)
    if phi.kind == AuxiliaryKind.WEIGHTED_SUM:
        return len(phi.weights)
    return None


def _checked(phi: AuxiliaryFunction, u) -> np.ndarray:
    vector = as_point(u)
    expected = expected_dimension(phi)
    if expected is not None:
        is_valid, error = validate_vector_dimension(vector, expected)
        if not is_valid:
            raise InputError(error, field="u")
    elif vector.size == 0:
        raise InputError("u must have at least one component", field="u")
    return vector


def evaluate(phi: AuxiliaryFunction, u) -> float:
    """Phi(u); +inf whenever some component of u is +inf"""
    vector = _checked(phi, u)
    if np.any(np.isposinf(vector)):
        return float("inf")

    if phi.kind == AuxiliaryKind.MAX:
        return float(np.max(vector))
    if phi.kind == AuxiliaryKind.SHIFTED_MAX:
        return float(np.max(vector + np.asarray(phi.omega)))
    if phi.kind == AuxiliaryKind.WEIGHTED_SUM:
        return float(np.dot(phi.weights, vector))
    if phi.kind == AuxiliaryKind.SUM_ARCTAN:
        return float(np.sum(np.arctan(vector)))

    # log-sum-exp, shifted by the max for stability
    top = np.max(vector)
    return float(top + np.log(np.sum(np.exp(phi.beta * (vector - top)))) / phi.beta)


def active_set(phi: AuxiliaryFunction, u, tolerance: Optional[float] = None) -> np.ndarray:
    """Indices attaining max(u + omega) within the tolerance (max-type kinds)"""
    vector = _checked(phi, u)
    if phi.kind == AuxiliaryKind.SHIFTED_MAX:
        vector = vector + np.asarray(phi.omega)
    tolerance = phi.tie_tolerance if tolerance is None else tolerance
    return np.flatnonzero(vector >= np.max(vector) - tolerance)


def gradient(phi: AuxiliaryFunction, u) -> np.ndarray:
    """
    Gradient of Phi at u

    For Max and ShiftedMax this is the unit vector of the unique active
    index; ties within phi.tie_tolerance raise TieError.
    """
    vector = _checked(phi, u)

    if phi.is_max_type:
        active = active_set(phi, vector)
        if active.size > 1:
            raise TieError(f"Tied maxima at indices {active.tolist()}; gradient undefined", field="u")
        grad = np.zeros(vector.size)
        grad[active[0]] = 1.0
        return grad
    if phi.kind == AuxiliaryKind.WEIGHTED_SUM:
        return np.asarray(phi.weights, dtype=float)
    if phi.kind == AuxiliaryKind.SUM_ARCTAN:
        return 1.0 / (1.0 + vector ** 2)

    shifted = np.exp(phi.beta * (vector - np.max(vector)))
    return shifted / shifted.sum()


def sampling_scale(phi: AuxiliaryFunction) -> float:
    """Length scale on which strict increases of phi stay above float resolution"""
    if phi.kind == AuxiliaryKind.LOG_SUM_EXP and phi.beta > 1.0:
        return 1.0 / phi.beta
    return 1.0


def _sample_pair(rng: np.random.Generator, dim: int, low: float, high: float, scale: float,
                 all_coordinates: bool) -> Tuple[np.ndarray, np.ndarray]:
    u = rng.uniform(low, high, size=dim)
    delta = np.zeros(dim)
    if all_coordinates:
        delta[:] = rng.uniform(0.01, 1.0, size=dim)
    else:
        delta[rng.integers(dim)] = rng.uniform(0.01, 1.0)
    return u, u + scale * delta


def verify_monotonicity(phi: AuxiliaryFunction, dim: int, trials: int,
                        box: Optional[Tuple[float, float]] = None, seed: int = 0,
                        tag: Optional[Monotonicity] = None) -> MonotonicityReport:
    """
    Randomized check of the monotonicity contract of phi

    Trials alternate between increments that are positive in every
    coordinate and increments that move a single coordinate. The strict
    inequality is required for the former under either tag and for the
    latter only under the s-increasing tag; otherwise Phi(u) <= Phi(v) is
    required.

    Both the default box and the increments are scaled by
    sampling_scale(phi): a sharp log-sum-exp is s-increasing only up to
    float resolution, and coordinates far below the max are lost to
    rounding on a wider box.

    Args:
        phi: Function under test
        dim: Dimension m of the sampled vectors
        trials: Number of sampled pairs
        box: Sampling range for u, default (-10, 10) times sampling_scale(phi)
        seed: Seed for numpy's default_rng
        tag: Tag to check against (defaults to the declared one)

    Returns:
        Report with the first counterexample, if any
    """
    if trials < 1:
        raise InputError("trials must be at least 1", field="trials")

    tag = phi.monotonicity if tag is None else tag
    rng = np.random.default_rng(seed)
    scale = sampling_scale(phi)
    low, high = (-10.0 * scale, 10.0 * scale) if box is None else box
    failures = 0
    counterexample = None

    for trial in range(trials):
        all_coordinates = trial % 2 == 0
        u, v = _sample_pair(rng, dim, low, high, scale, all_coordinates)
        phi_u, phi_v = evaluate(phi, u), evaluate(phi, v)

        strict = all_coordinates or tag == Monotonicity.S_INCREASING
        holds = phi_u < phi_v if strict else phi_u <= phi_v
        if holds:
            continue

        failures += 1
        if counterexample is None:
            counterexample = {"u": u.tolist(), "v": v.tolist(), "phi_u": phi_u, "phi_v": phi_v}

    if failures:
        logger.info(f"{phi.kind.value} violates the {tag.value} contract in {failures}/{trials} trials")

    return MonotonicityReport(
        kind=phi.kind,
        tag=tag,
        trials=trials,
        passed=failures == 0,
        failures=failures,
        counterexample=counterexample,
    )
