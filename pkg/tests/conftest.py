from typing import List, Tuple

import numpy as np
import pytest

from app.models.problem_models import Problem
from app.services.inner_solver import InnerSolver
from app.services.mbm_service import MbmService
from app.services.oracle_service import OracleService
from app.services.problem_registry import registry_get


class PointRecorder:
    """Inner-solver callback collecting every accepted (iteration, x, value)"""

    def __init__(self):
        self.points: List[Tuple[int, np.ndarray, float]] = []

    def __call__(self, iteration: int, x: np.ndarray, value: float) -> None:
        self.points.append((iteration, np.array(x, dtype=float), float(value)))

    def infeasible(self, problem: Problem) -> List[np.ndarray]:
        return [x for _, x, _ in self.points if np.any(problem.g(x) >= 0)]


@pytest.fixture
def ex51():
    return registry_get("ex51", {"a": 9.0}).problem


@pytest.fixture
def ex52():
    return registry_get("ex52").problem


@pytest.fixture
def disk2d():
    return registry_get("disk2d").problem


@pytest.fixture
def scalar_problem():
    """min (t - 2)^2 subject to t <= 1: a single objective with its minimizer on the boundary"""
    return Problem(
        name="scalar",
        n=1, m=1, p=1,
        objective=lambda x: np.array([(x[0] - 2.0) ** 2]),
        constraints=lambda x: np.array([x[0] - 1.0]),
        objective_jacobian=lambda x: np.array([[2.0 * (x[0] - 2.0)]]),
        constraint_jacobian=lambda x: np.array([[1.0]]),
        strictly_feasible_start=[0.0],
    )


@pytest.fixture
def recorder():
    return PointRecorder()


@pytest.fixture
def inner_solver():
    return InnerSolver()


@pytest.fixture
def mbm_service():
    return MbmService(InnerSolver())


@pytest.fixture
def oracle_service():
    return OracleService(InnerSolver())
