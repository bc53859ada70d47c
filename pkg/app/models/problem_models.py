from typing import Any, Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.utils.helpers import as_point, finite_difference_jacobian
from app.utils.validators import InputError, validate_point_dimension

Evaluator = Callable[[np.ndarray], Any]


class Problem(BaseModel):
    """Constrained multiobjective problem: minimize f(x) subject to g(x) <= 0"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field("problem", description="Human-readable identifier")
    n: int = Field(..., ge=1, description="Decision dimension")
    m: int = Field(..., ge=1, description="Number of objectives")
    p: int = Field(..., ge=0, description="Number of inequality constraints")
    objective: Evaluator = Field(..., description="x -> f(x) in R^m")
    constraints: Evaluator = Field(..., description="x -> g(x) in R^p")
    objective_jacobian: Optional[Evaluator] = Field(None, description="x -> m x n Jacobian of f")
    constraint_jacobian: Optional[Evaluator] = Field(None, description="x -> p x n Jacobian of g")
    strictly_feasible_start: Optional[List[float]] = Field(None, description="Point with g < 0 componentwise")
    equality_constraints: Optional[Evaluator] = Field(None, description="Not supported; must stay unset")

    @model_validator(mode="after")
    def validate_problem(self) -> "Problem":
        if self.equality_constraints is not None:
            raise ValueError("Equality constraints are not supported; express D as {x : g(x) <= 0}")

        if self.strictly_feasible_start is not None:
            is_valid, error = validate_point_dimension(self.strictly_feasible_start, self.n)
            if not is_valid:
                raise ValueError(f"strictly_feasible_start: {error}")
            if not self.is_strictly_feasible(self.strictly_feasible_start):
                raise ValueError("strictly_feasible_start must satisfy g(x) < 0 componentwise")
        return self

    def f(self, x) -> np.ndarray:
        return as_point(self.objective(as_point(x)))

    def g(self, x) -> np.ndarray:
        if self.p == 0:
            return np.zeros(0)
        return as_point(self.constraints(as_point(x)))

    def jac_f(self, x) -> np.ndarray:
        """Objective Jacobian, analytic when available"""
        point = as_point(x)
        if self.objective_jacobian is not None:
            return np.array(self.objective_jacobian(point), dtype=float).reshape(self.m, self.n)
        return finite_difference_jacobian(self.f, point).reshape(self.m, self.n)

    def jac_g(self, x) -> np.ndarray:
        """Constraint Jacobian, analytic when available"""
        point = as_point(x)
        if self.p == 0:
            return np.zeros((0, self.n))
        if self.constraint_jacobian is not None:
            return np.array(self.constraint_jacobian(point), dtype=float).reshape(self.p, self.n)
        return finite_difference_jacobian(self.g, point).reshape(self.p, self.n)

    @property
    def has_analytic_jacobians(self) -> bool:
        return self.objective_jacobian is not None and (self.p == 0 or self.constraint_jacobian is not None)

    def check_dimension(self, x, field: str = "x") -> np.ndarray:
        point = as_point(x)
        is_valid, error = validate_point_dimension(point, self.n)
        if not is_valid:
            raise InputError(error, field=field)
        return point

    def is_strictly_feasible(self, x) -> bool:
        """True iff every component of g(x) is strictly negative"""
        point = self.check_dimension(x)
        return bool(np.all(self.g(point) < 0))

    def is_feasible(self, x) -> bool:
        """True iff g(x) <= 0 componentwise (boundary included)"""
        point = self.check_dimension(x)
        return bool(np.all(self.g(point) <= 0))


class ProblemInstance(BaseModel):
    """Registry entry: a named problem plus an optional description of its solution"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="Registry identifier")
    problem: Problem
    known_solution: Optional[str] = Field(None, description="Optimal set or iterate law, for tests")


class Box(BaseModel):
    """Axis-aligned closed box V; local runs minimize over its interior"""
    lower: List[float] = Field(..., min_length=1, description="Lower bounds")
    upper: List[float] = Field(..., min_length=1, description="Upper bounds")

    @model_validator(mode="after")
    def validate_lengths(self) -> "Box":
        if len(self.lower) != len(self.upper):
            raise ValueError("Box lower and upper bounds must have the same length")
        return self

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def side_lengths(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float) - np.asarray(self.lower, dtype=float)

    def contains_interior(self, x) -> bool:
        point = as_point(x)
        return bool(np.all(point > np.asarray(self.lower)) and np.all(point < np.asarray(self.upper)))

    def slacks(self, x) -> np.ndarray:
        """Distances to the lower faces followed by distances to the upper faces"""
        point = as_point(x)
        return np.concatenate([point - np.asarray(self.lower), np.asarray(self.upper) - point])
