from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.config import settings


class Grid(BaseModel):
    """Lattice of evaluation points; only points of D (g <= 0) are used"""
    bounds: List[Tuple[float, float]] = Field(..., min_length=1, description="Closed bounds per dimension")
    counts: List[int] = Field(..., min_length=1, description="Point count per dimension")
    cap: int = Field(default_factory=lambda: settings.grid_point_cap, ge=1, description="Maximum total points")

    @model_validator(mode="after")
    def validate_shape(self) -> "Grid":
        if len(self.bounds) != len(self.counts):
            raise ValueError("Grid bounds and counts must have the same length")
        return self

    @property
    def dimension(self) -> int:
        return len(self.counts)

    @property
    def total_points(self) -> int:
        return int(np.prod(self.counts))

    @property
    def spacing(self) -> List[float]:
        return [(high - low) / (count - 1) if count > 1 else 0.0
                for (low, high), count in zip(self.bounds, self.counts)]

    def points(self) -> np.ndarray:
        """All lattice points as a (total_points x dimension) array"""
        axes = [np.linspace(low, high, count) for (low, high), count in zip(self.bounds, self.counts)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.column_stack([axis.ravel() for axis in mesh])


class Classification(str, Enum):
    APPROX_PARETO = "approx_pareto"
    APPROX_WEAK_PARETO_ONLY = "approx_weak_pareto_only"
    DOMINATED = "dominated"


class WeightingOutcome(str, Enum):
    MINIMIZER = "minimizer"
    UNBOUNDED = "unbounded"
    BUDGET_EXHAUSTED = "budget_exhausted"


class WeightingResult(BaseModel):
    """Outcome of minimizing <alpha, f(x)> over D for one weight"""
    alpha: List[float]
    outcome: WeightingOutcome
    x: Optional[List[float]] = Field(None, description="Last iterate; the minimizer when outcome is minimizer")
    value: Optional[float] = None
    iterations: int = 0
