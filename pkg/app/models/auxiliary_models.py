from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.config import settings


class Monotonicity(str, Enum):
    """Monotonicity class of an auxiliary function"""
    W_INCREASING = "w_increasing"
    S_INCREASING = "s_increasing"


class AuxiliaryKind(str, Enum):
    """Catalog of scalarizing auxiliary functions"""
    MAX = "max"
    SHIFTED_MAX = "shifted_max"
    WEIGHTED_SUM = "weighted_sum"
    SUM_ARCTAN = "sum_arctan"
    LOG_SUM_EXP = "log_sum_exp"


class AuxiliaryFunction(BaseModel):
    """
    Continuous monotone map Phi : R^m -> R

    Max and ShiftedMax are w-increasing; WeightedSum with strictly positive
    weights, SumArctan and LogSumExp are s-increasing. Evaluation and
    gradients live in app.services.auxiliary_service.
    """
    kind: AuxiliaryKind
    omega: Optional[List[float]] = Field(None, description="Shift vector for shifted_max")
    weights: Optional[List[float]] = Field(None, description="Nonnegative weights for weighted_sum")
    beta: float = Field(default_factory=lambda: settings.logsumexp_beta, gt=0, description="Sharpness for log_sum_exp")
    tie_tolerance: float = Field(default_factory=lambda: settings.evaluation_tie_tolerance, ge=0,
                                 description="Active-set tolerance for max-type gradients")

    @model_validator(mode="after")
    def validate_parameters(self) -> "AuxiliaryFunction":
        if self.kind == AuxiliaryKind.SHIFTED_MAX and not self.omega:
            raise ValueError("shifted_max requires omega")
        if self.kind == AuxiliaryKind.WEIGHTED_SUM:
            if not self.weights:
                raise ValueError("weighted_sum requires weights")
            w = np.asarray(self.weights, dtype=float)
            if np.any(w < 0) or w.sum() <= 0:
                raise ValueError("weighted_sum weights must be nonnegative with a positive sum")
        return self

    @property
    def monotonicity(self) -> Monotonicity:
        if self.kind in (AuxiliaryKind.MAX, AuxiliaryKind.SHIFTED_MAX):
            return Monotonicity.W_INCREASING
        if self.kind == AuxiliaryKind.WEIGHTED_SUM and min(self.weights) <= 0:
            return Monotonicity.W_INCREASING
        return Monotonicity.S_INCREASING

    @property
    def dominates_components(self) -> bool:
        """True iff u_i <= Phi(u) for every u and i"""
        if self.kind in (AuxiliaryKind.MAX, AuxiliaryKind.LOG_SUM_EXP):
            return True
        if self.kind == AuxiliaryKind.SHIFTED_MAX:
            return min(self.omega) >= 0
        return False

    @property
    def is_smooth(self) -> bool:
        return self.kind not in (AuxiliaryKind.MAX, AuxiliaryKind.SHIFTED_MAX)

    @property
    def is_max_type(self) -> bool:
        return not self.is_smooth

    @property
    def parameters(self) -> List[float]:
        """Family parameter reported by sweeps: omega, weights, beta or nothing"""
        if self.kind == AuxiliaryKind.SHIFTED_MAX:
            return list(self.omega)
        if self.kind == AuxiliaryKind.WEIGHTED_SUM:
            return list(self.weights)
        if self.kind == AuxiliaryKind.LOG_SUM_EXP:
            return [self.beta]
        return []


class MonotonicityReport(BaseModel):
    """Outcome of a randomized monotonicity check"""
    kind: AuxiliaryKind
    tag: Monotonicity
    trials: int
    passed: bool
    failures: int = 0
    counterexample: Optional[Dict[str, Any]] = Field(None, description="First violating pair (u, v, phi_u, phi_v)")
