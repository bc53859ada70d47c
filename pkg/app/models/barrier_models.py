from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.config import settings
from app.models.problem_models import Problem
from app.utils.helpers import as_point
from app.utils.validators import DomainError


class BarrierKind(str, Enum):
    """Constructions of multiobjective barriers from the constraint values"""
    INVERSE_ASSIGNED = "inverse_assigned"
    INVERSE_SUMMED_REPLICATED = "inverse_summed_replicated"
    INVERSE_GROUPED = "inverse_grouped"
    LOG_REPLICATED_SHIFTED = "log_replicated_shifted"


class Barrier(BaseModel):
    """
    Multiobjective barrier B : D^o -> R^m for a problem's feasible set

    At least one component diverges whenever some constraint value tends to 0
    from below. Use the constructors in app.services.barrier_service.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: BarrierKind
    problem: Problem
    rho: float = Field(0.0, description="Shift, used only by the log kind")
    grouping: Optional[List[List[int]]] = Field(None, description="Constraint indices per objective (0-based)")

    @property
    def m(self) -> int:
        return self.problem.m

    def _slacks(self, x: np.ndarray) -> np.ndarray:
        gx = self.problem.g(x)
        if np.any(gx >= 0):
            raise DomainError(f"Barrier evaluated outside the strict interior (g = {gx.tolist()})", field="x")
        return -gx

    def _terms(self, slack: np.ndarray) -> np.ndarray:
        """Per-constraint terms 1/(-g_i) or -log(-g_i), +inf when saturated"""
        saturated = slack <= settings.boundary_saturation
        safe = np.where(saturated, 1.0, slack)
        if self.kind == BarrierKind.LOG_REPLICATED_SHIFTED:
            terms = -np.log(safe)
        else:
            terms = 1.0 / safe
        return np.where(saturated, np.inf, terms)

    def evaluate(self, x) -> np.ndarray:
        """B(x) for x in D^o; raises DomainError otherwise"""
        point = as_point(x)
        terms = self._terms(self._slacks(point))

        if self.kind == BarrierKind.INVERSE_ASSIGNED:
            values = np.zeros(self.m)
            values[: terms.size] = terms
            return values
        if self.kind == BarrierKind.INVERSE_SUMMED_REPLICATED:
            return np.full(self.m, terms.sum())
        if self.kind == BarrierKind.INVERSE_GROUPED:
            return np.array([terms[group].sum() if group else 0.0 for group in self.grouping])
        return np.full(self.m, terms.sum() - self.rho)

    def jacobian(self, x) -> np.ndarray:
        """m x n Jacobian of B at x in D^o"""
        point = as_point(x)
        slack = self._slacks(point)
        jac_g = self.problem.jac_g(point)

        # d/dx 1/(-g) = grad g / g^2 ; d/dx -log(-g) = grad g / (-g)
        if self.kind == BarrierKind.LOG_REPLICATED_SHIFTED:
            rows = jac_g / slack[:, None]
        else:
            rows = jac_g / (slack ** 2)[:, None]

        n = self.problem.n
        if self.kind == BarrierKind.INVERSE_ASSIGNED:
            jac = np.zeros((self.m, n))
            jac[: rows.shape[0]] = rows
            return jac
        if self.kind == BarrierKind.INVERSE_GROUPED:
            return np.array([rows[group].sum(axis=0) if group else np.zeros(n) for group in self.grouping])
        return np.tile(rows.sum(axis=0), (self.m, 1))


class BarrierSpec(BaseModel):
    """Barrier section of a run config: kind plus its parameters"""
    kind: BarrierKind = Field(BarrierKind.INVERSE_SUMMED_REPLICATED, description="Barrier construction")
    rho: Optional[float] = Field(None, description="Log-barrier shift; estimated from rho_samples when omitted")
    grouping: Optional[List[List[int]]] = Field(None, description="0-based constraint indices per objective")
    rho_samples: Optional[List[List[float]]] = Field(None, description="Strictly feasible points for the rho estimate")
