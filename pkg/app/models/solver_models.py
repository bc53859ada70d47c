from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.config import settings
from app.models.auxiliary_models import AuxiliaryFunction
from app.models.barrier_models import Barrier
from app.models.problem_models import Box, Problem


class SolverMethod(str, Enum):
    """Inner minimization methods"""
    GRADIENT_BACKTRACKING = "gradient_backtracking"
    NELDER_MEAD = "nelder_mead"


class InnerStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    UNBOUNDED = "unbounded"


class InnerSolverConfig(BaseModel):
    """Settings for one subproblem solve; method None picks by smoothness of Phi"""
    method: Optional[SolverMethod] = Field(None, description="gradient_backtracking, nelder_mead or automatic")
    max_iterations: int = Field(default_factory=lambda: settings.inner_max_iterations, ge=1)
    step_tolerance: float = Field(default_factory=lambda: settings.inner_step_tolerance, gt=0)
    value_tolerance: float = Field(default_factory=lambda: settings.inner_value_tolerance, gt=0)
    shrink_factor: float = Field(default_factory=lambda: settings.backtracking_shrink, gt=0, lt=1)
    safeguard_factor: float = Field(default_factory=lambda: settings.fraction_to_boundary, gt=0, lt=1)
    armijo_parameter: float = Field(default_factory=lambda: settings.armijo_parameter, gt=0, lt=0.5)
    initial_step: float = Field(default_factory=lambda: settings.initial_step, gt=0)
    simplex_step: float = Field(default_factory=lambda: settings.simplex_step, gt=0)


class CompositeObjective(BaseModel):
    """x -> Phi(f(x) + tau B(x)) over D^o, intersected with int(box) when a box is set"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    problem: Problem
    barrier: Barrier
    phi: AuxiliaryFunction
    tau: float = Field(..., gt=0)
    box: Optional[Box] = None


class InnerResult(BaseModel):
    x: List[float]
    value: float
    iterations: int
    status: InnerStatus
    method: SolverMethod


class ScheduleRule(str, Enum):
    GEOMETRIC = "geometric"
    HARMONIC = "harmonic"


class PenaltySchedule(BaseModel):
    """Strictly decreasing positive penalty parameters tending to zero"""
    rule: ScheduleRule = ScheduleRule.GEOMETRIC
    tau0: float = Field(1.0, gt=0, description="First penalty parameter")
    sigma: float = Field(0.5, gt=0, lt=1, description="Ratio for the geometric rule")

    def value(self, k: int) -> float:
        """tau at index k = 0, 1, 2, ..."""
        if self.rule == ScheduleRule.GEOMETRIC:
            return self.tau0 * self.sigma ** k
        return self.tau0 / (k + 1)

    def values(self, count: int) -> List[float]:
        return [self.value(k) for k in range(count)]


class MbmMode(str, Enum):
    WEAK = "weak"
    STRONG = "strong"


class MbmConfig(BaseModel):
    """Outer-loop settings for one barrier-method run"""
    mode: MbmMode = MbmMode.WEAK
    schedule: PenaltySchedule = Field(default_factory=PenaltySchedule)
    outer_iterations: int = Field(default_factory=lambda: settings.outer_iterations, ge=1)
    outer_tolerance: float = Field(default_factory=lambda: settings.outer_tolerance, gt=0)
    tau_stop: float = Field(default_factory=lambda: settings.tau_stop, gt=0)
    local_box: Optional[Box] = None
    inner: InnerSolverConfig = Field(default_factory=InnerSolverConfig)
    recover_weights: bool = False
    warm_start: bool = True
    weight_tie_tolerance: Optional[float] = Field(None, gt=0, description="Absolute tie tolerance for weight recovery")


class RunStatus(str, Enum):
    CONVERGED = "converged"
    OUTER_BUDGET_EXHAUSTED = "outer_budget_exhausted"
    INNER_FAILURE = "inner_failure"


class RecoveredWeights(BaseModel):
    """Implicit scalarization weights at an iterate of a max-type run"""
    alpha: List[float]
    active_set: List[int]
    residual: float = Field(..., ge=0)


class IterationRecord(BaseModel):
    k: int
    tau: float
    x: List[float]
    f: List[float]
    barrier: List[float]
    phi_value: float
    inner_iterations: int
    inner_status: InnerStatus
    alpha: Optional[List[float]] = None
    kkt_residual: Optional[float] = None


class RunTrace(BaseModel):
    records: List[IterationRecord] = Field(default_factory=list)
    x_final: Optional[List[float]] = None
    phi_limit: Optional[float] = Field(None, description="Last Phi_k, the estimate of the limit of the Phi sequence")
    status: RunStatus = RunStatus.OUTER_BUDGET_EXHAUSTED
    failure_reason: Optional[str] = None

    @property
    def phi_values(self) -> List[float]:
        return [record.phi_value for record in self.records]

    @property
    def iterates(self) -> List[List[float]]:
        return [record.x for record in self.records]


class SweepResult(BaseModel):
    index: int
    parameter: List[float]
    x_final: Optional[List[float]] = None
    f_final: Optional[List[float]] = None
    status: RunStatus
    failure_reason: Optional[str] = None
    trace: Optional[RunTrace] = None
