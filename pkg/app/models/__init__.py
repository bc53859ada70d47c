"""Data models for the multiobjective barrier method"""

from .problem_models import (
    Evaluator,
    Problem,
    ProblemInstance,
    Box
)

from .barrier_models import (
    BarrierKind,
    Barrier,
    BarrierSpec
)

from .auxiliary_models import (
    Monotonicity,
    AuxiliaryKind,
    AuxiliaryFunction,
    MonotonicityReport
)

from .solver_models import (
    SolverMethod,
    InnerStatus,
    InnerSolverConfig,
    CompositeObjective,
    InnerResult,
    ScheduleRule,
    PenaltySchedule,
    MbmMode,
    MbmConfig,
    RunStatus,
    RecoveredWeights,
    IterationRecord,
    RunTrace,
    SweepResult
)

from .oracle_models import (
    Grid,
    Classification,
    WeightingOutcome,
    WeightingResult
)

from .config_models import (
    ProblemSection,
    SweepFamily,
    SweepSection,
    OracleSection,
    OutputSection,
    RunConfigFile
)
