from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import settings
from app.models.auxiliary_models import AuxiliaryFunction
from app.models.barrier_models import BarrierSpec
from app.models.problem_models import Box
from app.models.solver_models import MbmConfig


class ProblemSection(BaseModel):
    name: str = Field(..., description="Registry identifier (ex51, ex52, disk2d)")
    params: Dict[str, float] = Field(default_factory=dict, description="Instance parameters, e.g. {\"a\": 9}")


class SweepFamily(str, Enum):
    SHIFTED_MAX = "shifted_max"
    WEIGHTED_SUM = "weighted_sum"


class SweepSection(BaseModel):
    """
    One-parameter family of auxiliary functions

    Member i uses `base` with component `coordinate` replaced by the i-th
    value. With `complement` (biobjective weighted sums) the other weight is
    set to 1 - value.
    """
    family: SweepFamily = SweepFamily.SHIFTED_MAX
    coordinate: int = Field(0, ge=0, description="0-based component of omega or w that varies")
    base: List[float] = Field(..., min_length=1, description="Parameter vector shared by all members")
    values: Optional[List[float]] = Field(None, description="Explicit member values")
    start: Optional[float] = None
    stop: Optional[float] = None
    step: Optional[float] = Field(None, gt=0)
    complement: bool = False
    boxes: Optional[List[Box]] = Field(None, description="Per-member local boxes")
    starts: Optional[List[List[float]]] = Field(None, description="Per-member start points")

    @model_validator(mode="after")
    def validate_members(self) -> "SweepSection":
        if self.coordinate >= len(self.base):
            raise ValueError(f"coordinate {self.coordinate} out of range for base of length {len(self.base)}")
        if self.values is None and None in (self.start, self.stop, self.step):
            raise ValueError("Sweep needs either values or start, stop and step")
        if self.complement and len(self.base) != 2:
            raise ValueError("complement is defined for two objectives only")

        count = len(self.member_values())
        if count == 0:
            raise ValueError("Sweep grid is empty")
        for name in ("boxes", "starts"):
            entries = getattr(self, name)
            if entries is not None and len(entries) != count:
                raise ValueError(f"{name} must have one entry per member ({count})")
        return self

    def member_values(self) -> List[float]:
        if self.values is not None:
            return list(self.values)
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        if count <= 0:
            return []
        return [float(v) for v in np.round(self.start + self.step * np.arange(count), 12)]

    def member_parameters(self) -> List[List[float]]:
        members = []
        for value in self.member_values():
            parameter = list(self.base)
            parameter[self.coordinate] = value
            if self.complement:
                parameter[1 - self.coordinate] = 1.0 - value
            members.append(parameter)
        return members


class OracleSection(BaseModel):
    """Grid used to classify the final points of run and sweep"""
    bounds: List[Tuple[float, float]] = Field(..., min_length=1)
    counts: List[int] = Field(..., min_length=1)
    tol: float = Field(1e-3, ge=0)
    cap: int = Field(default_factory=lambda: settings.grid_point_cap, ge=1)


class OutputSection(BaseModel):
    trace: Optional[str] = Field(None, description="TraceFile path for run")
    front: Optional[str] = Field(None, description="FrontFile path for sweep")


class RunConfigFile(MbmConfig):
    """
    JSON run configuration: MbmConfig fields plus problem, barrier, phi,
    start point and the optional sweep, oracle and output sections
    """
    model_config = ConfigDict(extra="forbid")

    problem: ProblemSection
    barrier: BarrierSpec = Field(default_factory=BarrierSpec)
    phi: AuxiliaryFunction
    start: Optional[List[float]] = Field(None, description="Defaults to the problem's strictly feasible start")
    sweep: Optional[SweepSection] = None
    oracle: Optional[OracleSection] = None
    output: OutputSection = Field(default_factory=OutputSection)

    def mbm_config(self) -> MbmConfig:
        """The outer-loop part of the file"""
        return MbmConfig.model_validate(self.model_dump(include=set(MbmConfig.model_fields)))
