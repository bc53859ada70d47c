from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from app.models.auxiliary_models import AuxiliaryFunction, AuxiliaryKind
from app.models.barrier_models import Barrier
from app.models.config_models import ProblemSection, RunConfigFile, SweepFamily
from app.models.problem_models import Problem, ProblemInstance
from app.services.barrier_service import build_barrier
from app.services.inner_solver import InnerSolver
from app.services.mbm_service import MbmService
from app.services.oracle_service import OracleService
from app.services.problem_registry import registry_get
from app.utils.validators import ConfigurationError, InputError, PreconditionError, SolverError


def load_config(path: Union[str, Path]) -> RunConfigFile:
    """Parse and validate a JSON run config"""
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigurationError(f"Config file {config_path} does not exist", field="config")
    return RunConfigFile.model_validate_json(config_path.read_text())


def describe_error(error: Exception) -> str:
    """One-line diagnostic naming the offending field by its dotted path"""
    if isinstance(error, ValidationError):
        first = error.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "config"
        return f"{location}: {first['msg']}"
    if isinstance(error, SolverError):
        return f"{error.field}: {error.message}" if error.field else error.message
    return str(error)


def parse_params(pairs: Optional[Sequence[str]]) -> Dict[str, float]:
    """Turn ["a=9", ...] into {"a": 9.0, ...}"""
    params = {}
    for pair in pairs or []:
        key, separator, value = pair.partition("=")
        if not separator or not key:
            raise InputError(f"Expected key=value, got '{pair}'", field="param")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"Parameter {key} is not a number: '{value}'", field="param")
    return params


def parse_bounds(text: str) -> Tuple[float, float]:
    """'low:high' -> (low, high)"""
    low, separator, high = text.partition(":")
    if not separator:
        raise ValueError(f"Expected low:high, got '{text}'")
    return float(low), float(high)


def get_problem_instance(section: ProblemSection) -> ProblemInstance:
    return registry_get(section.name, section.params)


def get_barrier(problem: Problem, config: RunConfigFile) -> Barrier:
    return build_barrier(problem, config.barrier)


def get_start(config: RunConfigFile, problem: Problem) -> List[float]:
    start = config.start if config.start is not None else problem.strictly_feasible_start
    if start is None:
        raise PreconditionError(f"No start point for {problem.name}", field="start")
    return list(start)


def get_sweep_family(config: RunConfigFile) -> List[AuxiliaryFunction]:
    """Auxiliary functions of the sweep section, in member order"""
    if config.sweep is None:
        raise ConfigurationError("Config has no sweep section", field="sweep")

    family = []
    for parameter in config.sweep.member_parameters():
        if config.sweep.family == SweepFamily.SHIFTED_MAX:
            family.append(AuxiliaryFunction(kind=AuxiliaryKind.SHIFTED_MAX, omega=parameter,
                                            tie_tolerance=config.phi.tie_tolerance))
        else:
            family.append(AuxiliaryFunction(kind=AuxiliaryKind.WEIGHTED_SUM, weights=parameter))
    return family


def get_inner_solver() -> InnerSolver:
    return InnerSolver()


def get_mbm_service() -> MbmService:
    return MbmService(get_inner_solver())


def get_oracle_service() -> OracleService:
    return OracleService(get_inner_solver())
