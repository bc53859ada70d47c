"""Services for the multiobjective barrier method"""

# Services are imported directly where needed:
# from .problem_registry import registry_get
# from .inner_solver import InnerSolver
# from .mbm_service import MbmService
# from .oracle_service import OracleService

__all__ = [
    "problem_registry",
    "barrier_service",
    "auxiliary_service",
    "inner_solver",
    "mbm_service",
    "oracle_service",
]
