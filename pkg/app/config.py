from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    # App settings
    app_name: str = "Multiobjective Barrier Method Solver"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "INFO"

    # Inner solver defaults
    inner_max_iterations: int = 5000
    inner_step_tolerance: float = 1e-10
    inner_value_tolerance: float = 1e-12
    armijo_parameter: float = 1e-4
    backtracking_shrink: float = 0.5
    fraction_to_boundary: float = 0.99
    initial_step: float = 1.0
    simplex_step: float = 0.05
    max_backtracks: int = 60

    # Outer loop defaults
    outer_iterations: int = 50
    outer_tolerance: float = 1e-8
    tau_stop: float = 1e-8

    # Unboundedness detection
    unbounded_value: float = -1e12
    unbounded_norm: float = 1e8

    # Tie and boundary tolerances
    evaluation_tie_tolerance: float = 1e-12
    weight_tie_tolerance: float = 1e-6
    boundary_saturation: float = 1e-300
    boundary_proximity: float = 1e-12

    # Central differences: h = fd_step * max(1, |x|_inf)
    fd_step: float = 1e-6

    # Barrier / auxiliary defaults
    log_barrier_margin: float = 1.0
    logsumexp_beta: float = 100.0

    # Oracle settings
    grid_point_cap: int = 1_000_000
    oracle_chunk_size: int = 512
    weighting_tau: float = 1e-8
    weighting_budget: int = 5000

    # Sweep concurrency (None -> available parallelism)
    default_workers: Optional[int] = None

    model_config = SettingsConfigDict(env_prefix="MBM_", env_file=".env", case_sensitive=False)


# Global settings instance
settings = Settings()
