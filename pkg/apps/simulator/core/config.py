"""
Configuration settings for the Driftlink simulator.
"""

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # App settings
    APP_NAME: str = "Driftlink"
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "INFO"

    # Worker pool (0 = all hardware threads)
    DEFAULT_THREADS: int = 0

    # Sommerfeld quadrature
    QUAD_EPSREL: float = 1e-8
    QUAD_LIMIT: int = 20000
    PHI_MIN_NODES: int = 64
    PHI_MAX_NODES: int = 16384
    PHI_RTOL: float = 1e-8
    TAIL_RATIO: float = 1e-12
    TAIL_EXTENSIONS: int = 4

    # Dispersion root finding
    ROOT_XTOL: float = 1e-12
    ROOT_MAXITER: int = 200
    ROOT_RETRIES: int = 3
    ROOT_PERTURBATION: float = 0.05

    # Master equation
    DYNAMICS_RTOL: float = 1e-9
    DYNAMICS_ATOL: float = 1e-12
    T_MAX_GAMMA11: float = 20.0
    N_TIME_POINTS: int = 400
    GOLDEN_TOL: float = 1e-4
    STEADY_STATE_CHECK_TIME: float = 100.0

    # Entanglement routing
    ROUTING_CONTRAST: float = 5.0

    class Config:
        env_file = "driftlink.env"
        case_sensitive = True


settings = Settings()
