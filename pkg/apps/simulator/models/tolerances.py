"""
Numerical tolerances passed explicitly to the computation services.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from core.config import Settings, settings


class SolverTolerances(BaseModel):
    """Snapshot of every solver knob; kernels never read global settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    quad_epsrel: float = Field(..., gt=0, description="Relative tolerance of the q quadrature")
    quad_limit: int = Field(..., gt=0, description="Maximum q subintervals")
    phi_min_nodes: int = Field(..., ge=8, description="Starting trapezoid nodes in phi")
    phi_max_nodes: int = Field(..., ge=8, description="Trapezoid node cap in phi")
    phi_rtol: float = Field(..., gt=0, description="Relative change that stops phi doubling")
    tail_ratio: float = Field(..., gt=0, description="Allowed tail/integral ratio beyond q_max")
    tail_extensions: int = Field(..., ge=0, description="Times q_max may be doubled")
    root_xtol: float = Field(..., gt=0)
    root_maxiter: int = Field(..., gt=0)
    root_retries: int = Field(..., ge=0)
    root_perturbation: float = Field(..., gt=0)
    dynamics_rtol: float = Field(..., gt=0)
    dynamics_atol: float = Field(..., gt=0)
    t_max: float = Field(..., gt=0, description="Horizon for max_t C in 1/Gamma_11")
    n_time_points: int = Field(..., ge=3)
    golden_tol: float = Field(..., gt=0)
    steady_state_check_time: float = Field(..., gt=0)
    routing_contrast: float = Field(..., gt=1)

    @classmethod
    def from_settings(cls, source: Optional[Settings] = None, **overrides) -> "SolverTolerances":
        s = source or settings
        values = dict(
            quad_epsrel=s.QUAD_EPSREL,
            quad_limit=s.QUAD_LIMIT,
            phi_min_nodes=s.PHI_MIN_NODES,
            phi_max_nodes=s.PHI_MAX_NODES,
            phi_rtol=s.PHI_RTOL,
            tail_ratio=s.TAIL_RATIO,
            tail_extensions=s.TAIL_EXTENSIONS,
            root_xtol=s.ROOT_XTOL,
            root_maxiter=s.ROOT_MAXITER,
            root_retries=s.ROOT_RETRIES,
            root_perturbation=s.ROOT_PERTURBATION,
            dynamics_rtol=s.DYNAMICS_RTOL,
            dynamics_atol=s.DYNAMICS_ATOL,
            t_max=s.T_MAX_GAMMA11,
            n_time_points=s.N_TIME_POINTS,
            golden_tol=s.GOLDEN_TOL,
            steady_state_check_time=s.STEADY_STATE_CHECK_TIME,
            routing_contrast=s.ROUTING_CONTRAST,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


DEFAULT_TOLERANCES = SolverTolerances.from_settings()
