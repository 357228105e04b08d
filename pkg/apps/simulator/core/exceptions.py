"""
Exception hierarchy for the simulator.

Every error carries a stable machine-readable ``code`` and a human readable
``detail``; the CLI turns them into JSON on stderr.
"""

from typing import Any, Dict, Optional


class DriftlinkError(Exception):
    """Base class for all simulator errors."""

    code = "driftlink_error"

    def __init__(self, detail: str, **extra: Any):
        super().__init__(detail)
        self.detail = detail
        self.extra = extra

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "detail": self.detail}
        payload.update(self.extra)
        return payload


class InvalidInputError(DriftlinkError, ValueError):
    code = "invalid_input"


class ConfigError(DriftlinkError):
    code = "config_error"

    def __init__(self, detail: str, key_path: Optional[str] = None, **extra: Any):
        super().__init__(detail, key_path=key_path, **extra)
        self.key_path = key_path


class ConductivityDomainError(DriftlinkError):
    """Evaluation at the interband threshold hbar*omega = 2*mu_c."""

    code = "conductivity_domain"


class DopplerSingularityError(DriftlinkError):
    """The Doppler-shifted frequency omega - q_x*v_d vanishes."""

    code = "doppler_singularity"


class CoincidentSourceError(DriftlinkError):
    code = "coincident_source"


class IntegrationError(DriftlinkError):
    """Quadrature did not converge; ``achieved_error`` is the last estimate."""

    code = "integration_failure"

    def __init__(self, detail: str, achieved_error: float, **extra: Any):
        super().__init__(detail, achieved_error=achieved_error, **extra)
        self.achieved_error = achieved_error


class RootNotFoundError(DriftlinkError):
    code = "root_not_found"

    def __init__(self, detail: str, last_iterate: complex, **extra: Any):
        super().__init__(
            detail,
            last_iterate=[float(last_iterate.real), float(last_iterate.imag)],
            **extra,
        )
        self.last_iterate = last_iterate


class NoSurfaceWaveError(DriftlinkError):
    """Root collapsed onto the light line: no bound SPP in this direction."""

    code = "no_spp"


class NoTMSupportError(DriftlinkError):
    code = "no_tm_support"


class DynamicsIntegrationError(DriftlinkError):
    code = "dynamics_integration"

    def __init__(self, detail: str, achieved_error: Optional[float] = None, **extra: Any):
        super().__init__(detail, achieved_error=achieved_error, **extra)
        self.achieved_error = achieved_error


class NonUniqueSteadyStateError(DriftlinkError):
    code = "non_unique_steady_state"


class NumericalInstabilityError(DriftlinkError):
    code = "numerical_instability"


class GridExclusionError(DriftlinkError):
    code = "grid_too_close_to_source"
