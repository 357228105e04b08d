"""
Graphene sheet parameters.
"""

import cmath

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.units import VF, ev_to_joule, ps_to_seconds


class GrapheneParams(BaseModel):
    """Chemical potential, scattering time and drift velocity of the sheet (SI)."""

    model_config = ConfigDict(frozen=True)

    mu_c: float = Field(..., description="Chemical potential in J", gt=0)
    tau: float = Field(..., description="Intraband scattering time in s", gt=0)
    v_d: float = Field(0.0, description="Drift velocity along +x in m/s (signed)")

    @field_validator("v_d")
    @classmethod
    def drift_below_fermi_velocity(cls, v: float) -> float:
        if abs(v) >= VF:
            raise ValueError(f"|v_d| must be below the Fermi velocity ({VF:.6g} m/s)")
        return v

    @classmethod
    def from_units(cls, mu_c_ev: float, tau_ps: float, vd_over_vf: float = 0.0) -> "GrapheneParams":
        """Build from eV, ps and a fraction of v_F."""
        return cls(mu_c=ev_to_joule(mu_c_ev), tau=ps_to_seconds(tau_ps), v_d=vd_over_vf * VF)

    def with_drift(self, v_d: float) -> "GrapheneParams":
        return self.model_copy(update={"v_d": v_d})

    @property
    def is_reciprocal(self) -> bool:
        return self.v_d == 0.0


class Conductivity(BaseModel):
    """Complex surface conductivity in siemens."""

    model_config = ConfigDict(frozen=True)

    sigma: complex = Field(..., description="Surface conductivity (S), e^{-i omega t} convention")

    @model_validator(mode="after")
    def finite(self) -> "Conductivity":
        if not cmath.isfinite(self.sigma):
            raise ValueError("conductivity is not finite")
        return self
