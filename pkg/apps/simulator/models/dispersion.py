"""
Dispersion roots and equi-frequency contours.
"""

import math
from typing import List, Literal, Optional

from pydantic import BaseModel, Field

RootStatus = Literal["ok", "no_root", "no_tm"]
DopplerArg = Literal["re", "complex"]


class DispersionRoot(BaseModel):
    """Complex SPP wavenumber along direction phi."""

    q: complex = Field(..., description="In-plane wavenumber (rad/m), Re q > 0")
    phi: float = Field(..., description="Propagation angle (rad)")
    omega: float = Field(..., gt=0)
    residual: float = Field(..., ge=0, description="|Z^E(q)| at the root")
    iterations: int = Field(0, ge=0)

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.q.real


class DispersionSample(BaseModel):
    """One point of a dispersion sweep; ``root`` is None unless status is ok."""

    omega: float
    phi: float
    status: RootStatus
    root: Optional[DispersionRoot] = None


class EquiFrequencyContour(BaseModel):
    """SPP wavevectors at fixed frequency, phi strictly increasing over (-pi, pi]."""

    omega: float
    v_d: float = Field(..., description="Drift velocity (m/s)")
    samples: List[DispersionSample]

    @property
    def roots(self) -> List[DispersionRoot]:
        return [s.root for s in self.samples if s.root is not None]
