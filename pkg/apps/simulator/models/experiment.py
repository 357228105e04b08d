"""
Experiment specifications and sweep results for the entanglement pipeline.
"""

from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.dispersion import DopplerArg
from models.dynamics import DensityMatrix
from models.environment import Environment
from models.tolerances import DEFAULT_TOLERANCES, SolverTolerances

SweepKind = Literal["angle", "distance", "transient", "drive_scan", "routing"]
CaseLabel = Literal["vacuum", "graphene_r", "graphene_nr"]
VacuumBaseline = Literal["free_space", "host"]


class DriveProfile(BaseModel):
    """Real Rabi rates in units of Gamma_11."""

    model_config = ConfigDict(frozen=True)

    omega1: float = Field(0.0, ge=0)
    omega2: float = Field(0.0, ge=0)


class ExperimentSpec(BaseModel):
    """One pipeline run; lengths are in units of the case's normalization wavelength."""

    model_config = ConfigDict(frozen=True)

    environment: Environment
    frequency_thz: float = Field(..., gt=0)
    kind: SweepKind
    grid: List[float] = Field(
        default_factory=list,
        description="theta in degrees (angle), rho/lambda (distance), t*Gamma_11 (transient), Omega_1 (drive_scan)",
    )
    height_over_lambda: float = Field(..., gt=0)
    rho_over_lambda: float = Field(2.0, gt=0)
    theta_deg: Optional[float] = Field(None, description="Fixed receiver angle; None picks the argmax of an angle sweep")
    angle_grid_deg: List[float] = Field(default_factory=lambda: [float(a) for a in range(0, 181, 5)])
    drive: DriveProfile = DriveProfile()
    wavelength_m: Optional[float] = Field(None, gt=0, description="Override of the resolved normalization wavelength")
    baseline: VacuumBaseline = Field("free_space", description="Meaning of the no-sheet case, recorded in metadata")
    doppler_arg: DopplerArg = "re"
    dipole_moment_cm: Optional[float] = Field(None, gt=0)
    tolerances: SolverTolerances = DEFAULT_TOLERANCES
    threads: int = Field(1, ge=0)

    @model_validator(mode="after")
    def grid_matches_kind(self) -> "ExperimentSpec":
        if self.kind != "routing" and not self.grid:
            raise ValueError(f"sweep kind {self.kind!r} needs a nonempty grid")
        if self.kind == "angle" and any(not 0.0 <= a <= 180.0 for a in self.grid):
            raise ValueError("angle grid must lie within [0, 180] degrees")
        if self.kind in ("distance", "drive_scan") and any(v <= 0 for v in self.grid):
            raise ValueError(f"{self.kind} grid values must be positive")
        if self.kind == "transient" and (any(t < 0 for t in self.grid) or self.grid != sorted(self.grid)):
            raise ValueError("transient grid must be nonnegative and ascending")
        return self

    @property
    def case(self) -> CaseLabel:
        sheet = self.environment.sheet
        if sheet is None:
            return "vacuum"
        return "graphene_r" if sheet.is_reciprocal else "graphene_nr"


class SweepRow(BaseModel):
    """Normalized couplings and concurrence at one sweep point."""

    swept: float
    pair: str = "QB1-QB2"
    gamma12: float
    gamma21: float
    g12: float
    g21: float
    concurrence: float


class SweepResult(BaseModel):
    """Rows of one sweep plus everything needed to reproduce it."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: SweepKind
    swept_name: str = Field(..., description="CSV column name of the swept variable")
    metadata: Dict[str, Any] = Field(default_factory=dict)
    rows: List[SweepRow] = Field(default_factory=list)
    trajectory: Optional[List[DensityMatrix]] = Field(None, description="States of a transient run")
    times: Optional[np.ndarray] = Field(None, description="Time grid of ``trajectory`` or of the driven transient")
    drive_transient: Optional[List[float]] = Field(None, description="C(t) at the best drive")

    @property
    def argmax(self) -> SweepRow:
        return max(self.rows, key=lambda r: r.concurrence)
