"""
JSON run configuration.

Every physical quantity carries its unit in the key name. Unknown keys are
rejected everywhere.
"""

from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.units import um_to_m
from models.dispersion import DopplerArg
from models.environment import Environment
from models.experiment import DriveProfile, ExperimentSpec, SweepKind, VacuumBaseline
from models.material import GrapheneParams
from models.tolerances import SolverTolerances

Command = Literal["conductivity", "dispersion", "fieldmap", "entangle"]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GrapheneConfig(StrictModel):
    mu_c_ev: float = Field(0.1, gt=0)
    tau_ps: float = Field(0.35, gt=0)
    vd_over_vf: float = Field(0.0, gt=-1.0, lt=1.0)

    def to_params(self) -> GrapheneParams:
        return GrapheneParams.from_units(self.mu_c_ev, self.tau_ps, self.vd_over_vf)


class EnvironmentConfig(StrictModel):
    eps_r1: float = Field(4.0, ge=1.0)
    eps_r2: float = Field(4.0, ge=1.0)
    graphene: Optional[GrapheneConfig] = None

    def to_environment(self) -> Environment:
        sheet = self.graphene.to_params() if self.graphene else None
        return Environment(eps_r1=self.eps_r1, eps_r2=self.eps_r2, sheet=sheet)


class ToleranceConfig(StrictModel):
    """Optional overrides of the settings-derived solver tolerances."""

    quad_epsrel: Optional[float] = None
    quad_limit: Optional[int] = None
    phi_min_nodes: Optional[int] = None
    phi_max_nodes: Optional[int] = None
    phi_rtol: Optional[float] = None
    tail_ratio: Optional[float] = None
    tail_extensions: Optional[int] = None
    root_xtol: Optional[float] = None
    root_maxiter: Optional[int] = None
    root_retries: Optional[int] = None
    root_perturbation: Optional[float] = None
    dynamics_rtol: Optional[float] = None
    dynamics_atol: Optional[float] = None
    t_max: Optional[float] = None
    n_time_points: Optional[int] = None
    golden_tol: Optional[float] = None
    steady_state_check_time: Optional[float] = None
    routing_contrast: Optional[float] = None

    def to_tolerances(self) -> SolverTolerances:
        return SolverTolerances.from_settings(**self.model_dump())


class LinearGrid(StrictModel):
    start: float
    stop: float
    n: int = Field(..., ge=1)

    @model_validator(mode="after")
    def ordered(self) -> "LinearGrid":
        if self.n > 1 and not self.stop > self.start:
            raise ValueError("stop must exceed start")
        return self

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.n)]


class ConductivityConfig(StrictModel):
    frequency_thz: List[float] = Field(default_factory=lambda: [15.0], min_length=1)
    qx_per_m: LinearGrid = Field(default_factory=lambda: LinearGrid(start=-1e8, stop=1e8, n=201))
    local_sweep_thz: Optional[LinearGrid] = Field(None, description="Extra q_x = 0 frequency sweep")


class DispersionConfig(StrictModel):
    frequency_thz: LinearGrid = Field(default_factory=lambda: LinearGrid(start=1.0, stop=30.0, n=59))
    directions_deg: List[float] = Field(default_factory=lambda: [0.0, 180.0], min_length=1)
    efc_frequency_thz: Optional[float] = Field(15.0, gt=0)
    n_phi: int = Field(72, ge=8)
    integrand_heights_over_lambda: List[float] = Field(default_factory=list)
    integrand_extent_over_q: float = Field(3.0, gt=0, description="Window half-width in units of Re q_spp")
    integrand_points: int = Field(101, ge=2)


class FieldMapConfig(StrictModel):
    frequency_thz: float = Field(15.0, gt=0)
    height_over_lambda: float = Field(1.0 / 3.0, gt=0)
    extent_over_lambda: float = Field(4.0, gt=0)
    n: int = Field(101, ge=2)
    exclusion: Literal["mask", "error"] = "mask"


class EntangleConfig(StrictModel):
    frequency_thz: float = Field(15.0, gt=0)
    sweep: SweepKind
    grid: Optional[List[float]] = None
    grid_range: Optional[LinearGrid] = None
    height_over_lambda: float = Field(1.0 / 3.0, gt=0)
    rho_over_lambda: float = Field(2.0, gt=0)
    theta_deg: Optional[float] = None
    angle_grid_deg: Optional[List[float]] = None
    omega1_drive: float = Field(0.0, ge=0)
    omega2_drive: float = Field(0.0, ge=0)
    baseline: VacuumBaseline = "free_space"
    wavelength_um: Optional[float] = Field(None, gt=0)
    time_unit: Literal["gamma11", "ps"] = "gamma11"
    dipole_moment_cm: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def one_grid(self) -> "EntangleConfig":
        if self.grid is not None and self.grid_range is not None:
            raise ValueError("give either grid or grid_range, not both")
        if self.time_unit == "ps" and self.dipole_moment_cm is None:
            raise ValueError("time_unit 'ps' needs dipole_moment_cm")
        return self

    def grid_values(self) -> List[float]:
        if self.grid is not None:
            return list(self.grid)
        return self.grid_range.values() if self.grid_range else []


class RunConfig(StrictModel):
    """One CLI run; only the section of the invoked subcommand is used."""

    environment: EnvironmentConfig = EnvironmentConfig()
    conductivity: Optional[ConductivityConfig] = None
    dispersion: Optional[DispersionConfig] = None
    fieldmap: Optional[FieldMapConfig] = None
    entangle: Optional[EntangleConfig] = None
    tolerances: ToleranceConfig = ToleranceConfig()
    doppler_arg: DopplerArg = "re"

    def experiment_spec(self, threads: int) -> ExperimentSpec:
        """The entangle section as a pipeline spec; a no-sheet free-space baseline uses eps_r = 1."""
        e = self.entangle
        env = self.environment.to_environment()
        if env.sheet is None and e.baseline == "free_space":
            env = Environment(eps_r1=1.0, eps_r2=1.0)
        tol = self.tolerances.to_tolerances()
        grid = e.grid_values()
        if not grid and e.sweep == "transient":
            grid = [float(t) for t in np.linspace(0.0, tol.t_max, tol.n_time_points)]
        extra = {"angle_grid_deg": e.angle_grid_deg} if e.angle_grid_deg is not None else {}
        return ExperimentSpec(
            environment=env,
            frequency_thz=e.frequency_thz,
            kind=e.sweep,
            grid=grid,
            height_over_lambda=e.height_over_lambda,
            rho_over_lambda=e.rho_over_lambda,
            theta_deg=e.theta_deg,
            drive=DriveProfile(omega1=e.omega1_drive, omega2=e.omega2_drive),
            wavelength_m=um_to_m(e.wavelength_um) if e.wavelength_um else None,
            baseline=e.baseline,
            doppler_arg=self.doppler_arg,
            dipole_moment_cm=e.dipole_moment_cm,
            tolerances=tol,
            threads=threads,
            **extra,
        )
