"""
Layered environment, emitter geometry, coupling coefficients and field maps.
"""

import math
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.material import GrapheneParams

Point = Tuple[float, float, float]


class Environment(BaseModel):
    """Two lossless claddings with an optional graphene sheet at z=0."""

    model_config = ConfigDict(frozen=True)

    eps_r1: float = Field(4.0, description="Relative permittivity for z<0", ge=1.0)
    eps_r2: float = Field(4.0, description="Relative permittivity for z>0", ge=1.0)
    sheet: Optional[GrapheneParams] = Field(None, description="Graphene sheet; None is the homogeneous baseline")


class EmitterGeometry(BaseModel):
    """Positions of two z-polarized emitters, both above the interface."""

    model_config = ConfigDict(frozen=True)

    r1: Point = Field(..., description="Position of QB1 (m)")
    r2: Point = Field(..., description="Position of QB2 (m)")

    @field_validator("r1", "r2")
    @classmethod
    def above_interface(cls, r: Point) -> Point:
        if not r[2] > 0:
            raise ValueError("emitters must sit in region 2 (z > 0)")
        return r

    @classmethod
    def from_polar(cls, rho: float, theta: float, height: float) -> "EmitterGeometry":
        """QB1 at the origin, QB2 at (rho cos theta, rho sin theta) and both at ``height``."""
        return cls(
            r1=(0.0, 0.0, height),
            r2=(rho * math.cos(theta), rho * math.sin(theta), height),
        )

    @property
    def rho(self) -> float:
        return math.hypot(self.r2[0] - self.r1[0], self.r2[1] - self.r1[1])

    @property
    def theta(self) -> float:
        return math.atan2(self.r2[1] - self.r1[1], self.r2[0] - self.r1[0])


DipoleScale = Literal["normalized", "absolute"]


class CouplingMatrix(BaseModel):
    """Gamma_ab and g_ab. Diagonal g (Lamb shift) is not computed and stays 0."""

    gamma: List[List[float]] = Field(..., description="2x2 dissipative rates Gamma_ab")
    g: List[List[float]] = Field(..., description="2x2 coherent couplings g_ab")
    scale: DipoleScale = Field("normalized", description="normalized: units of Gamma_11; absolute: rad/s")

    @model_validator(mode="after")
    def two_by_two(self) -> "CouplingMatrix":
        for name in ("gamma", "g"):
            m = getattr(self, name)
            if len(m) != 2 or any(len(row) != 2 for row in m):
                raise ValueError(f"{name} must be 2x2")
        if not (self.gamma[0][0] > 0 and self.gamma[1][1] > 0):
            raise ValueError("self decay rates must be positive")
        return self

    @property
    def gamma11(self) -> float:
        return self.gamma[0][0]

    @property
    def gamma22(self) -> float:
        return self.gamma[1][1]

    @property
    def gamma12(self) -> float:
        return self.gamma[0][1]

    @property
    def gamma21(self) -> float:
        return self.gamma[1][0]

    @property
    def g12(self) -> float:
        return self.g[0][1]

    @property
    def g21(self) -> float:
        return self.g[1][0]

    def normalized(self) -> "CouplingMatrix":
        """Divide everything by Gamma_11 so the dipole moment cancels."""
        norm = self.gamma11
        return CouplingMatrix(
            gamma=[[v / norm for v in row] for row in self.gamma],
            g=[[v / norm for v in row] for row in self.g],
            scale="normalized",
        )


class FieldGridSpec(BaseModel):
    """Rectangular observation grid in the plane z = z_obs."""

    x_min: float
    x_max: float
    nx: int = Field(..., ge=2)
    y_min: float
    y_max: float
    ny: int = Field(..., ge=2)
    z_obs: float = Field(..., gt=0, description="Observation height (m)")

    @model_validator(mode="after")
    def ordered(self) -> "FieldGridSpec":
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid bounds must be increasing")
        return self

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def cell(self) -> float:
        return max((self.x_max - self.x_min) / (self.nx - 1), (self.y_max - self.y_min) / (self.ny - 1))


class FieldMap(BaseModel):
    """E_z on a grid; cells within one grid cell of the source are NaN."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: np.ndarray = Field(..., description="x coordinates (m)")
    y: np.ndarray = Field(..., description="y coordinates (m)")
    values: np.ndarray = Field(..., description="Complex E_z, shape (ny, nx)")
    source: Point = Field(..., description="Source position (m)")
    omega: float
    excluded: List[Tuple[int, int]] = Field(default_factory=list, description="(iy, ix) cells left out")
