"""
Two-qubit density matrices, master-equation parameters and Liouvillians.

Basis ordering is |1>=|g1 g2>, |2>=|e1 e2>, |3>=|g1 e2>, |4>=|e1 g2>.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.environment import CouplingMatrix


class DensityMatrix(BaseModel):
    """4x4 complex two-qubit state in the fixed basis above."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    data: np.ndarray = Field(..., description="4x4 complex matrix")

    @field_validator("data")
    @classmethod
    def four_by_four(cls, value: np.ndarray) -> np.ndarray:
        arr = np.asarray(value, dtype=complex)
        if arr.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got {arr.shape}")
        return arr

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.data))

    @property
    def hermiticity_error(self) -> float:
        norm = np.linalg.norm(self.data)
        return float(np.linalg.norm(self.data - self.data.conj().T) / norm) if norm else 0.0

    @property
    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.data + self.data.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def population(self, index: int) -> float:
        return float(self.data[index, index].real)


class DynamicsParams(BaseModel):
    """Coefficients of the reduced master equation in units of Gamma_11."""

    model_config = ConfigDict(frozen=True)

    gamma11: float = Field(1.0, gt=0)
    gamma22: float = Field(1.0, gt=0)
    gamma12: float = 0.0
    gamma21: float = 0.0
    g12: float = 0.0
    g21: float = 0.0
    omega1_drive: float = Field(0.0, description="Rabi rate at QB1 (real)")
    omega2_drive: float = Field(0.0, description="Rabi rate at QB2 (real)")

    @classmethod
    def from_coupling(
        cls, coupling: CouplingMatrix, omega1_drive: float = 0.0, omega2_drive: float = 0.0
    ) -> "DynamicsParams":
        c = coupling.normalized()
        return cls(
            gamma11=c.gamma11,
            gamma22=c.gamma22,
            gamma12=c.gamma12,
            gamma21=c.gamma21,
            g12=c.g12,
            g21=c.g21,
            omega1_drive=omega1_drive,
            omega2_drive=omega2_drive,
        )

    @property
    def is_reciprocal(self) -> bool:
        return self.gamma12 == self.gamma21 and self.g12 == self.g21


class Liouvillian(BaseModel):
    """16x16 generator acting on column-stacked density matrices."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    matrix: np.ndarray
    params: DynamicsParams


class Concurrence(BaseModel):
    """Wootters concurrence after numerical cleanup."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0, le=1.0)
    cleanup: float = Field(0.0, ge=0.0, description="Largest imaginary part or negativity discarded")
