"""
Wootters concurrence of two-qubit states in the |gg>, |ee>, |ge>, |eg> basis.
"""

import logging
from typing import Union

import numpy as np

from core.exceptions import NumericalInstabilityError
from models.dynamics import Concurrence, DensityMatrix

logger = logging.getLogger(__name__)

# sigma_y (x) sigma_y, permuted from the standard |gg>,|ge>,|eg>,|ee> order
SIGMA_YY = np.zeros((4, 4), dtype=complex)
SIGMA_YY[0, 1] = SIGMA_YY[1, 0] = -1.0
SIGMA_YY[2, 3] = SIGMA_YY[3, 2] = 1.0

CLEANUP_WARN = 1e-8
CLEANUP_FAIL = 1e-6
# eigenvalues of rho*rho_tilde below this fraction of the largest are zero
ZERO_FLOOR = 1e-12

StateLike = Union[DensityMatrix, np.ndarray]


def _matrix(rho: StateLike) -> np.ndarray:
    return rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


class EntanglementService:
    """Concurrence and the spin-flipped state it is built from."""

    @staticmethod
    def spin_flip(rho: StateLike) -> np.ndarray:
        """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
        return SIGMA_YY @ _matrix(rho).conj() @ SIGMA_YY

    @staticmethod
    def concurrence(rho: StateLike) -> Concurrence:
        """
        C = max(0, sqrt(u1) - sqrt(u2) - sqrt(u3) - sqrt(u4)) with u the
        descending eigenvalues of rho * spin_flip(rho).

        Raises:
            NumericalInstabilityError: an eigenvalue has an imaginary part or a
                negative real part beyond 1e-6
        """
        m = _matrix(rho)
        u = np.linalg.eigvals(m @ EntanglementService.spin_flip(m))
        imag = float(np.max(np.abs(u.imag)))
        negativity = float(max(0.0, -np.min(u.real)))
        cleanup = max(imag, negativity)
        if cleanup > CLEANUP_FAIL:
            raise NumericalInstabilityError(
                f"rho * rho_tilde has eigenvalues off the nonnegative axis by {cleanup:.3g}",
                eigenvalues=[[float(v.real), float(v.imag)] for v in u],
            )
        if cleanup > CLEANUP_WARN:
            logger.warning(f"concurrence cleanup discarded {cleanup:.3g}")

        u = np.clip(u.real, 0.0, None)
        u[u < ZERO_FLOOR * u.max(initial=0.0)] = 0.0
        roots = np.sqrt(np.sort(u)[::-1])
        value = float(np.clip(roots[0] - roots[1:].sum(), 0.0, 1.0))
        return Concurrence(value=value, cleanup=cleanup)

    @staticmethod
    def pure_state_concurrence(psi: np.ndarray) -> float:
        """|<psi| sigma_y x sigma_y |psi*>| for a normalized state vector."""
        psi = np.asarray(psi, dtype=complex)
        return float(abs(psi.conj() @ SIGMA_YY @ psi.conj()))
