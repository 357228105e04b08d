"""
Two-qubit master equation with asymmetric cross-coupling and coherent drive.

Density matrices use the basis |1>=|g1 g2>, |2>=|e1 e2>, |3>=|g1 e2>,
|4>=|e1 g2> and are column-stacked, so vec(A rho B) = kron(B.T, A) vec(rho).
Time is in units of 1/Gamma_11 throughout.
"""

import logging
from typing import List, Literal, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from core.exceptions import DynamicsIntegrationError, InvalidInputError, NonUniqueSteadyStateError
from models.dynamics import DensityMatrix, DynamicsParams, Liouvillian
from models.tolerances import DEFAULT_TOLERANCES, SolverTolerances

logger = logging.getLogger(__name__)

EvolveMethod = Literal["expm", "rk"]

# Lowering operators in the basis above
SIGMA1 = np.zeros((4, 4), dtype=complex)
SIGMA1[0, 3] = SIGMA1[2, 1] = 1.0
SIGMA2 = np.zeros((4, 4), dtype=complex)
SIGMA2[0, 2] = SIGMA2[3, 1] = 1.0

IDENTITY = np.eye(4, dtype=complex)
NULL_SPACE_GAP = 1e6
# singular values below this fraction of the largest count as zero
NULL_SPACE_FLOOR = 1e-12
NEGATIVITY_TOLERANCE = 1e-8


def spre(a: np.ndarray) -> np.ndarray:
    return np.kron(IDENTITY, a)


def spost(b: np.ndarray) -> np.ndarray:
    return np.kron(b.T, IDENTITY)


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a rho b."""
    return np.kron(b.T, a)


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape((4, 4), order="F")


class DynamicsService:
    """Liouvillian assembly, time evolution and steady states."""

    @staticmethod
    def build_liouvillian(p: DynamicsParams) -> Liouvillian:
        """Every term of the zero-detuning master equation, cross terms kept as grouped."""
        s1, s2 = SIGMA1, SIGMA2
        s1d, s2d = s1.conj().T, s2.conj().T

        L = np.zeros((16, 16), dtype=complex)
        for omega, s, sd in ((p.omega1_drive, s1, s1d), (p.omega2_drive, s2, s2d)):
            x = s + sd
            L += 1j * omega * (spre(x) - spost(x))

        for gamma, s, sd in ((p.gamma11, s1, s1d), (p.gamma22, s2, s2d)):
            n = sd @ s
            L += gamma / 2.0 * (2.0 * sandwich(s, sd) - spre(n) - spost(n))

        a21 = p.gamma21 / 2.0 + 1j * p.g21
        b21 = p.gamma21 / 2.0 - 1j * p.g21
        a12 = p.gamma12 / 2.0 + 1j * p.g12
        b12 = p.gamma12 / 2.0 - 1j * p.g12
        L += a21 * (sandwich(s2, s1d) - spost(s1d @ s2))
        L += b21 * (sandwich(s1, s2d) - spre(s2d @ s1))
        L += a12 * (sandwich(s1, s2d) - spost(s2d @ s1))
        L += b12 * (sandwich(s2, s1d) - spre(s1d @ s2))
        return Liouvillian(matrix=L, params=p)

    @staticmethod
    def initial_state() -> DensityMatrix:
        """|e1 g2><e1 g2|: only the first qubit excited."""
        rho = np.zeros((4, 4), dtype=complex)
        rho[3, 3] = 1.0
        return DensityMatrix(data=rho)

    @staticmethod
    def evolve(
        rho0: DensityMatrix,
        L: Liouvillian,
        t_grid: Sequence[float],
        method: EvolveMethod = "expm",
        tol: SolverTolerances = DEFAULT_TOLERANCES,
    ) -> List[DensityMatrix]:
        """
        Trajectory on ``t_grid`` (nonnegative, ascending, units of 1/Gamma_11).

        "expm" applies a scaling-and-squaring matrix exponential per time;
        "rk" integrates with DOP853 at the configured tolerances.
        """
        t = np.asarray(t_grid, dtype=float)
        if t.ndim != 1 or t.size == 0 or np.any(t < 0) or np.any(np.diff(t) < 0):
            raise InvalidInputError("time grid must be a nonempty, nonnegative, ascending sequence")
        v0 = vec(rho0.data)

        if method == "expm":
            states = [v0 if ti == 0.0 else expm(L.matrix * ti) @ v0 for ti in t]
        elif method == "rk":
            states = DynamicsService._integrate(L.matrix, v0, t, tol)
        else:
            raise InvalidInputError(f"unknown evolution method {method!r}")

        trajectory = [DensityMatrix(data=unvec(v)) for v in states]
        DynamicsService._monitor(trajectory, L.params)
        return trajectory

    @staticmethod
    def steady_state(L: Liouvillian, tol: SolverTolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
        """
        Null vector of L by SVD, normalized to unit trace.

        Raises:
            NonUniqueSteadyStateError: the second smallest singular value is
                within the gap of the smallest or below the noise floor
        """
        _, s, vh = np.linalg.svd(L.matrix)
        if s[-2] <= max(NULL_SPACE_GAP * s[-1], NULL_SPACE_FLOOR * s[0]):
            raise NonUniqueSteadyStateError(
                "Liouvillian null space is not one-dimensional",
                smallest_singular_values=[float(v) for v in s[-4:]],
            )
        rho = unvec(vh[-1].conj())
        rho = rho / np.trace(rho)
        rho = 0.5 * (rho + rho.conj().T)
        logger.debug(f"steady state from SVD, singular gap {s[-2] / max(s[-1], 1e-300):.3g}")

        check = DynamicsService.evolve(
            DynamicsService.initial_state(), L, [tol.steady_state_check_time]
        )[-1].data
        deviation = float(np.linalg.norm(check - rho))
        if deviation > 1e-6:
            logger.warning(
                f"steady state differs from the evolved state at t={tol.steady_state_check_time} "
                f"by {deviation:.3g} (Frobenius)"
            )
        return DensityMatrix(data=rho)

    @staticmethod
    def _integrate(L: np.ndarray, v0: np.ndarray, t: np.ndarray, tol: SolverTolerances) -> List[np.ndarray]:
        if t[-1] == 0.0:
            return [v0 for _ in t]
        sol = solve_ivp(
            lambda _, y: L @ y,
            (0.0, float(t[-1])),
            v0,
            method="DOP853",
            t_eval=t,
            rtol=tol.dynamics_rtol,
            atol=tol.dynamics_atol,
        )
        if not sol.success:
            raise DynamicsIntegrationError(f"master equation integration failed: {sol.message}")
        return [sol.y[:, i] for i in range(t.size)]

    @staticmethod
    def _monitor(trajectory: List[DensityMatrix], params: DynamicsParams) -> None:
        worst = min(rho.min_eigenvalue for rho in trajectory)
        if worst < -NEGATIVITY_TOLERANCE:
            kind = "reciprocal" if params.is_reciprocal else "nonreciprocal"
            logger.warning(f"{kind} trajectory reaches a negative eigenvalue {worst:.3g}")
        drift = max(abs(rho.trace - 1.0) for rho in trajectory)
        if drift > 1e-9:
            logger.warning(f"trajectory trace drifts from 1 by {drift:.3g}")
