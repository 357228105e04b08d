"""
Sommerfeld integrals for a z-dipole above a conductive sheet.

The scattered part of G_zz is a spectral integral over the in-plane
wavenumber q (outer, adaptive Gauss-Kronrod via scipy's quad_vec) and, when
the sheet is drift-biased, over the in-plane angle phi (inner, periodic
trapezoid rule with nested doubling). The (k2^2 + d^2/dz^2) operator acting on
exp(-p2 (z+z')) reduces to a factor k2^2 + p2^2 = q^2, so no numerical
differentiation is involved.
"""

import logging
import math
from typing import Callable, List, Sequence

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import j0

from core.exceptions import IntegrationError, InvalidInputError
from core.units import EPS0, HBAR, wavenumber
from models.environment import Environment
from models.tolerances import SolverTolerances
from services.conductivity_service import ConductivityService

logger = logging.getLogger(__name__)


def decaying_branch(q, k):
    """
    p = sqrt(q^2 - k^2) with Re p >= 0; on the imaginary axis pick Im p <= 0
    so that exp(-p z) is an outgoing wave for e^{-i omega t}.
    """
    p = np.sqrt(np.asarray(q, dtype=complex) ** 2 - k**2)
    return np.where((p.real == 0) & (p.imag > 0), -p, p)


class SommerfeldIntegrator:
    """Spectral integrals of the reflected z-dipole field at one frequency."""

    def __init__(
        self,
        omega: float,
        env: Environment,
        tolerances: SolverTolerances,
        pole_hints: Sequence[float] = (),
    ):
        if env.sheet is None:
            raise InvalidInputError("scattered Green's function needs a graphene sheet")
        self.omega = omega
        self.env = env
        self.sheet = env.sheet
        self.tol = tolerances
        self.k1 = wavenumber(omega, env.eps_r1)
        self.k2 = wavenumber(omega, env.eps_r2)
        self.eps_ratio = env.eps_r1 / env.eps_r2
        self.eps2 = EPS0 * env.eps_r2
        self.pole_hints = sorted(q for q in pole_hints if q > self.k2)
        self._running_peak = 0.0

    # -- integrand pieces -------------------------------------------------

    def reflection(self, q, phi=0.0) -> np.ndarray:
        """TM reflection coefficient R_n = N^E / Z^E with sigma_d(omega, q cos phi)."""
        q = np.asarray(q, dtype=float)
        q_x = q * np.cos(phi)
        sigma = ConductivityService.doppler_sigma_array(self.omega, q_x, self.sheet)
        p1 = decaying_branch(q, self.k1)
        p2 = decaying_branch(q, self.k2)
        sheet_term = sigma * p2 * p1 / (-1j * self.omega * self.eps2)
        numerator = self.eps_ratio * p2 - p1 + sheet_term
        denominator = self.eps_ratio * p2 + p1 + sheet_term
        with np.errstate(invalid="ignore"):
            r = numerator / denominator
        # sigma -> infinity limit on Doppler / interband singular nodes
        return np.where(np.isnan(sigma), 1.0 + 0j, r)

    def spectral_weight(self, q, z_plus_zp: float) -> np.ndarray:
        """q^2 * exp(-p2 (z+z')) / (2 p2) * q, the Jacobian included."""
        p2 = decaying_branch(q, self.k2)
        return np.asarray(q) ** 3 * np.exp(-p2 * z_plus_zp) / (2.0 * p2)

    # -- truncation -------------------------------------------------------

    def q_max(self, z_plus_zp: float) -> float:
        largest_pole = max(self.pole_hints, default=self.k2)
        return max(30.0 / z_plus_zp, 10.0 * largest_pole, 2.0 * self.k2)

    def breakpoints(self, q_max: float) -> List[float]:
        points = {self.k2, self.k1}
        for q in self.pole_hints:
            points.update((q, 2.0 * q))
        v_d = abs(self.sheet.v_d)
        if v_d > 0:
            # sigma_d is singular where the shifted frequency or the interband
            # threshold is hit along phi = 0 or pi
            threshold = 2.0 * self.sheet.mu_c / HBAR
            points.update((self.omega / v_d, abs(threshold - self.omega) / v_d, (threshold + self.omega) / v_d))
        return sorted(p for p in points if 0.0 < p < q_max)

    # -- public integrals -------------------------------------------------

    def bessel_path(self, rho: np.ndarray, z_plus_zp: float) -> np.ndarray:
        """
        (1/2pi) int_0^inf R_n q^2 exp(-p2 (z+z')) J0(q rho) / (2 p2) q dq.

        Only valid when R_n does not depend on phi (no drift).
        """
        if not self.sheet.is_reciprocal:
            raise InvalidInputError("the Bessel path requires v_d = 0")
        self._check_height(z_plus_zp)
        rho = np.atleast_1d(np.asarray(rho, dtype=float))

        def integrand(q: float) -> np.ndarray:
            value = self.reflection(q) * self.spectral_weight(q, z_plus_zp) * j0(q * rho) / (2.0 * math.pi)
            return value

        return self._integrate(integrand, z_plus_zp, rho.size)

    def double_integral(self, rho: np.ndarray, theta: np.ndarray, z_plus_zp: float) -> np.ndarray:
        """
        (1/(2pi)^2) int_0^inf int_{-pi}^{pi} R_n q^2 exp(-p2 (z+z'))
        exp(i q rho cos(phi - theta)) / (2 p2) q dphi dq.
        """
        self._check_height(z_plus_zp)
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        theta = np.broadcast_to(np.atleast_1d(np.asarray(theta, dtype=float)), rho.shape)

        def integrand(q: float) -> np.ndarray:
            weight = complex(self.spectral_weight(q, z_plus_zp))
            angular = self._phi_integral(q, weight, rho, theta)
            value = weight * angular / (2.0 * math.pi) ** 2
            self._running_peak = max(self._running_peak, float(np.max(np.abs(value))))
            return value

        return self._integrate(integrand, z_plus_zp, rho.size)

    def integrand_magnitude(self, q_x: np.ndarray, q_y: np.ndarray, z_plus_zp: float) -> np.ndarray:
        """|R_n q^2 exp(-p2 (z+z')) / (2 p2) q| on a (q_x, q_y) grid."""
        q = np.hypot(q_x, q_y)
        phi = np.arctan2(q_y, q_x)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = np.abs(self.reflection(q, phi) * self.spectral_weight(q, z_plus_zp))
        return np.where(np.isfinite(value), value, np.nan)

    # -- internals --------------------------------------------------------

    def _phi_integral(self, q: float, weight: complex, rho: np.ndarray, theta: np.ndarray) -> np.ndarray:
        """Periodic trapezoid rule over phi, doubling the node count until stable."""
        n = self.tol.phi_min_nodes
        phi = -math.pi + 2.0 * math.pi * np.arange(n) / n
        total = self._phi_sum(q, phi, rho, theta)
        estimate = total * (2.0 * math.pi / n)
        while True:
            midpoints = phi + math.pi / n
            total = total + self._phi_sum(q, midpoints, rho, theta)
            phi = np.sort(np.concatenate([phi, midpoints]))
            n *= 2
            refined = total * (2.0 * math.pi / n)
            change = float(np.max(np.abs(refined - estimate)))
            scale = max(float(np.max(np.abs(refined))), self._running_peak / max(abs(weight), 1e-300) * 1e-3)
            if change <= self.tol.phi_rtol * scale:
                logger.debug(f"phi rule converged with {n} nodes at q={q:.6g}")
                return refined
            if n >= self.tol.phi_max_nodes:
                raise IntegrationError(
                    f"phi integral not converged with {n} nodes at q={q:.6g} rad/m",
                    achieved_error=change * abs(weight),
                    q=q,
                )
            estimate = refined

    def _phi_sum(self, q: float, phi: np.ndarray, rho: np.ndarray, theta: np.ndarray) -> np.ndarray:
        r = self.reflection(q, phi)
        phase = np.exp(1j * q * rho[:, None] * np.cos(phi[None, :] - theta[:, None]))
        return phase @ r

    def _integrate(self, integrand: Callable[[float], np.ndarray], z_plus_zp: float, size: int) -> np.ndarray:
        self._running_peak = 0.0

        def stacked(q: float) -> np.ndarray:
            value = integrand(q)
            return np.concatenate([value.real, value.imag])

        q_max = self.q_max(z_plus_zp)
        result = self._segment(stacked, 0.0, q_max, self.breakpoints(q_max))
        for _ in range(self.tol.tail_extensions):
            tail = float(np.max(np.abs(stacked(q_max)))) / z_plus_zp
            if tail <= self.tol.tail_ratio * float(np.max(np.abs(result))):
                break
            logger.debug(f"extending q truncation beyond {q_max:.6g} rad/m (tail estimate {tail:.3g})")
            result = result + self._segment(stacked, q_max, 2.0 * q_max, [])
            q_max *= 2.0
        else:
            tail = float(np.max(np.abs(stacked(q_max)))) / z_plus_zp
            if tail > self.tol.tail_ratio * float(np.max(np.abs(result))):
                logger.warning(f"q tail bound not met at q_max={q_max:.6g} rad/m (tail estimate {tail:.3g})")
        return result[:size] + 1j * result[size:]

    def _segment(self, stacked: Callable[[float], np.ndarray], a: float, b: float, points: List[float]) -> np.ndarray:
        value, error, info = quad_vec(
            stacked,
            a,
            b,
            epsrel=self.tol.quad_epsrel,
            norm="max",
            limit=self.tol.quad_limit,
            points=points or None,
            full_output=True,
        )
        if not info.success:
            raise IntegrationError(
                f"q quadrature on [{a:.6g}, {b:.6g}] failed: {getattr(info, 'message', info.status)}",
                achieved_error=float(error),
            )
        logger.debug(f"q quadrature on [{a:.6g}, {b:.6g}]: {info.neval} evaluations, error {error:.3g}")
        return value

    def _check_height(self, z_plus_zp: float) -> None:
        if not z_plus_zp > 0:
            raise InvalidInputError(f"z + z' must be positive, got {z_plus_zp}")
