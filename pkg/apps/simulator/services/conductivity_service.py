"""
Graphene surface conductivity.

Local zero-temperature Kubo conductivity (Drude intraband term plus the
interband step/log term) and its drift-biased, Doppler-shifted form
sigma_d = omega / (omega - q_x v_d) * sigma(omega - q_x v_d).
"""

import logging
import math
from typing import Union

import numpy as np

from core.exceptions import ConductivityDomainError, DopplerSingularityError, InvalidInputError
from core.units import E_CHARGE, HBAR, SIGMA_MIN
from models.material import Conductivity, GrapheneParams

logger = logging.getLogger(__name__)

# Relative guard band around hbar*omega = 2*mu_c
INTERBAND_GUARD = 1e-9
# |omega - q_x v_d| below this fraction of omega is a Doppler singularity
DOPPLER_FLOOR = 1e-12

ArrayLike = Union[float, complex, np.ndarray]


def _kubo(omega: ArrayLike, params: GrapheneParams) -> ArrayLike:
    """Both terms of the low-temperature Kubo formula, evaluated as written."""
    mu = params.mu_c
    intraband = 1j * E_CHARGE**2 * mu / (math.pi * HBAR**2 * (omega + 1j / params.tau))
    energy = HBAR * omega
    step = np.heaviside(np.real(energy) - 2.0 * mu, 0.5)
    log_term = np.log(np.abs((energy - 2.0 * mu) / (energy + 2.0 * mu)))
    interband = E_CHARGE**2 / (4.0 * HBAR) * (step + 1j / math.pi * log_term)
    return intraband + interband


def _near_interband_threshold(omega: ArrayLike, params: GrapheneParams) -> ArrayLike:
    return np.abs(HBAR * np.abs(omega) - 2.0 * params.mu_c) <= INTERBAND_GUARD * 2.0 * params.mu_c


class ConductivityService:
    """Surface conductivity of (drift-biased) graphene."""

    @staticmethod
    def local_conductivity(omega: float, params: GrapheneParams) -> Conductivity:
        """
        Local Kubo conductivity sigma(omega).

        Args:
            omega: Angular frequency (rad/s), positive
            params: Graphene parameters

        Returns:
            Complex conductivity in siemens

        Raises:
            InvalidInputError: omega is not positive
            ConductivityDomainError: hbar*omega sits on the interband threshold 2*mu_c
        """
        if not omega > 0:
            raise InvalidInputError(f"omega must be positive, got {omega}")
        return Conductivity(sigma=ConductivityService._shifted_sigma(omega, params))

    @staticmethod
    def doppler_conductivity(omega: float, q_x: float, params: GrapheneParams) -> Conductivity:
        """
        Drift-biased conductivity sigma_d(v_d, q_x, omega).

        Depends on q_x and v_d only through their product, so
        sigma_d(v_d, q_x) == sigma_d(-v_d, -q_x) exactly.
        """
        if not omega > 0:
            raise InvalidInputError(f"omega must be positive, got {omega}")
        if params.v_d == 0.0:
            return ConductivityService.local_conductivity(omega, params)
        shifted = omega - q_x * params.v_d
        if abs(shifted) < DOPPLER_FLOOR * omega:
            raise DopplerSingularityError(
                f"Doppler-shifted frequency vanishes at q_x={q_x:.6g} rad/m",
                q_x=q_x,
                v_d=params.v_d,
            )
        sigma = omega / shifted * ConductivityService._shifted_sigma(shifted, params)
        return Conductivity(sigma=sigma)

    @staticmethod
    def supports_tm(omega: float, q_x: float, params: GrapheneParams) -> bool:
        """TM surface waves need Im sigma_d > 0 (e^{-i omega t} convention)."""
        return ConductivityService.doppler_conductivity(omega, q_x, params).sigma.imag > 0

    @staticmethod
    def normalized(sigma: complex) -> complex:
        """sigma / sigma_min with sigma_min = pi e^2 / (2 h)."""
        return sigma / SIGMA_MIN

    @staticmethod
    def doppler_sigma_array(omega: float, q_x: ArrayLike, params: GrapheneParams) -> np.ndarray:
        """
        Vectorized sigma_d for quadrature kernels.

        Never raises: nodes on the Doppler or interband singularity come back
        as NaN and the caller substitutes the sigma -> infinity limit.
        ``q_x`` may be complex (used by the complex Doppler-argument variant).
        """
        q_x = np.asarray(q_x)
        if params.v_d == 0.0:
            sigma = complex(_kubo(omega, params))
            return np.full(q_x.shape, sigma, dtype=complex)
        shifted = omega - q_x * params.v_d
        singular = (np.abs(shifted) < DOPPLER_FLOOR * omega) | _near_interband_threshold(shifted, params)
        with np.errstate(divide="ignore", invalid="ignore"):
            sigma = omega / shifted * _kubo(shifted, params)
        return np.where(singular, np.nan + 0j, sigma).astype(complex)

    @staticmethod
    def _shifted_sigma(omega: complex, params: GrapheneParams) -> complex:
        if _near_interband_threshold(omega, params):
            raise ConductivityDomainError(
                f"hbar*omega is on the interband threshold 2*mu_c (omega={omega:.6g} rad/s)"
            )
        return complex(_kubo(omega, params))
