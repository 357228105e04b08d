"""
TM surface-wave dispersion of a drift-biased graphene sheet.

Roots of Z^E(q) = (eps1/eps2) p2 + p1 + sigma_d p2 p1 / (-i omega eps2) are
found in the complex q plane with a complex secant iteration
(scipy.optimize.newton without a derivative).
"""

import cmath
import logging
import math
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import newton

from core.exceptions import (
    ConductivityDomainError,
    DopplerSingularityError,
    DriftlinkError,
    InvalidInputError,
    NoSurfaceWaveError,
    NoTMSupportError,
    RootNotFoundError,
)
from core.units import EPS0, wavenumber
from models.dispersion import DispersionRoot, DispersionSample, DopplerArg, EquiFrequencyContour
from models.environment import Environment
from models.tolerances import DEFAULT_TOLERANCES, SolverTolerances
from services.conductivity_service import ConductivityService
from services.sommerfeld_service import decaying_branch

logger = logging.getLogger(__name__)

# Roots with |q| below this multiple of k2 have collapsed onto the light line
LIGHT_LINE_MARGIN = 1.001
# |Z(q)| / |Z(1.01 q)| accepted at a root
RESIDUAL_RATIO = 1e-6
# newton rejects tol <= 0; rtol alone sets convergence
ABSOLUTE_XTOL = 1e-300
SEED_REFINEMENTS = 20
# q samples used to decide between "no_tm" and "no_root"
TM_SCAN_POINTS = 400


class DispersionService:
    """Complex SPP wavenumbers along arbitrary in-plane directions."""

    @staticmethod
    def zE(q: complex, phi: float, omega: float, env: Environment, doppler_arg: DopplerArg = "re") -> complex:
        """
        Denominator of the TM reflection coefficient.

        The Doppler shift uses q_x = Re(q) cos(phi) unless ``doppler_arg`` is
        "complex", in which case the complex q is used as is.
        """
        DispersionService._sheet(env)
        k1 = wavenumber(omega, env.eps_r1)
        k2 = wavenumber(omega, env.eps_r2)
        sigma = DispersionService._sigma(q, phi, omega, env, doppler_arg)
        p1 = complex(decaying_branch(q, k1))
        p2 = complex(decaying_branch(q, k2))
        eps2 = EPS0 * env.eps_r2
        return env.eps_r1 / env.eps_r2 * p2 + p1 + sigma * p2 * p1 / (-1j * omega * eps2)

    @staticmethod
    def quasi_static_seed(phi: float, omega: float, env: Environment, doppler_arg: DopplerArg = "re") -> complex:
        """
        q = i omega (eps1 + eps2) / sigma_d, iterated so that sigma_d is taken at
        the estimate's own q_x.

        Raises:
            NoTMSupportError: Im sigma_d <= 0 at the estimate
        """
        sheet = DispersionService._sheet(env)
        eps_sum = EPS0 * (env.eps_r1 + env.eps_r2)
        sigma = ConductivityService.local_conductivity(omega, sheet).sigma
        q = 1j * omega * eps_sum / sigma
        if not sheet.is_reciprocal:
            for _ in range(SEED_REFINEMENTS):
                try:
                    sigma = DispersionService._sigma(q, phi, omega, env, doppler_arg)
                except DriftlinkError:
                    break
                updated = 1j * omega * eps_sum / sigma
                if abs(updated - q) <= 1e-6 * abs(q):
                    q = updated
                    break
                q = updated
        if not (sigma.imag > 0 and q.real > 0):
            raise NoTMSupportError(
                f"Im sigma_d <= 0 at the quasi-static estimate for phi={math.degrees(phi):.2f} deg",
                phi=phi,
            )
        return q

    @staticmethod
    def solve_spp(
        phi: float,
        omega: float,
        env: Environment,
        seed: Optional[complex] = None,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
        doppler_arg: DopplerArg = "re",
    ) -> DispersionRoot:
        """
        Solve Z^E(q) = 0 along direction ``phi``.

        Args:
            phi: Propagation angle (rad) from +x
            omega: Angular frequency (rad/s)
            env: Environment with a graphene sheet
            seed: Starting point; defaults to the quasi-static estimate
            tol: Solver tolerances (xtol, maxiter, retries, perturbation)
            doppler_arg: "re" or "complex" Doppler argument

        Returns:
            DispersionRoot with Re q > 0

        Raises:
            NoTMSupportError: the seed's q_x does not support TM waves
            NoSurfaceWaveError: every attempt collapsed onto the light line
            RootNotFoundError: no convergence after all retries
        """
        sheet = DispersionService._sheet(env)
        if seed is None:
            seed = DispersionService.quasi_static_seed(phi, omega, env, doppler_arg)
        elif not ConductivityService.supports_tm(omega, seed.real * math.cos(phi), sheet):
            raise NoTMSupportError(f"seed q={seed:.6g} does not support TM waves", phi=phi)

        k2 = wavenumber(omega, env.eps_r2)
        p = tol.root_perturbation
        seeds = [seed] + [seed * f for f in (1 + p, 1 - p, 1 + 1j * p, 1 - 1j * p)][: tol.root_retries]

        def residual(q: complex) -> complex:
            return DispersionService.zE(q, phi, omega, env, doppler_arg)

        last = seed
        collapsed = False
        for attempt, start in enumerate(seeds):
            try:
                q, info = newton(
                    residual,
                    start,
                    x1=start * (1 + 1e-4),
                    tol=ABSOLUTE_XTOL,
                    rtol=tol.root_xtol,
                    maxiter=tol.root_maxiter,
                    full_output=True,
                    disp=False,
                )
            except (DopplerSingularityError, ConductivityDomainError, ZeroDivisionError, OverflowError) as exc:
                logger.debug(f"secant attempt {attempt} at phi={phi:.4f} aborted: {exc}")
                continue
            q = complex(q)
            last = q
            if not (info.converged and cmath.isfinite(q)):
                logger.debug(f"secant attempt {attempt} at phi={phi:.4f} did not converge ({info.flag})")
                continue
            if abs(q) <= LIGHT_LINE_MARGIN * k2:
                collapsed = True
                logger.debug(f"root at phi={phi:.4f} collapsed onto the light line")
                continue
            if q.real <= 0:
                continue
            try:
                value = abs(residual(q))
                scale = abs(residual(1.01 * q))
            except (DopplerSingularityError, ConductivityDomainError):
                continue
            if value > RESIDUAL_RATIO * scale:
                logger.debug(f"spurious root at phi={phi:.4f}: |Z|={value:.3g}, local scale {scale:.3g}")
                continue
            logger.debug(f"SPP root q={q:.8g} at phi={phi:.4f} after {info.iterations} iterations")
            return DispersionRoot(q=q, phi=phi, omega=omega, residual=value, iterations=info.iterations)

        if collapsed:
            raise NoSurfaceWaveError(
                f"root collapses onto the light line at phi={math.degrees(phi):.2f} deg", phi=phi
            )
        raise RootNotFoundError(
            f"dispersion root not found at phi={math.degrees(phi):.2f} deg after {len(seeds)} attempts",
            last_iterate=last,
            phi=phi,
        )

    @staticmethod
    def efc(
        omega: float,
        env: Environment,
        n_phi: int,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
        doppler_arg: DopplerArg = "re",
    ) -> EquiFrequencyContour:
        """Equi-frequency contour over phi in (-pi, pi], seeded by continuation."""
        if n_phi < 8:
            raise InvalidInputError(f"n_phi must be at least 8, got {n_phi}")
        sheet = DispersionService._sheet(env)
        phis = -math.pi + 2.0 * math.pi * np.arange(1, n_phi + 1) / n_phi
        samples: List[DispersionSample] = []
        previous: Optional[complex] = None
        for phi in phis:
            sample = DispersionService._sample(float(phi), omega, env, previous, tol, doppler_arg)
            previous = sample.root.q if sample.root else previous
            samples.append(sample)
        missing = sum(1 for s in samples if s.status != "ok")
        if missing:
            logger.info(f"EFC at {omega:.6g} rad/s: {missing}/{n_phi} directions without a root")
        return EquiFrequencyContour(omega=omega, v_d=sheet.v_d, samples=samples)

    @staticmethod
    def dispersion_curve(
        phi: float,
        env: Environment,
        omega_range: Tuple[float, float],
        n_points: int,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
        doppler_arg: DopplerArg = "re",
    ) -> List[DispersionSample]:
        """Frequency sweep along one direction; failed points keep their status."""
        lo, hi = omega_range
        if not (0 < lo < hi) or n_points < 2:
            raise InvalidInputError(f"invalid frequency range {omega_range} with {n_points} points")
        samples: List[DispersionSample] = []
        previous: Optional[complex] = None
        for omega in np.linspace(lo, hi, n_points):
            sample = DispersionService._sample(phi, float(omega), env, previous, tol, doppler_arg)
            # continuation: scale the last root with frequency
            previous = sample.root.q * (1.0 + (hi - lo) / (n_points - 1) / omega) if sample.root else None
            samples.append(sample)
        return samples

    @staticmethod
    def spp_wavelength(
        omega: float,
        env: Environment,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
        doppler_arg: DopplerArg = "re",
    ) -> Tuple[float, float]:
        """SPP wavelength 2 pi / Re q along the drift direction, and that direction."""
        sheet = DispersionService._sheet(env)
        phi = math.pi if sheet.v_d < 0 else 0.0
        root = DispersionService.solve_spp(phi, omega, env, tol=tol, doppler_arg=doppler_arg)
        return root.wavelength, phi

    @staticmethod
    def pole_hints(omega: float, env: Environment, tol: SolverTolerances = DEFAULT_TOLERANCES) -> Tuple[float, ...]:
        """Re q of the SPP pole along a few directions, for quadrature breakpoints."""
        return _pole_hints(omega, env, tol)

    # -- helpers ----------------------------------------------------------

    @staticmethod
    def _sheet(env: Environment):
        if env.sheet is None:
            raise InvalidInputError("dispersion needs a graphene sheet")
        return env.sheet

    @staticmethod
    def _sigma(q: complex, phi: float, omega: float, env: Environment, doppler_arg: DopplerArg) -> complex:
        if doppler_arg == "complex":
            q_x = q * math.cos(phi)
            sigma = complex(ConductivityService.doppler_sigma_array(omega, q_x, env.sheet))
            if not cmath.isfinite(sigma):
                raise DopplerSingularityError(f"sigma_d is singular at complex q_x={q_x:.6g}", q_x=q_x.real)
            return sigma
        return ConductivityService.doppler_conductivity(omega, q.real * math.cos(phi), env.sheet).sigma

    @staticmethod
    def _sample(
        phi: float,
        omega: float,
        env: Environment,
        previous: Optional[complex],
        tol: SolverTolerances,
        doppler_arg: DopplerArg,
    ) -> DispersionSample:
        seeds = [previous, None] if previous is not None else [None]
        for seed in seeds:
            try:
                root = DispersionService.solve_spp(phi, omega, env, seed, tol, doppler_arg)
                return DispersionSample(omega=omega, phi=phi, status="ok", root=root)
            except DriftlinkError as exc:
                logger.debug(f"no root at phi={phi:.4f}, omega={omega:.6g} with seed {seed}: {exc.detail}")
        status = "no_root" if DispersionService._tm_supported_somewhere(phi, omega, env) else "no_tm"
        return DispersionSample(omega=omega, phi=phi, status=status)

    @staticmethod
    def _tm_supported_somewhere(phi: float, omega: float, env: Environment) -> bool:
        """Scan q from the light line out to ten times the local quasi-static estimate."""
        k2 = wavenumber(omega, env.eps_r2)
        sigma = ConductivityService.local_conductivity(omega, env.sheet).sigma
        q_far = max(10.0 * abs(omega * EPS0 * (env.eps_r1 + env.eps_r2) / sigma), 20.0 * k2)
        q = np.linspace(LIGHT_LINE_MARGIN * k2, q_far, TM_SCAN_POINTS)
        sigma_d = ConductivityService.doppler_sigma_array(omega, q * math.cos(phi), env.sheet)
        return bool(np.any(np.nan_to_num(sigma_d.imag, nan=-1.0) > 0))


@lru_cache(maxsize=256)
def _pole_hints(omega: float, env: Environment, tol: SolverTolerances) -> Tuple[float, ...]:
    if env.sheet is None:
        return ()
    directions = (0.0,) if env.sheet.is_reciprocal else (0.0, math.pi / 2, math.pi)
    hints = []
    for phi in directions:
        try:
            hints.append(DispersionService.solve_spp(phi, omega, env, tol=tol).q.real)
        except DriftlinkError as exc:
            logger.debug(f"no pole hint at phi={phi:.4f}: {exc.detail}")
    return tuple(sorted(set(hints)))
