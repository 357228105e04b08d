"""
G_zz for z-dipoles above a drift-biased graphene sheet, coupling
coefficients between two emitters, and E_z field maps.

G_zz(r, r') is the z component of the field at r radiated by a z-dipole at r'.
"""

import logging
import math
from functools import partial
from typing import Literal, Optional, Tuple

import numpy as np

from core.exceptions import CoincidentSourceError, GridExclusionError, InvalidInputError
from core.units import EPS0, HBAR, wavenumber
from models.environment import (
    CouplingMatrix,
    DipoleScale,
    EmitterGeometry,
    Environment,
    FieldGridSpec,
    FieldMap,
    Point,
)
from models.tolerances import DEFAULT_TOLERANCES, SolverTolerances
from services.dispersion_service import DispersionService
from services.sommerfeld_service import SommerfeldIntegrator
from services.worker_pool import map_ordered

logger = logging.getLogger(__name__)

ExclusionPolicy = Literal["mask", "error"]


def _principal(k: float, R: np.ndarray, dz: np.ndarray) -> np.ndarray:
    """[k^2 + d^2/dz^2] exp(ikR) / (4 pi R), differentiated analytically."""
    f = np.exp(1j * k * R) / (4.0 * math.pi * R)
    a = 1j * k - 1.0 / R
    df = f * a
    d2f = f * (a**2 + 1.0 / R**2)
    c = dz / R
    return k**2 * f + d2f * c**2 + df * (1.0 - c**2) / R


def _scattered_row(
    omega: float,
    env: Environment,
    z_plus_zp: float,
    tol: SolverTolerances,
    hints: Tuple[float, ...],
    row: Tuple[np.ndarray, np.ndarray],
) -> np.ndarray:
    rho, theta = row
    integrator = SommerfeldIntegrator(omega, env, tol, hints)
    if env.sheet.is_reciprocal:
        return integrator.bessel_path(rho, z_plus_zp)
    return integrator.double_integral(rho, theta, z_plus_zp)


class GreensService:
    """Principal and scattered G_zz and the quantities derived from it."""

    @staticmethod
    def principal_gzz(omega: float, env: Environment, r: Point, r_src: Point) -> complex:
        """
        Homogeneous-medium part in closed form, with k = k2.

        Raises:
            CoincidentSourceError: r == r_src
        """
        d = np.subtract(r, r_src)
        R = float(np.linalg.norm(d))
        if R == 0.0:
            raise CoincidentSourceError("principal G_zz is singular at the source point", point=list(r))
        return complex(_principal(wavenumber(omega, env.eps_r2), np.asarray(R), np.asarray(d[2])))

    @staticmethod
    def principal_self_imag(omega: float, env: Environment) -> float:
        """Im of the R -> 0 limit of the principal part, k^3 / (6 pi)."""
        return wavenumber(omega, env.eps_r2) ** 3 / (6.0 * math.pi)

    @staticmethod
    def scattered_gzz(
        omega: float,
        env: Environment,
        rho: float,
        theta: float,
        z_plus_zp: float,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
    ) -> complex:
        """Scattered part by the full (q, phi) double integral."""
        integrator = GreensService._integrator(omega, env, tol)
        return complex(integrator.double_integral(np.array([rho]), np.array([theta]), z_plus_zp)[0])

    @staticmethod
    def scattered_gzz_reciprocal(
        omega: float,
        env: Environment,
        rho: float,
        z_plus_zp: float,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
    ) -> complex:
        """Scattered part by the J0 path; v_d must be 0."""
        integrator = GreensService._integrator(omega, env, tol)
        return complex(integrator.bessel_path(np.array([rho]), z_plus_zp)[0])

    @staticmethod
    def gzz_total(
        omega: float,
        env: Environment,
        r: Point,
        r_src: Point,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
    ) -> complex:
        """Principal plus scattered G_zz(r, r_src), both points above the sheet."""
        if not (r[2] > 0 and r_src[2] > 0):
            raise InvalidInputError("both points must lie above the sheet")
        total = GreensService.principal_gzz(omega, env, r, r_src)
        if env.sheet is None:
            return total
        rho = math.hypot(r[0] - r_src[0], r[1] - r_src[1])
        theta = math.atan2(r[1] - r_src[1], r[0] - r_src[0])
        h = r[2] + r_src[2]
        if env.sheet.is_reciprocal:
            return total + GreensService.scattered_gzz_reciprocal(omega, env, rho, h, tol)
        return total + GreensService.scattered_gzz(omega, env, rho, theta, h, tol)

    @staticmethod
    def self_scattered(
        omega: float, env: Environment, height: float, tol: SolverTolerances = DEFAULT_TOLERANCES
    ) -> complex:
        """Scattered G_zz(r, r) for an emitter at ``height``; 0 without a sheet."""
        if env.sheet is None:
            return 0j
        if env.sheet.is_reciprocal:
            return GreensService.scattered_gzz_reciprocal(omega, env, 0.0, 2.0 * height, tol)
        return GreensService.scattered_gzz(omega, env, 0.0, 0.0, 2.0 * height, tol)

    @staticmethod
    def coupling_coefficients(
        omega: float,
        env: Environment,
        geom: EmitterGeometry,
        dipole_scale: DipoleScale = "normalized",
        dipole_moment: Optional[float] = None,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
        self_terms: Optional[Tuple[complex, complex]] = None,
    ) -> CouplingMatrix:
        """
        Gamma_ab = 2 d^2 Im G_zz(r_a, r_b) / (eps0 hbar), g_ab = d^2 Re G_zz(r_a, r_b) / (eps0 hbar).

        Args:
            omega: Angular frequency (rad/s)
            env: Environment
            geom: Emitter positions
            dipole_scale: "normalized" divides by Gamma_11; "absolute" returns rad/s
            dipole_moment: Dipole moment in C*m, required for "absolute"
            tol: Solver tolerances
            self_terms: Precomputed scattered G_zz(r1, r1) and G_zz(r2, r2)

        Returns:
            CouplingMatrix; the diagonal of g (Lamb shift) is left at 0
        """
        if dipole_scale == "absolute":
            if dipole_moment is None or not dipole_moment > 0:
                raise InvalidInputError("absolute coupling coefficients need a positive dipole moment")
            prefactor = dipole_moment**2 / (EPS0 * HBAR)
        else:
            prefactor = 1.0

        if self_terms is None:
            s1 = GreensService.self_scattered(omega, env, geom.r1[2], tol)
            s2 = s1 if geom.r2[2] == geom.r1[2] else GreensService.self_scattered(omega, env, geom.r2[2], tol)
            self_terms = (s1, s2)
        principal = GreensService.principal_self_imag(omega, env)
        g11_imag = principal + self_terms[0].imag
        g22_imag = principal + self_terms[1].imag

        g12 = GreensService.gzz_total(omega, env, geom.r1, geom.r2, tol)
        g21 = GreensService.gzz_total(omega, env, geom.r2, geom.r1, tol)

        coupling = CouplingMatrix(
            gamma=[
                [2.0 * prefactor * g11_imag, 2.0 * prefactor * g12.imag],
                [2.0 * prefactor * g21.imag, 2.0 * prefactor * g22_imag],
            ],
            g=[[0.0, prefactor * g12.real], [prefactor * g21.real, 0.0]],
            scale="absolute",
        )
        logger.debug(
            f"couplings at rho={geom.rho:.4g} m, theta={math.degrees(geom.theta):.2f} deg: "
            f"gamma12/gamma11={coupling.gamma12 / coupling.gamma11:.6g}, "
            f"gamma21/gamma11={coupling.gamma21 / coupling.gamma11:.6g}"
        )
        return coupling.normalized() if dipole_scale == "normalized" else coupling

    @staticmethod
    def field_map(
        omega: float,
        env: Environment,
        source: Point,
        grid: FieldGridSpec,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
        exclusion: ExclusionPolicy = "mask",
        threads: int = 1,
    ) -> FieldMap:
        """
        E_z = G_zz / (-i omega eps0) on the grid plane z = z_obs.

        Points within one grid cell of the source's lateral position are
        masked with NaN, or rejected when ``exclusion`` is "error".
        """
        if not source[2] > 0:
            raise InvalidInputError("the source must lie above the sheet")
        x, y = grid.x, grid.y
        X, Y = np.meshgrid(x, y)
        dx, dy = X - source[0], Y - source[1]
        rho = np.hypot(dx, dy)
        excluded_mask = rho < grid.cell
        excluded = [(int(iy), int(ix)) for iy, ix in zip(*np.nonzero(excluded_mask))]
        if excluded and exclusion == "error":
            raise GridExclusionError(
                f"{len(excluded)} grid cells lie within one cell of the source",
                excluded=[[x[ix], y[iy]] for iy, ix in excluded],
            )
        if excluded:
            logger.warning(f"masking {len(excluded)} field-map cells within one grid cell of the source")

        safe_rho = np.where(excluded_mask, grid.cell, rho)
        dz = grid.z_obs - source[2]
        R = np.sqrt(safe_rho**2 + dz**2)
        G = _principal(wavenumber(omega, env.eps_r2), R, np.full_like(R, dz))

        if env.sheet is not None:
            theta = np.arctan2(dy, dx)
            hints = DispersionService.pole_hints(omega, env, tol)
            worker = partial(_scattered_row, omega, env, grid.z_obs + source[2], tol, hints)
            rows = map_ordered(worker, [(safe_rho[i], theta[i]) for i in range(grid.ny)], threads)
            G = G + np.vstack(rows)

        values = G / (-1j * omega * EPS0)
        values[excluded_mask] = np.nan
        return FieldMap(x=x, y=y, values=values, source=source, omega=omega, excluded=excluded)

    @staticmethod
    def integrand_map(
        omega: float,
        env: Environment,
        height: float,
        q_extent: float,
        n: int,
        tol: SolverTolerances = DEFAULT_TOLERANCES,
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """|Sommerfeld integrand| over a square (q_x, q_y) window, source and observer at ``height``."""
        if n < 2 or not q_extent > 0:
            raise InvalidInputError("integrand map needs n >= 2 and a positive extent")
        integrator = SommerfeldIntegrator(omega, env, tol)
        q = np.linspace(-q_extent, q_extent, n)
        QX, QY = np.meshgrid(q, q)
        return q, q, integrator.integrand_magnitude(QX, QY, 2.0 * height)

    @staticmethod
    def _integrator(omega: float, env: Environment, tol: SolverTolerances) -> SommerfeldIntegrator:
        return SommerfeldIntegrator(omega, env, tol, DispersionService.pole_hints(omega, env, tol))

