"""
Entanglement pipeline: Green's function couplings -> master equation -> concurrence.

Every sweep point is an independent work item; results keep sweep order.
"""

import logging
import math
from functools import partial
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from core.exceptions import InvalidInputError
from core.units import VF, thz_to_omega, vacuum_wavelength
from models.dynamics import DynamicsParams
from models.environment import CouplingMatrix, EmitterGeometry, Environment
from models.experiment import ExperimentSpec, SweepResult, SweepRow
from models.tolerances import SolverTolerances
from services.dispersion_service import DispersionService
from services.dynamics_service import DynamicsService
from services.entanglement_service import EntanglementService
from services.greens_service import GreensService
from services.worker_pool import map_ordered

logger = logging.getLogger(__name__)


def max_concurrence(params: DynamicsParams, tol: SolverTolerances) -> Tuple[float, float]:
    """
    max_t C(t) over [0, t_max]: uniform grid, then golden-section refinement
    around the best grid point.

    Returns:
        (C_max, t at the maximum)
    """
    L = DynamicsService.build_liouvillian(params)
    rho0 = DynamicsService.initial_state()
    t = np.linspace(0.0, tol.t_max, tol.n_time_points)
    c = np.array([EntanglementService.concurrence(rho).value for rho in DynamicsService.evolve(rho0, L, t)])
    i = int(np.argmax(c))
    best_c, best_t = float(c[i]), float(t[i])
    if 0 < i < t.size - 1 and c[i] > c[i - 1] and c[i] > c[i + 1]:

        def negative_c(ti: float) -> float:
            rho = DynamicsService.evolve(rho0, L, [max(ti, 0.0)])[0]
            return -EntanglementService.concurrence(rho).value

        res = minimize_scalar(
            negative_c,
            bracket=(t[i - 1], t[i], t[i + 1]),
            method="golden",
            tol=tol.golden_tol,
        )
        if -res.fun > best_c:
            best_c, best_t = float(-res.fun), float(res.x)
    return best_c, best_t


def _evaluate_point(
    omega: float,
    env: Environment,
    height: float,
    tol: SolverTolerances,
    self_terms: Tuple[complex, complex],
    point: Tuple[float, float],
) -> Tuple[CouplingMatrix, float]:
    """Couplings and max_t C for QB2 at lateral (rho, theta) from QB1."""
    rho, theta = point
    geom = EmitterGeometry.from_polar(rho, theta, height)
    coupling = GreensService.coupling_coefficients(omega, env, geom, tol=tol, self_terms=self_terms)
    c_max, _ = max_concurrence(DynamicsParams.from_coupling(coupling), tol)
    return coupling, c_max


def _row(swept: float, coupling: CouplingMatrix, concurrence: float, pair: str = "QB1-QB2") -> SweepRow:
    return SweepRow(
        swept=swept,
        pair=pair,
        gamma12=coupling.gamma12,
        gamma21=coupling.gamma21,
        g12=coupling.g12,
        g21=coupling.g21,
        concurrence=concurrence,
    )


class ExperimentService:
    """Angle, distance, transient, drive and routing experiments."""

    @staticmethod
    def resolve_wavelength(spec: ExperimentSpec) -> Tuple[float, Optional[float]]:
        """
        Normalization wavelength of the spec's case and, for graphene, the
        direction it was measured along.
        """
        if spec.wavelength_m is not None:
            return spec.wavelength_m, None
        if spec.environment.sheet is None:
            return vacuum_wavelength(spec.frequency_thz), None
        return DispersionService.spp_wavelength(
            thz_to_omega(spec.frequency_thz), spec.environment, spec.tolerances, spec.doppler_arg
        )

    @staticmethod
    def sweep_angle(spec: ExperimentSpec) -> SweepResult:
        """max_t C versus receiver angle at rho = rho_over_lambda * lambda."""
        grid = spec.grid if spec.kind == "angle" else spec.angle_grid_deg
        ctx = ExperimentService._context(spec)
        rho = spec.rho_over_lambda * ctx["wavelength_m"]
        logger.info(f"angle sweep ({spec.case}): {len(grid)} angles at rho={rho:.6g} m")
        results = ExperimentService._run_points(spec, ctx, [(rho, math.radians(a)) for a in grid])
        rows = [_row(a, coupling, c) for a, (coupling, c) in zip(grid, results)]
        result = SweepResult(kind="angle", swept_name="theta_deg", metadata=ctx, rows=rows)
        result.metadata["argmax_theta_deg"] = result.argmax.swept
        return result

    @staticmethod
    def sweep_distance(spec: ExperimentSpec) -> SweepResult:
        """max_t C versus separation at the fixed (or best) angle."""
        theta_deg = ExperimentService._receiver_angle(spec)
        ctx = ExperimentService._context(spec)
        lam = ctx["wavelength_m"]
        logger.info(f"distance sweep ({spec.case}): {len(spec.grid)} separations at theta={theta_deg:.2f} deg")
        points = [(r * lam, math.radians(theta_deg)) for r in spec.grid]
        results = ExperimentService._run_points(spec, ctx, points)
        rows = [_row(r, coupling, c) for r, (coupling, c) in zip(spec.grid, results)]
        ctx.update(theta_deg=theta_deg, rho_m=[p[0] for p in points])
        return SweepResult(kind="distance", swept_name="rho_over_lambda", metadata=ctx, rows=rows)

    @staticmethod
    def run_transient(spec: ExperimentSpec) -> SweepResult:
        """C(t) without drive at the best angle and rho = rho_over_lambda * lambda."""
        if spec.drive.omega1 or spec.drive.omega2:
            raise InvalidInputError("the transient experiment runs without drive")
        theta_deg = ExperimentService._receiver_angle(spec)
        coupling, ctx = ExperimentService._coupling_at(spec, theta_deg)
        L = DynamicsService.build_liouvillian(DynamicsParams.from_coupling(coupling))
        t = np.asarray(spec.grid, dtype=float)
        states = DynamicsService.evolve(DynamicsService.initial_state(), L, t)
        rows = [_row(ti, coupling, EntanglementService.concurrence(rho).value) for ti, rho in zip(t, states)]
        return SweepResult(kind="transient", swept_name="t_gamma11", metadata=ctx, rows=rows, trajectory=states, times=t)

    @staticmethod
    def drive_scan(spec: ExperimentSpec) -> SweepResult:
        """
        Steady-state concurrence versus Omega_1 (Omega_2 = 0), then the driven
        transient at the best Omega_1.
        """
        if spec.drive.omega2:
            raise InvalidInputError("drive_scan keeps Omega_2 = 0")
        theta_deg = ExperimentService._receiver_angle(spec)
        coupling, ctx = ExperimentService._coupling_at(spec, theta_deg)
        tol = spec.tolerances
        rows = []
        for omega1 in spec.grid:
            params = DynamicsParams.from_coupling(coupling, omega1_drive=omega1)
            rho = DynamicsService.steady_state(DynamicsService.build_liouvillian(params), tol)
            rows.append(_row(omega1, coupling, EntanglementService.concurrence(rho).value))
        result = SweepResult(kind="drive_scan", swept_name="omega1_over_gamma11", metadata=ctx, rows=rows)
        best = result.argmax
        result.metadata["argmax_omega1_over_gamma11"] = best.swept
        logger.info(f"steady-state concurrence peaks at Omega_1={best.swept:.4g} Gamma_11 (C={best.concurrence:.4g})")

        L = DynamicsService.build_liouvillian(DynamicsParams.from_coupling(coupling, omega1_drive=best.swept))
        t = np.linspace(0.0, tol.t_max, tol.n_time_points)
        states = DynamicsService.evolve(DynamicsService.initial_state(), L, t)
        result.times = t
        result.drive_transient = [EntanglementService.concurrence(rho).value for rho in states]
        return result

    @staticmethod
    def run_routing(spec: ExperimentSpec) -> SweepResult:
        """
        QB2 at theta = 180 deg and QB3 at theta = 0 deg around QB1; pairwise
        max_t C for drift -|v_d| and +|v_d|.
        """
        sheet = spec.environment.sheet
        if sheet is None or sheet.is_reciprocal:
            raise InvalidInputError("routing needs a drift-biased graphene sheet")
        speed = abs(sheet.v_d)
        base = ExperimentService._context(spec)
        rho = spec.rho_over_lambda * base["wavelength_m"]
        rows: List[SweepRow] = []
        ratios: Dict[str, Any] = {}
        holds = True
        for sign in (-1.0, 1.0):
            env = spec.environment.model_copy(update={"sheet": sheet.with_drift(sign * speed)})
            drifted = spec.model_copy(update={"environment": env})
            qb2, qb3 = ExperimentService._run_points(drifted, base, [(rho, math.pi), (rho, 0.0)])
            rows.append(_row(sign * speed / VF, qb2[0], qb2[1], pair="QB1-QB2"))
            rows.append(_row(sign * speed / VF, qb3[0], qb3[1], pair="QB1-QB3"))
            ratio = qb2[1] / qb3[1] if qb3[1] > 0 else None
            key = "negative_drift" if sign < 0 else "positive_drift"
            ratios[key] = ratio
            contrast = spec.tolerances.routing_contrast
            if sign < 0:
                holds &= qb2[1] > 0 and (ratio is None or ratio > contrast)
            else:
                holds &= ratio is not None and ratio < 1.0 / contrast
        base.update(contrast_ratios=ratios, routing_holds=bool(holds))
        logger.info(f"routing contrast ratios {ratios}; routing {'holds' if holds else 'does not hold'}")
        return SweepResult(kind="routing", swept_name="vd_over_vf", metadata=base, rows=rows)

    @staticmethod
    def run(spec: ExperimentSpec) -> SweepResult:
        runners = {
            "angle": ExperimentService.sweep_angle,
            "distance": ExperimentService.sweep_distance,
            "transient": ExperimentService.run_transient,
            "drive_scan": ExperimentService.drive_scan,
            "routing": ExperimentService.run_routing,
        }
        return runners[spec.kind](spec)

    # -- helpers ----------------------------------------------------------

    @staticmethod
    def _context(spec: ExperimentSpec) -> Dict[str, Any]:
        """Resolved parameters recorded with every result."""
        wavelength, direction = ExperimentService.resolve_wavelength(spec)
        height = spec.height_over_lambda * wavelength
        logger.info(f"{spec.case}: normalization wavelength {wavelength:.6g} m, height {height:.6g} m")
        sheet = spec.environment.sheet
        return {
            "case": spec.case,
            "frequency_thz": spec.frequency_thz,
            "wavelength_m": wavelength,
            "wavelength_direction_deg": math.degrees(direction) if direction is not None else None,
            "height_m": height,
            "rho_m": spec.rho_over_lambda * wavelength,
            "vd_over_vf": sheet.v_d / VF if sheet else None,
            "vacuum_baseline": spec.baseline if sheet is None else None,
            "eps_r1": spec.environment.eps_r1,
            "eps_r2": spec.environment.eps_r2,
            "doppler_arg": spec.doppler_arg,
        }

    @staticmethod
    def _run_points(
        spec: ExperimentSpec, ctx: Dict[str, Any], points: Sequence[Tuple[float, float]]
    ) -> List[Tuple[CouplingMatrix, float]]:
        omega = thz_to_omega(spec.frequency_thz)
        height = ctx["height_m"]
        s = GreensService.self_scattered(omega, spec.environment, height, spec.tolerances)
        worker = partial(_evaluate_point, omega, spec.environment, height, spec.tolerances, (s, s))
        return map_ordered(worker, points, spec.threads)

    @staticmethod
    def _receiver_angle(spec: ExperimentSpec) -> float:
        if spec.theta_deg is not None:
            return spec.theta_deg
        angle = ExperimentService.sweep_angle(spec.model_copy(update={"kind": "angle", "grid": spec.angle_grid_deg}))
        logger.info(f"using best receiver angle {angle.argmax.swept:.2f} deg")
        return angle.argmax.swept

    @staticmethod
    def _coupling_at(spec: ExperimentSpec, theta_deg: float) -> Tuple[CouplingMatrix, Dict[str, Any]]:
        ctx = ExperimentService._context(spec)
        omega = thz_to_omega(spec.frequency_thz)
        geom = EmitterGeometry.from_polar(ctx["rho_m"], math.radians(theta_deg), ctx["height_m"])
        ctx["theta_deg"] = theta_deg
        if spec.dipole_moment_cm is None:
            return GreensService.coupling_coefficients(omega, spec.environment, geom, tol=spec.tolerances), ctx
        coupling = GreensService.coupling_coefficients(
            omega,
            spec.environment,
            geom,
            dipole_scale="absolute",
            dipole_moment=spec.dipole_moment_cm,
            tol=spec.tolerances,
        )
        ctx["gamma11_per_s"] = coupling.gamma11
        return coupling.normalized(), ctx

