"""
`dispersion` subcommand: TM surface-wave branches per direction, the
equi-frequency contour and optional Sommerfeld integrand maps.
"""

import logging
import math
from argparse import Namespace
from pathlib import Path
from typing import List

import numpy as np

from core.exceptions import ConfigError
from core.units import thz_to_omega
from models.dispersion import DispersionSample
from models.run_config import RunConfig
from services.dispersion_service import DispersionService
from services.greens_service import GreensService
from services.output_service import OutputService

logger = logging.getLogger(__name__)


def _re_q(samples: List[DispersionSample]) -> List[float]:
    return [s.root.q.real if s.root else float("nan") for s in samples]


def run(cfg: RunConfig, args: Namespace, out: Path) -> List[Path]:
    section = cfg.dispersion
    env = cfg.environment.to_environment()
    if env.sheet is None:
        raise ConfigError("dispersion needs a graphene section", key_path="environment.graphene")
    tol = cfg.tolerances.to_tolerances()
    freqs = section.frequency_thz
    if freqs.n < 2:
        raise ConfigError("dispersion needs at least two frequencies", key_path="dispersion.frequency_thz.n")
    omega_range = (thz_to_omega(freqs.start), thz_to_omega(freqs.stop))
    f_axis = freqs.values()

    samples: List[DispersionSample] = []
    series = {}
    for direction in section.directions_deg:
        logger.info(f"dispersion along phi={direction:g} deg, {freqs.n} frequencies")
        curve = DispersionService.dispersion_curve(
            math.radians(direction), env, omega_range, freqs.n, tol, cfg.doppler_arg
        )
        samples.extend(curve)
        series[f"phi = {direction:g} deg"] = (f_axis, _re_q(curve))

    written = [
        OutputService.write_dispersion(out / "dispersion.csv", samples),
        OutputService.line_plot(out / "dispersion.svg", series, "f (THz)", "Re q (rad/m)"),
    ]

    if section.efc_frequency_thz is not None:
        omega = thz_to_omega(section.efc_frequency_thz)
        contour = DispersionService.efc(omega, env, section.n_phi, tol, cfg.doppler_arg)
        qx = [r.q.real * math.cos(r.phi) for r in contour.roots]
        qy = [r.q.real * math.sin(r.phi) for r in contour.roots]
        written.append(OutputService.write_dispersion(out / "efc.csv", contour.samples))
        written.append(
            OutputService.line_plot(
                out / "efc.svg",
                {"Re q": (qx + qx[:1], qy + qy[:1])},
                "q_x (rad/m)",
                "q_y (rad/m)",
                title=f"{section.efc_frequency_thz:g} THz",
            )
        )

    if section.integrand_heights_over_lambda:
        omega = thz_to_omega(section.efc_frequency_thz or freqs.stop)
        wavelength, _ = DispersionService.spp_wavelength(omega, env, tol, cfg.doppler_arg)
        q_extent = section.integrand_extent_over_q * 2.0 * math.pi / wavelength
        for h in section.integrand_heights_over_lambda:
            qx_axis, qy_axis, values = GreensService.integrand_map(
                omega, env, h * wavelength, q_extent, section.integrand_points, tol
            )
            stem = f"integrand_h{h:.4g}".replace(".", "p")
            written.append(OutputService.write_integrand_map(out / f"{stem}.csv", qx_axis, qy_axis, values))
            written.append(
                OutputService.heatmap(
                    out / f"{stem}.svg",
                    qx_axis,
                    qy_axis,
                    np.log10(values + np.finfo(float).tiny),
                    "q_x (rad/m)",
                    "q_y (rad/m)",
                    title=f"log10 |integrand|, z = {h:.4g} lambda",
                )
            )
    return written
