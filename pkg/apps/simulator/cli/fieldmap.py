"""
`fieldmap` subcommand: E_z of a z-dipole at height z' observed at z = z'.
"""

import logging
from argparse import Namespace
from pathlib import Path
from typing import List

import numpy as np

from core.units import thz_to_omega, vacuum_wavelength
from models.environment import FieldGridSpec
from models.run_config import RunConfig
from services.dispersion_service import DispersionService
from services.greens_service import GreensService
from services.output_service import OutputService

logger = logging.getLogger(__name__)


def run(cfg: RunConfig, args: Namespace, out: Path) -> List[Path]:
    section = cfg.fieldmap
    env = cfg.environment.to_environment()
    tol = cfg.tolerances.to_tolerances()
    omega = thz_to_omega(section.frequency_thz)
    if env.sheet is None:
        wavelength = vacuum_wavelength(section.frequency_thz)
    else:
        wavelength, _ = DispersionService.spp_wavelength(omega, env, tol, cfg.doppler_arg)
    height = section.height_over_lambda * wavelength
    half = section.extent_over_lambda * wavelength
    logger.info(f"field map over +/-{half:.6g} m at z = z' = {height:.6g} m ({section.n}x{section.n})")

    grid = FieldGridSpec(
        x_min=-half, x_max=half, nx=section.n, y_min=-half, y_max=half, ny=section.n, z_obs=height
    )
    fmap = GreensService.field_map(
        omega,
        env,
        (0.0, 0.0, height),
        grid,
        tol,
        exclusion=section.exclusion,
        threads=args.threads,
    )
    return [
        OutputService.write_field_map(out / "fieldmap.csv", fmap),
        OutputService.heatmap(
            out / "fieldmap.svg",
            fmap.x / wavelength,
            fmap.y / wavelength,
            np.abs(fmap.values),
            "x / lambda",
            "y / lambda",
            title=f"|E_z|, {section.frequency_thz:g} THz",
        ),
    ]
