"""
`conductivity` subcommand: sigma_d over an (f, q_x) grid plus an optional
local frequency sweep at q_x = 0.
"""

import logging
from argparse import Namespace
from pathlib import Path
from typing import List, Tuple

import numpy as np

from core.exceptions import ConfigError
from core.units import thz_to_omega
from models.run_config import RunConfig
from services.conductivity_service import ConductivityService
from services.output_service import OutputService

logger = logging.getLogger(__name__)


def run(cfg: RunConfig, args: Namespace, out: Path) -> List[Path]:
    """Write conductivity.csv and one SVG per requested frequency slice."""
    section = cfg.conductivity
    graphene = cfg.environment.graphene
    if graphene is None:
        raise ConfigError("conductivity needs a graphene section", key_path="environment.graphene")
    params = graphene.to_params()
    qx = np.asarray(section.qx_per_m.values())

    rows: List[Tuple[float, float, complex]] = []
    series = {}
    for f in section.frequency_thz:
        # singular nodes come back as NaN and are written as "nan"
        sigma = ConductivityService.doppler_sigma_array(thz_to_omega(f), qx, params)
        normalized = ConductivityService.normalized(sigma)
        rows.extend((f, q, s) for q, s in zip(qx, normalized))
        series[f"Re, {f:g} THz"] = (qx, normalized.real)
        series[f"Im, {f:g} THz"] = (qx, normalized.imag)
    logger.info(f"conductivity on {len(section.frequency_thz)} x {qx.size} (f, q_x) points")

    written = []
    if section.local_sweep_thz is not None:
        freqs = section.local_sweep_thz.values()
        local = [ConductivityService.normalized(ConductivityService.local_conductivity(thz_to_omega(f), params).sigma) for f in freqs]
        rows.extend((f, 0.0, s) for f, s in zip(freqs, local))
        written.append(
            OutputService.line_plot(
                out / "conductivity_local.svg",
                {"Re": (freqs, [s.real for s in local]), "Im": (freqs, [s.imag for s in local])},
                "f (THz)",
                "sigma / sigma_min",
                title="q_x = 0",
            )
        )

    written.insert(0, OutputService.write_conductivity(out / "conductivity.csv", rows))
    written.append(
        OutputService.line_plot(
            out / "conductivity.svg",
            series,
            "q_x (rad/m)",
            "sigma_d / sigma_min",
            title=f"v_d = {graphene.vd_over_vf:g} v_F",
        )
    )
    return written
