"""
`entangle` subcommand: runs one pipeline sweep and writes its CSV, metadata
JSON and SVG line plot.
"""

import logging
from argparse import Namespace
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from pydantic import ValidationError

from cli.config_loader import validation_to_config_error
from models.experiment import SweepResult
from models.run_config import RunConfig
from services.entanglement_service import EntanglementService
from services.experiment_service import ExperimentService
from services.output_service import OutputService

logger = logging.getLogger(__name__)

XLABELS = {
    "theta_deg": "theta (deg)",
    "rho_over_lambda": "rho / lambda",
    "t_gamma11": "t Gamma_11",
    "omega1_over_gamma11": "Omega_1 / Gamma_11",
    "vd_over_vf": "v_d / v_F",
}


def _series(result: SweepResult) -> Dict[str, Tuple[Sequence[float], Sequence[float]]]:
    pairs = sorted({r.pair for r in result.rows})
    return {
        pair: ([r.swept for r in result.rows if r.pair == pair], [r.concurrence for r in result.rows if r.pair == pair])
        for pair in pairs
    }


def run(cfg: RunConfig, args: Namespace, out: Path) -> List[Path]:
    try:
        spec = cfg.experiment_spec(threads=args.threads)
    except ValidationError as exc:
        raise validation_to_config_error(exc)

    logger.info(f"entangle: {spec.kind} sweep for the {spec.case} case at {spec.frequency_thz:g} THz")
    result = ExperimentService.run(spec)
    stem = f"entangle_{spec.kind}"
    ylabel = "C_ss" if spec.kind == "drive_scan" else ("C(t)" if spec.kind == "transient" else "max_t C")

    written = [
        OutputService.write_sweep(out / f"{stem}.csv", result),
        OutputService.write_json(out / f"{stem}_meta.json", result.metadata),
        OutputService.line_plot(
            out / f"{stem}.svg",
            _series(result),
            XLABELS[result.swept_name],
            ylabel,
            title=result.metadata["case"],
        ),
    ]

    if result.trajectory is not None:
        gamma11 = result.metadata.get("gamma11_per_s") if cfg.entangle.time_unit == "ps" else None
        concurrence = [EntanglementService.concurrence(rho).value for rho in result.trajectory]
        written.append(
            OutputService.write_trajectory(
                out / "trajectory.csv", result.times, result.trajectory, concurrence, gamma11_per_s=gamma11
            )
        )

    if result.drive_transient is not None:
        written.append(
            OutputService.write_csv(
                out / "drive_transient.csv",
                ["t_gamma11", "concurrence"],
                zip(result.times, result.drive_transient),
            )
        )
        written.append(
            OutputService.line_plot(
                out / "drive_transient.svg",
                {"C(t)": (result.times, result.drive_transient)},
                "t Gamma_11",
                "C(t)",
                title=f"Omega_1 = {result.metadata['argmax_omega1_over_gamma11']:.4g} Gamma_11",
            )
        )
    return written
