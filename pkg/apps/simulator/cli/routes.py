"""
Sub-command definitions for the Driftlink CLI.
"""

import argparse
from pathlib import Path

from cli import conductivity, dispersion, entangle, fieldmap
from core.config import settings

COMMANDS = {
    "conductivity": (conductivity.run, "Drift-biased graphene conductivity over an (f, q_x) grid"),
    "dispersion": (dispersion.run, "TM surface-wave dispersion, equi-frequency contour and integrand maps"),
    "fieldmap": (fieldmap.run, "E_z field map of a z-dipole above the sheet"),
    "entangle": (entangle.run, "Two-qubit entanglement sweeps mediated by the sheet"),
}


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="JSON run config or a previous run_meta.json")
    parser.add_argument("--out", type=Path, default=Path("out"), help="Output directory")
    parser.add_argument("--vd-over-vf", type=float, default=None, help="Override the drift velocity (units of v_F)")
    parser.add_argument("--frequency-thz", type=float, default=None, help="Override the section's frequency")
    parser.add_argument(
        "--threads",
        type=int,
        default=settings.DEFAULT_THREADS,
        help="Worker processes; 0 uses every hardware thread, 1 runs inline",
    )
    parser.add_argument("--doppler-arg", choices=["re", "complex"], default=None)
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=settings.LOG_LEVEL,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftlink",
        description="Plasmon-mediated qubit entanglement over drift-biased graphene",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (handler, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        add_common_arguments(sub)
        sub.set_defaults(handler=handler)
    return parser
