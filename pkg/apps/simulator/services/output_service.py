"""
CSV, JSON and SVG emission.

CSV is the authoritative output: every float is written with 9 significant
digits. SVG figures are rendered with matplotlib's Agg backend with a fixed
hash salt and no date, so repeated runs produce identical files.
"""

import csv
import json
import logging
import math
import subprocess
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from core.units import omega_to_thz  # noqa: E402
from models.dispersion import DispersionSample  # noqa: E402
from models.dynamics import DensityMatrix  # noqa: E402
from models.environment import FieldMap  # noqa: E402
from models.experiment import SweepResult  # noqa: E402

logger = logging.getLogger(__name__)

matplotlib.rcParams["svg.hashsalt"] = "driftlink"

CONDUCTIVITY_HEADER = ["f_THz", "qx_per_m", "Re_sigma_over_sigmin", "Im_sigma_over_sigmin"]
DISPERSION_HEADER = ["f_THz", "phi_deg", "Re_q_per_m", "Im_q_per_m", "residual", "status"]
FIELD_MAP_HEADER = ["x_m", "y_m", "Re_Ez", "Im_Ez", "abs_Ez"]
INTEGRAND_HEADER = ["qx_per_m", "qy_per_m", "abs_integrand"]
RHO_COLUMNS = [f"rho{i}{j}_{part}" for i in range(1, 5) for j in range(1, 5) for part in ("re", "im")]


def fmt(value: Any) -> str:
    """Numbers at 9 significant digits; strings pass through."""
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.9g}"


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


class OutputService:
    """Writers for every file the CLI produces."""

    @staticmethod
    def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([fmt(v) for v in row] for row in rows)
        logger.info(f"wrote {path}")
        return path

    @staticmethod
    def write_conductivity(path: Path, rows: Iterable[Tuple[float, float, complex]]) -> Path:
        """Rows of (f_THz, q_x, sigma / sigma_min)."""
        return OutputService.write_csv(
            path, CONDUCTIVITY_HEADER, ((f, qx, s.real, s.imag) for f, qx, s in rows)
        )

    @staticmethod
    def write_dispersion(path: Path, samples: Iterable[DispersionSample]) -> Path:
        def row(s: DispersionSample) -> List[Any]:
            q = s.root.q if s.root else complex("nan+nanj")
            residual = s.root.residual if s.root else float("nan")
            return [omega_to_thz(s.omega), math.degrees(s.phi), q.real, q.imag, residual, s.status]

        return OutputService.write_csv(path, DISPERSION_HEADER, (row(s) for s in samples))

    @staticmethod
    def write_field_map(path: Path, fmap: FieldMap) -> Path:
        """Row-major over the grid: y outer, x inner."""

        def rows():
            for iy, y in enumerate(fmap.y):
                for ix, x in enumerate(fmap.x):
                    v = fmap.values[iy, ix]
                    yield x, y, v.real, v.imag, abs(v)

        return OutputService.write_csv(path, FIELD_MAP_HEADER, rows())

    @staticmethod
    def write_integrand_map(path: Path, qx: np.ndarray, qy: np.ndarray, values: np.ndarray) -> Path:
        rows = ((x, y, values[iy, ix]) for iy, y in enumerate(qy) for ix, x in enumerate(qx))
        return OutputService.write_csv(path, INTEGRAND_HEADER, rows)

    @staticmethod
    def write_trajectory(
        path: Path,
        times: Sequence[float],
        states: Sequence[DensityMatrix],
        concurrence: Sequence[float],
        gamma11_per_s: Optional[float] = None,
    ) -> Path:
        """Full density matrix per time; adds t_ps when Gamma_11 is known in rad/s."""
        header = ["t_gamma11"] + (["t_ps"] if gamma11_per_s else []) + RHO_COLUMNS + ["concurrence"]

        def rows():
            for t, rho, c in zip(times, states, concurrence):
                entries = [part for v in rho.data.reshape(-1) for part in (v.real, v.imag)]
                absolute = [t / gamma11_per_s * 1e12] if gamma11_per_s else []
                yield [t, *absolute, *entries, c]

        return OutputService.write_csv(path, header, rows())

    @staticmethod
    def write_sweep(path: Path, result: SweepResult) -> Path:
        with_pair = result.kind == "routing"
        header = [result.swept_name] + (["pair"] if with_pair else []) + [
            "gamma12_over_gamma11",
            "gamma21_over_gamma11",
            "g12_over_gamma11",
            "g21_over_gamma11",
            "concurrence",
        ]
        rows = (
            [r.swept] + ([r.pair] if with_pair else []) + [r.gamma12, r.gamma21, r.g12, r.g21, r.concurrence]
            for r in result.rows
        )
        return OutputService.write_csv(path, header, rows)

    @staticmethod
    def write_json(path: Path, payload: Dict[str, Any]) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n", encoding="utf-8")
        logger.info(f"wrote {path}")
        return path

    @staticmethod
    def git_describe() -> str:
        try:
            out = subprocess.run(
                ["git", "describe", "--always", "--dirty", "--tags"],
                capture_output=True,
                text=True,
                check=True,
                cwd=Path(__file__).resolve().parent,
            )
        except (OSError, subprocess.CalledProcessError):
            return "unknown"
        return out.stdout.strip() or "unknown"

    # -- figures ----------------------------------------------------------

    @staticmethod
    def line_plot(
        path: Path,
        series: Dict[str, Tuple[Sequence[float], Sequence[float]]],
        xlabel: str,
        ylabel: str,
        title: str = "",
    ) -> Path:
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, (x, y) in series.items():
            ax.plot(x, y, label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if len(series) > 1:
            ax.legend()
        ax.grid(True, alpha=0.3)
        return OutputService._save(fig, path)

    @staticmethod
    def heatmap(path: Path, x: np.ndarray, y: np.ndarray, values: np.ndarray, xlabel: str, ylabel: str, title: str = "") -> Path:
        fig, ax = plt.subplots(figsize=(5, 4.5))
        mesh = ax.pcolormesh(x, y, np.ma.masked_invalid(values), shading="auto", cmap="inferno")
        fig.colorbar(mesh, ax=ax)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_aspect("equal")
        if title:
            ax.set_title(title)
        return OutputService._save(fig, path)

    @staticmethod
    def _save(fig, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        logger.info(f"wrote {path}")
        return path
