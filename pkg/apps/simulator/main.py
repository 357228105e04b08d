"""
Driftlink command-line entry point.

    python main.py entangle --config ../../configs/entangle_angle_nr.json --out out/angle_nr
"""
from dotenv import load_dotenv
load_dotenv()

import json
import logging
import sys
import time
from typing import List, Optional

from cli.config_loader import load_run_config
from cli.routes import build_parser
from core.config import settings
from core.exceptions import ConfigError, DriftlinkError
from services.output_service import OutputService
from services.worker_pool import resolve_threads

logger = logging.getLogger("driftlink")


def run_meta(cfg, args, wall_time_s: float, outputs: List[str]) -> dict:
    """Everything needed to reproduce the run; ``config`` is fed back via --config."""
    config = cfg.model_dump(mode="json", exclude_none=True)
    config["tolerances"] = cfg.tolerances.to_tolerances().model_dump()
    return {
        "command": args.command,
        "config": config,
        "git_describe": OutputService.git_describe(),
        "outputs": outputs,
        "threads": resolve_threads(args.threads),
        "version": settings.VERSION,
        "wall_time_s": wall_time_s,
    }


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )
    started = time.perf_counter()
    try:
        cfg = load_run_config(
            args.config,
            args.command,
            vd_over_vf=args.vd_over_vf,
            frequency_thz=args.frequency_thz,
            doppler_arg=args.doppler_arg,
        )
        written = args.handler(cfg, args, args.out)
        meta = run_meta(cfg, args, time.perf_counter() - started, [p.name for p in written])
        OutputService.write_json(args.out / "run_meta.json", meta)
    except DriftlinkError as exc:
        logger.error(f"{args.command} failed: {exc.detail}")
        print(json.dumps(exc.to_dict(), default=str), file=sys.stderr)
        return 2 if isinstance(exc, ConfigError) else 1
    logger.info(f"{args.command} finished in {time.perf_counter() - started:.2f} s")
    return 0


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
