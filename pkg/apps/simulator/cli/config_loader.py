"""
Load a JSON run config (or a previous run_meta.json) and apply CLI overrides.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from core.exceptions import ConfigError
from models.run_config import Command, RunConfig

logger = logging.getLogger(__name__)


def key_path(error: Dict[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"])


def validation_to_config_error(exc: ValidationError) -> ConfigError:
    first = exc.errors()[0]
    path = key_path(first)
    return ConfigError(f"{path}: {first['msg']}", key_path=path, errors=len(exc.errors()))


def load_run_config(
    path: Optional[Path],
    command: Command,
    vd_over_vf: Optional[float] = None,
    frequency_thz: Optional[float] = None,
    doppler_arg: Optional[str] = None,
) -> RunConfig:
    """
    Parse the config file, fill in the invoked section and apply overrides.

    A run_meta.json written by an earlier run is accepted as is; its resolved
    config is used.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc.msg} (line {exc.lineno})")
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        if "git_describe" in data and "config" in data:
            logger.info(f"re-running from {path} (recorded at {data['git_describe']})")
            data = data["config"]

    data.setdefault(command, {} if command != "entangle" else None)
    if data.get(command) is None:
        raise ConfigError(f"config has no '{command}' section", key_path=command)
    if not isinstance(data[command], dict):
        raise ConfigError(f"'{command}' must be a JSON object", key_path=command)

    if vd_over_vf is not None:
        graphene = data.setdefault("environment", {}).get("graphene")
        if graphene is None:
            raise ConfigError("--vd-over-vf needs a graphene section", key_path="environment.graphene")
        graphene["vd_over_vf"] = vd_over_vf
    if frequency_thz is not None:
        section = data[command]
        if command == "conductivity":
            section["frequency_thz"] = [frequency_thz]
        elif command == "dispersion":
            section["efc_frequency_thz"] = frequency_thz
        else:
            section["frequency_thz"] = frequency_thz
    if doppler_arg is not None:
        data["doppler_arg"] = doppler_arg

    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise validation_to_config_error(exc)
