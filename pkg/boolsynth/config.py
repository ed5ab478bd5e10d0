"""
Run settings: built-in defaults < YAML file < BOOLSYNTH_* environment < flags.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field

from .errors import BoolSynthError
from .regions import DEFAULT_BUDGET
from .semantics import DEFAULT_CAP
from .utils import get_logger, load_env_config

logger = get_logger(__name__)

ENV_KEYS = {
    "budget": "BOOLSYNTH_BUDGET",
    "cap": "BOOLSYNTH_CAP",
    "debug": "BOOLSYNTH_DEBUG",
    "progress": "BOOLSYNTH_PROGRESS",
}


class Settings(BaseModel):
    budget: int = Field(DEFAULT_BUDGET, ge=1, description="Search nodes per separation atom")
    cap: int = Field(DEFAULT_CAP, ge=1, description="Maximal number of reachable markings")
    debug: bool = False
    progress: bool = False


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise BoolSynthError(f"Invalid config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise BoolSynthError(f"Config file {path} must hold a mapping")
    unknown = sorted(set(data) - set(ENV_KEYS))
    if unknown:
        logger.warning(f"Ignoring unknown config keys in {path}: {', '.join(unknown)}")
    return {k: v for k, v in data.items() if k in ENV_KEYS}


def load_settings(config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """Merge every configuration source into one validated ``Settings``.

    ``overrides`` holds the command-line values; ``None`` entries are skipped.
    """
    load_env_config()
    values: Dict[str, Any] = {}

    config_path = config_path or os.getenv("BOOLSYNTH_CONFIG")
    if config_path:
        values.update(_read_yaml(Path(config_path)))
        logger.debug(f"Settings read from {config_path}")

    for key, env in ENV_KEYS.items():
        raw = os.getenv(env)
        if raw is None or raw == "":
            continue
        if key in ("debug", "progress"):
            values[key] = raw.strip().lower() in ("1", "true", "yes", "on")
        else:
            values[key] = raw

    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return Settings(**values)
