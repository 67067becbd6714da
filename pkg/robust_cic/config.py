"""
File-based TOML configuration.

Global settings live in $XDG_CONFIG_HOME/robust-cic/config.toml and are overridden
by ./.robust-cic.toml. Each subcommand reads its own table, e.g. [bench-n].
"""

import logging
import os
from pathlib import Path
from typing import Any

# TOML parsing: stdlib tomllib (3.11+) or tomli
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

logger = logging.getLogger(__name__)

APP_NAME = "robust-cic"
LOCAL_FILE = ".robust-cic.toml"


def global_config_path() -> Path:
    xdg = os.environ.get("XDG_CONFIG_HOME", os.path.expanduser("~/.config"))
    return Path(xdg) / APP_NAME / "config.toml"


def _read_toml(path: Path) -> dict:
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        logger.warning("ignoring unreadable config file %s: %s", path, exc)
        return {}


def load_config(cwd: Path | None = None) -> dict:
    """Global config, then local overrides (dict values deep-merge for nested tables)."""
    cfg: dict = {}
    global_path = global_config_path()
    if global_path.is_file():
        cfg = _read_toml(global_path)
    local_path = (cwd or Path.cwd()) / LOCAL_FILE
    if local_path.is_file():
        for key, val in _read_toml(local_path).items():
            if key in cfg and isinstance(cfg[key], dict) and isinstance(val, dict):
                cfg[key].update(val)
            else:
                cfg[key] = val
    return cfg


def resolve(cfg: dict, section: str, key: str, value: Any, default: Any = None) -> Any:
    """Setting lookup: CLI flag > [section] table > top-level key > default."""
    if value is not None:
        return value
    table = cfg.get(section, {}) if isinstance(cfg.get(section), dict) else {}
    if key in table:
        return table[key]
    top = cfg.get(key)
    if top is not None and not isinstance(top, dict):
        return top
    return default
