"""Runtime settings and logging setup.

Settings come from, lowest precedence first: model defaults, a YAML file
(``linspp.yaml`` in the working directory or an explicit path), then
``LINSPP_*`` environment variables (a ``.env`` file is loaded first).
CLI flags override the result.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from rich.console import Console
from rich.logging import RichHandler

from linspp.errors import ConfigError

DEFAULT_CONFIG_FILE = "linspp.yaml"
ENV_PREFIX = "LINSPP_"

log = logging.getLogger(__name__)


class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    max_paths: int = Field(default=1_000_000, ge=1)
    max_systems: int = Field(default=1_000_000, ge=1)
    jobs: int = Field(default=1, ge=1)
    log_level: str = "WARNING"
    log_format: str = "%(message)s"
    default_order: int = Field(default=2, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level


def _read_yaml(path: Path) -> dict[str, Any]:
    try:
        data = yaml.safe_load(path.read_text()) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"{path}: {e.strerror}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")

    # logging: {level, format} maps onto log_level and log_format
    logging_section = data.pop("logging", None) or {}
    if "level" in logging_section:
        data.setdefault("log_level", logging_section["level"])
    if "format" in logging_section:
        data.setdefault("log_format", logging_section["format"])
    return data


def _read_env() -> dict[str, str]:
    values = {}
    for name in Settings.model_fields:
        raw = os.getenv(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = raw
    return values


def load_settings(path: str | Path | None = None, **overrides: Any) -> Settings:
    """Build settings from defaults, YAML, environment and explicit overrides."""
    load_dotenv()

    data: dict[str, Any] = {}
    if path is not None:
        data.update(_read_yaml(Path(path)))
    elif Path(DEFAULT_CONFIG_FILE).is_file():
        data.update(_read_yaml(Path(DEFAULT_CONFIG_FILE)))

    data.update(_read_env())
    data.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return Settings(**data)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


_handler: logging.Handler | None = None


def configure_logging(settings: Settings) -> None:
    """Route the ``linspp`` logger through rich on stderr."""
    global _handler

    root = logging.getLogger("linspp")
    if _handler is not None:
        root.removeHandler(_handler)

    _handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        rich_tracebacks=True,
    )
    _handler.setFormatter(logging.Formatter(settings.log_format))
    root.addHandler(_handler)
    root.setLevel(settings.log_level)
    root.propagate = False
    log.debug("logging configured at %s", settings.log_level)
