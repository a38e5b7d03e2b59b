# relay-kit/src/relay_kit/contracts/config.py

"""
Defines the configuration schemas for relay-kit.

`BaseConfig` is the marker base class for every configuration model. The
concrete `RelayKitSettings` holds the knobs that the analysis modules take
as keyword arguments (search caps, subset limits, the default seed, logging).

Settings resolve in this order: model defaults, then an optional YAML file,
then environment variables.

Example `relay-kit.yaml`:

    ```yaml
    max_senders: 10
    default_seed: 1234
    log_level: INFO
    ```
"""

import os
from pathlib import Path
from typing import Literal, Mapping, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import PreconditionError

SEED_ENV_VAR = "RELAY_KIT_SEED"
LOG_LEVEL_ENV_VAR = "RELAY_KIT_LOG_LEVEL"


class BaseConfig(BaseModel):
    """
    The base class for all configuration schemas.

    Sections of a settings file are validated against subclasses of this
    model, so unknown keys are reported instead of silently ignored.
    """

    model_config = ConfigDict(extra="forbid")


class RelayKitSettings(BaseConfig):
    """Process-wide settings for the analysis modules and the CLI."""

    max_senders: int = Field(
        12,
        ge=1,
        description="Largest sender count accepted by the multi-access region (2^M subsets).",
    )
    max_path_nodes: int = Field(
        20,
        ge=2,
        description="Node cap for the exhaustive longest-simple-path search.",
    )
    default_seed: int = Field(0, ge=0, description="Seed used when none is given.")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    log_format: Literal["console", "json"] = "console"


def load_settings(
    path: Optional[Path] = None, environ: Optional[Mapping[str, str]] = None
) -> RelayKitSettings:
    """
    Loads and validates settings from an optional YAML file and the environment.

    Args:
        path: A YAML file whose top-level keys are `RelayKitSettings` fields.
        environ: The environment to read overrides from (defaults to `os.environ`).

    Returns:
        The validated settings.

    Raises:
        PreconditionError: If the file is unreadable or a value is invalid.
    """
    environ = os.environ if environ is None else environ
    raw: dict = {}

    if path is not None:
        try:
            loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as e:
            raise PreconditionError(f"Cannot read settings file '{path}': {e}") from e
        if loaded is not None and not isinstance(loaded, dict):
            raise PreconditionError(
                f"Settings file '{path}' must contain a mapping at the top level."
            )
        raw.update(loaded or {})

    if environ.get(SEED_ENV_VAR):
        raw["default_seed"] = environ[SEED_ENV_VAR]
    if environ.get(LOG_LEVEL_ENV_VAR):
        raw["log_level"] = environ[LOG_LEVEL_ENV_VAR].upper()

    try:
        return RelayKitSettings.model_validate(raw)
    except ValidationError as e:
        raise PreconditionError(f"Invalid settings: {e}") from e
