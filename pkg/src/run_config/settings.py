"""
Run configuration.

Settings come from model defaults, then an optional YAML file, then the
GAUSSQKD_SEED environment variable, then command-line overrides.
"""
import logging
import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError

from cad.distillation import MIN_TRIALS
from efficiency.integrator import QuadratureConfig
from efficiency.sweep import GridSpec
from error_handling.exceptions import ConfigurationError
from output.generator import OutputGenerator
from qkd_protocol.security import Attack

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "gaussqkd.yaml"
SEED_ENV = "GAUSSQKD_SEED"


class ProtocolSettings(BaseModel):
    """Defaults for the protocol-level commands."""
    attack: Attack = Field(Attack.INDIVIDUAL, description="Attack model for security and sweeps")
    sigma: Optional[float] = Field(None, gt=0, description="Squeezed-measurement width; None is sharp homodyne")
    bb84_threshold: float = Field(0.25, gt=0, lt=0.5, description="BB84 acceptance error rate")
    bb84_disclose_fraction: float = Field(0.5, ge=0, lt=1, description="Share of the sifted key sacrificed")
    cad_trials: int = Field(1_000_000, ge=MIN_TRIALS, description="Blocks simulated by the cad command")


class Settings(BaseModel):
    """Effective configuration of a gaussqkd invocation."""
    seed: int = Field(0, ge=0, description="Root seed of every random stream")
    threads: Optional[int] = Field(None, ge=1, description="Sweep worker threads; None uses all cores")
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    grid: GridSpec = Field(default_factory=GridSpec)
    protocol: ProtocolSettings = Field(default_factory=ProtocolSettings)

    def quadrature_config(self) -> QuadratureConfig:
        """Quadrature settings with the root seed applied to the Monte-Carlo streams."""
        return self.quadrature.model_copy(update={"rng_seed": self.seed})

    def dump_yaml(self, generator: OutputGenerator, path: str = "gaussqkd_run.yaml") -> str:
        """Write the effective configuration for provenance; returns the file path."""
        return generator.write_yaml(path, self.model_dump(mode="json"), overwrite=True)


class RunConfig(BaseModel):
    """Per-invocation options that are not part of the physics settings."""
    settings: Settings = Field(default_factory=Settings)
    output_format: Literal["text", "json", "csv"] = Field("text", description="Report format")
    output_dir: Optional[Path] = Field(None, description="Directory for written artifacts")
    verbose: bool = Field(False, description="Enable debug logging")


def _merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict):
            current = merged.get(key)
            merged[key] = _merge(current if isinstance(current, dict) else {}, value)
        elif value is not None:
            merged[key] = value
    return merged


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or "settings"
    return f"invalid configuration field '{field}': {first['msg']}"


def read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a YAML settings file.

    Raises:
        ConfigurationError: If the file is missing or not a mapping
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"Config file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Config file {path} is not valid YAML: {e}")
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must contain a mapping")
    return data


def load_settings(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> Settings:
    """
    Build the effective settings.

    Args:
        config_path: YAML file; when omitted gaussqkd.yaml in the working
            directory is used if present
        overrides: Nested mapping of command-line values; None entries are ignored

    Returns:
        Validated Settings

    Raises:
        ConfigurationError: On unreadable files or invalid values
    """
    data: Dict[str, Any] = {}
    if config_path is not None:
        data = read_yaml(config_path)
        logger.info(f"Loaded configuration from {config_path}")
    elif Path(DEFAULT_CONFIG_FILE).is_file():
        data = read_yaml(DEFAULT_CONFIG_FILE)
        logger.info(f"Loaded configuration from {DEFAULT_CONFIG_FILE}")

    env_seed = os.environ.get(SEED_ENV)
    if env_seed:
        try:
            data["seed"] = int(env_seed)
        except ValueError:
            raise ConfigurationError(f"{SEED_ENV} must be an integer; got {env_seed!r}")

    data = _merge(data, overrides or {})
    try:
        return Settings.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(_describe(e))
