"""Configuration loader for chainopuc.

This module handles loading and merging configuration from multiple sources:
1. YAML configuration files (with profile support)
2. Environment variables (CHAINOPUC_* prefix, .env honoured)
3. CLI flag overrides

Priority order (low to high): YAML → ENV → CLI
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from loguru import logger

from .config import (
    BijectionConfig,
    ChainConfig,
    OutputConfig,
    PeriodicConfig,
    PolynomialConfig,
    ProcessingConfig,
    QuadratureConfig,
    RunConfig,
    ZeroConfig,
)

ENV_PREFIX = "CHAINOPUC_"

SECTIONS = {
    "chain": ChainConfig,
    "bijection": BijectionConfig,
    "polynomial": PolynomialConfig,
    "zeros": ZeroConfig,
    "quadrature": QuadratureConfig,
    "periodic": PeriodicConfig,
    "output": OutputConfig,
    "processing": ProcessingConfig,
}


def load_yaml_config(config_path: Optional[str] = None, profile: str = "default") -> Dict[str, Any]:
    """Load configuration from YAML file.

    Args:
        config_path: Path to config file (default: config.yaml in cwd, then repo root)
        profile: Profile to load (default, fast, strict)

    Returns:
        Merged configuration dictionary
    """
    if config_path is None:
        candidates = [Path("config.yaml"), Path(__file__).parent.parent / "config.yaml"]
        config_path = next((p for p in candidates if p.exists()), None)

        if config_path is None:
            logger.warning("No config.yaml found, using defaults")
            return {}

    try:
        with open(config_path, "r") as f:
            all_configs = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"Failed to load config file {config_path}: {e}")
        return {}

    config = copy.deepcopy(all_configs.get("default", {}) or {})

    if profile != "default":
        profile_config = all_configs.get(profile)
        if profile_config is None:
            logger.warning(f"Profile '{profile}' not found in config, using default")
        else:
            config = _deep_merge(config, profile_config)
            logger.debug(f"Loaded profile: {profile}")

    return config


def _deep_merge(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    """Deep merge two dictionaries.

    Args:
        base: Base dictionary
        overlay: Overlay dictionary (takes precedence)

    Returns:
        Merged dictionary
    """
    result = base.copy()
    for key, value in overlay.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def _parse_env_value(raw: str) -> Any:
    """Convert an environment string to int, float, bool or str (in that order)."""
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    if raw.lower() in ("true", "yes"):
        return True
    if raw.lower() in ("false", "no"):
        return False
    return raw


def apply_env_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
    """Apply environment variable overrides.

    Format: CHAINOPUC_<SECTION>_<KEY>=value, for example

    - CHAINOPUC_ZEROS_TOL=1e-12 → zeros.tol
    - CHAINOPUC_PERIODIC_GRID_PER_PERIOD=8192 → periodic.grid_per_period
    - CHAINOPUC_PROCESSING_MAX_WORKERS=8 → processing.max_workers

    A ``.env`` file in the working directory is loaded first; variables already set win.

    Args:
        config: Configuration dictionary to update

    Returns:
        Updated configuration dictionary
    """
    load_dotenv()

    for env_key, env_value in os.environ.items():
        if not env_key.startswith(ENV_PREFIX):
            continue

        parts = env_key[len(ENV_PREFIX) :].lower().split("_", 1)
        if len(parts) < 2:
            continue

        section, key = parts
        if section not in SECTIONS:
            logger.debug(f"Unknown section in env var: {section}")
            continue

        value = _parse_env_value(env_value)
        config.setdefault(section, {})[key] = value
        logger.debug(f"Applied env override: {section}.{key} = {value}")

    return config


def build_run_config(
    yaml_config: Dict[str, Any],
    cli_overrides: Optional[Dict[str, Any]] = None,
    **run_options: Any,
) -> RunConfig:
    """Build RunConfig from merged sources.

    Priority (low to high):
    1. YAML config
    2. Environment variables (already applied)
    3. CLI overrides

    Args:
        yaml_config: Configuration from YAML (with env overrides already applied)
        cli_overrides: Section-keyed dictionary of CLI flag overrides
        **run_options: Top-level RunConfig fields (command, input_source, n, ...)

    Returns:
        RunConfig instance with nested configurations
    """
    sections: Dict[str, Any] = {}
    for name, section_cls in SECTIONS.items():
        values = dict(yaml_config.get(name, {}) or {})
        if cli_overrides:
            values.update(cli_overrides.get(name, {}))
        try:
            sections[name] = section_cls(**values)
        except TypeError as e:
            raise ValueError(f"invalid key in section '{name}': {e}") from e

    return RunConfig(**sections, **run_options)


def load_config(profile: str = "default", config_path: Optional[str] = None, **kwargs: Any) -> RunConfig:
    """Main entry point for loading configuration.

    This function orchestrates the complete configuration loading pipeline:
    1. Load YAML configuration file
    2. Apply environment variable overrides (CHAINOPUC_*)
    3. Build RunConfig with CLI overrides

    Args:
        profile: Configuration profile to load (default, fast, strict)
        config_path: Path to YAML config file (default: config.yaml in repo root)
        **kwargs: Additional arguments passed to build_run_config
            - cli_overrides: Dict of CLI flag overrides
            - command, input_source, n, verbose, ...: RunConfig fields

    Returns:
        Fully configured RunConfig instance

    Example:
        >>> config = load_config(profile="strict", command="zeros", n=20)
        >>> SpectralRunner(config).run()
    """
    yaml_config = load_yaml_config(config_path, profile)
    yaml_config = apply_env_overrides(yaml_config)
    return build_run_config(yaml_config, **kwargs)
