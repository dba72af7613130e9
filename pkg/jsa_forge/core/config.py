#!/usr/bin/env python3
"""Centralized Configuration for jsa-forge.

This module loads configuration from jsa-forge-config.yml and exposes the
numerical defaults used by the physics modules and the CLI. Environment
variables can override YAML settings.
"""

import os
import re
import sys
import threading
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml


def _read_version() -> str:
    """Installed distribution version, else the one in a source checkout's pyproject."""
    try:
        return metadata.version("jsa-forge")
    except metadata.PackageNotFoundError:
        pass
    pyproject = Path(__file__).resolve().parents[2] / "pyproject.toml"
    try:
        found = re.search(r'^version\s*=\s*"([^"]+)"', pyproject.read_text(), re.MULTILINE)
    except OSError:
        found = None
    return found.group(1) if found else "1.0.0"


VERSION: str = _read_version()

# Project structure
PROJECT_ROOT: Path = Path(__file__).parent.parent.parent
PACKAGE_DIR: Path = Path(__file__).parent.parent
DATA_DIR: Path = PACKAGE_DIR / "data"

# Configuration file path
CONFIG_FILE: Path = PROJECT_ROOT / "jsa-forge-config.yml"

_config_cache: Optional[Dict[str, Any]] = None
_config_lock = threading.Lock()


def _minimal_defaults() -> Dict[str, Any]:
    """Defaults used when the YAML file is missing or incomplete."""
    return {
        "version": VERSION,
        "paths": {"output": "results"},
        "logging": {"level": "INFO"},
        "grid": {
            "mode": "window",
            "window_halfwidth": 10.0,
            "window_points": 512,
            "points_per_feature": 5,
            "min_points": 512,
            "max_points": 1536,
            "support": {
                "gaussian": 6.0,
                "sech": 24.0,
                "sinc": 128.0,
                "hermite_margin": 6.0,
                "custom": 8.0,
            },
        },
        "fock": {
            "truncation": 30,
            "buffer": 20,
            "projection_points": 4001,
            "tail_warning": 0.01,
            "tail_error": 0.05,
            "stage_tolerance": 1.0e-4,
        },
        "optimizer": {
            "penalty": 10.0,
            "restarts": 80,
            "fast_restarts": 20,
            "max_iters": 2000,
            "grad_tol": 1.0e-8,
            "stall_tol": 1.0e-5,
            "seed": 0,
            "warm_start": True,
        },
        "fidelity": {
            "mu_min": 0.05,
            "mu_max": 20.0,
            "scan_points": 161,
            "phase_points": 64,
            "target": 0.999,
        },
        "dispersion": {
            "model_file": None,
            "sinc_support": 32.0,
            "r_min": 2.0,
            "r_max": 30.0,
            "points": 15,
        },
        "parallel": {"threads": None},
        "tolerances": {
            "separability": 1.0e-9,
            "degenerate": 1.0e-12,
            "boundary": 1.0e-6,
            "displacement": 1.0e-8,
            "rs_degenerate": 1.0e-3,
        },
    }


def load_config() -> Dict[str, Any]:
    """Merged configuration: defaults, then the YAML file, then the environment.

    The result is cached; call reload_config() after changing the file or
    the environment.
    """
    global _config_cache

    with _config_lock:
        if _config_cache is not None:
            return _config_cache

        minimal_defaults = _minimal_defaults()

        if CONFIG_FILE.exists():
            try:
                with CONFIG_FILE.open("r", encoding="utf-8") as f:
                    yaml_config = yaml.safe_load(f) or {}
                    config = _deep_merge(minimal_defaults, yaml_config)
            except yaml.YAMLError as e:
                print(
                    f"Warning: YAML parsing error in {CONFIG_FILE}: {e}",
                    file=sys.stderr,
                )
                config = minimal_defaults
            except OSError as e:
                print(f"Warning: Cannot read {CONFIG_FILE}: {e}", file=sys.stderr)
                config = minimal_defaults
        else:
            # Installed packages run without a project-level config file
            config = minimal_defaults

        config = _apply_env_overrides(config)

        _config_cache = config
        return config


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; values from ``override`` win, nested dicts merge."""
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def _apply_env_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
    """Overlay the JSA_FORGE_* environment variables:

        JSA_FORGE_THREADS: Override parallel.threads
        JSA_FORGE_LOG_LEVEL: Override logging.level
        JSA_FORGE_OUTPUT_DIR: Override paths.output
    """
    if threads := os.environ.get("JSA_FORGE_THREADS"):
        parsed = _parse_thread_count(threads)
        if parsed is not None:
            config.setdefault("parallel", {})["threads"] = parsed

    if log_level := os.environ.get("JSA_FORGE_LOG_LEVEL"):
        config.setdefault("logging", {})["level"] = log_level

    if output_dir := os.environ.get("JSA_FORGE_OUTPUT_DIR"):
        config.setdefault("paths", {})["output"] = output_dir

    return config


def _parse_thread_count(value: str) -> Optional[int]:
    try:
        threads = int(value)
    except ValueError:
        print(f"Warning: ignoring JSA_FORGE_THREADS={value!r}", file=sys.stderr)
        return None
    if threads < 1:
        print(f"Warning: ignoring JSA_FORGE_THREADS={value!r}", file=sys.stderr)
        return None
    return threads


def get_config() -> Dict[str, Any]:
    """Cached configuration dictionary."""
    return load_config()


def reload_config() -> Dict[str, Any]:
    """Drop the cache and load the configuration again."""
    global _config_cache
    _config_cache = None
    return load_config()


_config = load_config()

LOG_LEVEL: str = _config.get("logging", {}).get("level", "INFO")
OUTPUT_DIR: Path = Path(_config.get("paths", {}).get("output", "results"))

GRID_SETTINGS: Dict[str, Any] = _config["grid"]
FOCK_SETTINGS: Dict[str, Any] = _config["fock"]
OPTIMIZER_DEFAULTS: Dict[str, Any] = _config["optimizer"]
FIDELITY_SETTINGS: Dict[str, Any] = _config["fidelity"]
DISPERSION_SETTINGS: Dict[str, Any] = _config["dispersion"]
TOLERANCES: Dict[str, float] = _config["tolerances"]

DEFAULT_TRUNCATION: int = int(FOCK_SETTINGS.get("truncation", 30))
FOCK_BUFFER: int = int(FOCK_SETTINGS.get("buffer", 20))

DEFAULT_DISPERSION_MODEL: Path = DATA_DIR / "ktp_like.json"


def get_max_threads() -> int:
    """Number of worker threads for restarts and sweeps.

    The environment variable is read on every call so that a caller can
    change it without reloading the configuration.
    """
    env_value = os.environ.get("JSA_FORGE_THREADS")
    if env_value:
        parsed = _parse_thread_count(env_value)
        if parsed is not None:
            return parsed

    configured = get_config().get("parallel", {}).get("threads")
    if configured:
        return max(1, int(configured))
    return os.cpu_count() or 1


def get_dispersion_model_path() -> Path:
    """Path of the dispersion model used when none is given explicitly."""
    configured = DISPERSION_SETTINGS.get("model_file")
    if configured:
        return Path(configured)
    return DEFAULT_DISPERSION_MODEL


def validate_configuration() -> List[str]:
    """Warnings for sections or keys the numerical modules expect but cannot find."""
    warnings = []
    config = get_config()

    expected_sections = {
        "grid": ["mode", "window_halfwidth", "window_points", "points_per_feature", "support"],
        "fock": ["truncation", "buffer", "tail_warning", "tail_error"],
        "optimizer": ["penalty", "restarts", "max_iters", "grad_tol"],
        "fidelity": ["mu_min", "mu_max", "scan_points"],
        "dispersion": ["sinc_support"],
        "tolerances": ["separability", "degenerate"],
    }

    for section, sub_keys in expected_sections.items():
        if section not in config:
            warnings.append(f"Missing configuration section: '{section}'")
            continue
        for sub_key in sub_keys:
            if sub_key not in config[section]:
                warnings.append(f"Missing configuration: '{section}.{sub_key}'")

    return warnings


class ErrorMessages:
    """Message templates shared by several modules."""

    DEGENERATE_RS = "r and s coincide (r={r}, s={s}); the JSA vanishes identically"
    MODEL_RANGE = "wavelength {wavelength_um:.4f} um outside model window {window} for mode {mode}"

    @classmethod
    def format_error(cls, template: str, **kwargs: Any) -> str:
        return template.format(**kwargs)
