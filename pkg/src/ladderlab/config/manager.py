"""
Configuration management.
"""
import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import dotenv_values, find_dotenv, load_dotenv

from ..exceptions import ConfigurationError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MODEL_NAMES = ("oscillator", "morse", "coulomb")

# Default configuration
DEFAULT_CONFIG: Dict[str, Any] = {
    "app": {
        "name": "LadderLab",
        "log_level": "WARNING",
    },
    "models": {
        "enabled": list(MODEL_NAMES),
        "morse": {"alpha": 1.0},
    },
    "grids": {
        "oscillator": {"x_min": 1e-4, "x_max": 12.0, "count": 4001},
        "morse": {"x_min": -12.0, "x_max": 6.0, "count": 4001},
        "coulomb": {"x_min": 1e-5, "x_max": 60.0, "count": 16001},
    },
    "numerics": {
        "window_fraction": 0.05,
        "dilation_margin": 1.5,
        "tail_tolerance": 1e-8,
        "test_functions": 3,
        "min_sigma_spacings": 10,
        "eigen_tol": 1e-12,
        "operator_refine": 2,
        "model_refine": {"morse": 32},
        "smoothing_window": 41,
        "smoothing_order": 6,
        "annihilation_refine": 4,
    },
    "thresholds": {
        "refined_identity": 1e-5,
        "refined_identity_dilation": 1e-4,
        "intertwining": 1e-5,
        "commutator": 1e-5,
        "commutator_dilation": 1e-4,
        "ladder_overlap": 0.9999,
        "ladder_overlap_half_step": 0.999,
        "quadratic_reduction": 1e-5,
        "ladder_coefficient": 1e-3,
        "annihilation": 1e-5,
        "spectrum_relative": 1e-4,
        "spectrum_absolute": 1e-4,
        "spectrum_critical": 5e-3,
        "absolute_fallback": 1e-10,
        "hermiticity": 1e-6,
        "eigen_residual": 1e-4,
    },
    "suite": {
        "name": "default",
        "checks": {
            "refined_identity": True,
            "intertwining": True,
            "commutators": True,
            "hermiticity": True,
            "ladder_overlap": True,
            "quadratic": True,
            "spectrum": True,
            "ladder_coefficient": True,
            "annihilation": True,
            "eigen_residual": True,
            "half_step": True,
        },
        # (n, l) pairs unless noted; intertwining [l, variant], spectrum [l, k],
        # ladder_coefficient [l, n, variant], quadratic [kind, n, l],
        # half_step [pair, n, l], annihilation plain l
        "points": {
            "oscillator": {
                "refined_identity": [[0, 0], [1, 1], [2, 0], [2, 2]],
                "intertwining": [[1, "a"], [1, "b"], [0, "a"]],
                "commutators": [[2, 0], [3, 1]],
                "hermiticity": [[2, 0]],
                "ladder_overlap": [[0, 0], [1, 1], [2, 0], [2, 2]],
                "quadratic": [["energy_preserving", 2, 2], ["energy_preserving", 3, 3]],
                "spectrum": [[0, 3], [1, 3], [2, 3], [3, 3]],
                "ladder_coefficient": [[0, 0, "a"], [1, 1, "a"]],
                "annihilation": [0, 1, 2, 3],
                "eigen_residual": [[2, 0], [3, 1], [4, 2]],
            },
            "morse": {
                "refined_identity": [[1, 1], [2, 2], [3, 3], [1, 3]],
                "intertwining": [[1], [2]],
                "commutators": [[3, 3], [2, 4]],
                "ladder_overlap": [[1, 1], [2, 2], [3, 3], [1, 3]],
                "quadratic": [
                    ["raise_l", 2, 2], ["raise_l", 4, 4],
                    ["lower_l", 2, 4], ["lower_l", 4, 6],
                ],
                "spectrum": [[3, 2], [5, 3]],
                "ladder_coefficient": [[1, 2], [2, 2]],
                "annihilation": [1, 2, 3, 4],
                "eigen_residual": [[1, 3], [2, 4], [1, 5]],
            },
            "coulomb": {
                "refined_identity": [[0, 0], [1, 0], [1, 1], [2, 1]],
                "intertwining": [[0], [3]],
                "commutators": [[1, 0], [2, 1]],
                "ladder_overlap": [[0, 0], [1, 0], [1, 1], [2, 1]],
                "quadratic": [
                    ["raise_l", 2, 0], ["raise_l", 2, 1],
                    ["lower_l", 2, 1], ["lower_l", 2, 2],
                ],
                "spectrum": [[0, 2], [1, 2], [2, 2], ["1/2", 2]],
                "ladder_coefficient": [[0, 1], [0, 2]],
                "annihilation": [0, 1, 2, 3],
                "eigen_residual": [[1, 0], [2, 0], [2, 1]],
                "half_step": [[1, 0, 0], [2, 0, 0], [1, 1, 1]],
            },
        },
    },
    "report": {
        "path": "ladderlab-report.json",
        "deterministic": True,
    },
    "performance": {
        "max_workers": 4,
    },
    "output": {
        "progress": True,
        "csv_digits": 17,
    },
}

# flat-file keys that stand for dotted config keys
FLAT_ALIASES = {
    "alpha": "models.morse.alpha",
    "workers": "performance.max_workers",
    "threads": "performance.max_workers",
    "log_level": "app.log_level",
    "report": "report.path",
}
GRID_ALIASES = ("x_min", "x_max", "count")

THREADS_VARIABLE = "LADDERLAB_THREADS"


def parse_scalar(value: Any) -> Any:
    """Coerce a string with YAML scalar rules (``1e-5`` -> float, ``true`` -> bool)."""
    if not isinstance(value, str):
        return value
    try:
        parsed = yaml.safe_load(value)
    except yaml.YAMLError:
        return value
    # YAML 1.1 reads "1e-5" as a string; numbers without a dot still count
    if isinstance(parsed, str):
        try:
            return float(parsed)
        except ValueError:
            return parsed
    return parsed


class ConfigManager:
    """
    Configuration manager.

    Merges, in increasing priority, ``DEFAULT_CONFIG``, a YAML or flat
    ``key=value`` config file, ``LADDERLAB_`` environment variables (``.env``
    included) and values passed to ``set``.
    """

    def __init__(self, config_path: Optional[str] = "config/config.yaml", load_env: bool = True):
        """
        Initialize configuration manager.

        Args:
            config_path: Path to the configuration file (None for defaults only)
            load_env: Whether to read ``.env`` and ``LADDERLAB_`` variables

        Raises:
            ConfigurationError: If the config file cannot be parsed
        """
        self.config_path = config_path
        self._env_prefix = "LADDERLAB_"
        self._config: Dict[str, Any] = copy.deepcopy(DEFAULT_CONFIG)

        if config_path:
            self._config = self._load_config_file(config_path, self._config)
        if load_env:
            load_dotenv(find_dotenv(usecwd=True))
            self._load_env_vars()

        logger.info(f"Configuration loaded from {config_path or 'defaults'}")

    def _load_config_file(self, config_path: str, default_config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Load configuration from a YAML or flat file and merge it over the defaults.

        Raises:
            ConfigurationError: If the file exists but cannot be parsed
        """
        config_file = Path(config_path)

        if not config_file.exists():
            logger.warning(f"Config file not found: {config_file}, using defaults")
            return default_config

        if config_file.suffix.lower() in (".yaml", ".yml"):
            try:
                with open(config_file, "r", encoding="utf-8") as f:
                    user_config = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as e:
                raise ConfigurationError(f"Failed to load config {config_path}: {e}")
            if not isinstance(user_config, dict):
                raise ConfigurationError(f"Config {config_path} must contain a mapping")
            merged = self._merge_config(default_config, user_config)
        else:
            merged = copy.deepcopy(default_config)
            try:
                values = dotenv_values(config_file)
            except (OSError, UnicodeDecodeError) as e:
                raise ConfigurationError(f"Failed to load config {config_path}: {e}")
            self._apply_flat(merged, values)

        logger.info(f"Loaded config from {config_file}")
        return merged

    def _apply_flat(self, config: Dict[str, Any], values: Dict[str, Optional[str]]) -> None:
        """Apply ``key=value`` pairs, resolving flag aliases."""
        model = values.get("model")
        if model:
            config["models"]["enabled"] = [name.strip() for name in model.split(",") if name.strip()]

        for key, raw in values.items():
            if key == "model":
                continue
            if raw is None:
                raise ConfigurationError(f"Config key '{key}' has no value")
            value = parse_scalar(raw)

            if key in FLAT_ALIASES:
                self._set_nested_value(config, FLAT_ALIASES[key], value)
            elif key in GRID_ALIASES:
                for name in config["models"]["enabled"]:
                    self._set_nested_value(config, f"grids.{name}.{key}", value)
            elif key.startswith("threshold."):
                self._set_nested_value(config, f"thresholds.{key[len('threshold.'):]}", value)
            elif "." in key:
                self._set_nested_value(config, key, value)
            else:
                raise ConfigurationError(f"Unknown config key '{key}'")

    def _load_env_vars(self) -> None:
        """
        Load configuration from environment variables.

        ``LADDERLAB_SECTION__KEY`` sets ``section.key``; ``LADDERLAB_THREADS``
        caps ``performance.max_workers``.
        """
        for key, value in os.environ.items():
            if not key.startswith(self._env_prefix) or key == THREADS_VARIABLE:
                continue
            config_key = key[len(self._env_prefix):].lower().replace("__", ".")
            if "." in config_key:
                self._set_nested_value(self._config, config_key, parse_scalar(value))

        threads = os.environ.get(THREADS_VARIABLE)
        if threads:
            try:
                cap = int(threads)
            except ValueError:
                raise ConfigurationError(f"{THREADS_VARIABLE} must be an integer, got {threads!r}")
            if cap < 1:
                raise ConfigurationError(f"{THREADS_VARIABLE} must be positive, got {cap}")
            workers = int(self.get("performance.max_workers", cap))
            self.set("performance.max_workers", min(workers, cap))

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value by dot-separated key.

        Examples:
            >>> config.get('grids.coulomb.count')
            16001
            >>> config.get('models.morse.alpha')
            1.0
        """
        value = self._config

        for k in key.split("."):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value if value is not None else default

    def set(self, key: str, value: Any) -> None:
        """Set configuration value by dot-separated key."""
        self._set_nested_value(self._config, key, value)

    def _set_nested_value(self, config: Dict[str, Any], key: str, value: Any) -> None:
        keys = key.split(".")

        for k in keys[:-1]:
            if not isinstance(config.get(k), dict):
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value

    def grid_spec(self, model: str) -> Dict[str, Any]:
        """
        Grid section of a model.

        Raises:
            ConfigurationError: If the section is missing or incomplete
        """
        spec = self.get(f"grids.{model}")
        if not isinstance(spec, dict) or not all(key in spec for key in GRID_ALIASES):
            raise ConfigurationError(f"grids.{model} needs x_min, x_max and count")
        return dict(spec)

    def model_options(self, model: str) -> Dict[str, Any]:
        options = self.get(f"models.{model}", {})
        return dict(options) if isinstance(options, dict) else {}

    def as_dict(self) -> Dict[str, Any]:
        """Deep copy of the merged configuration."""
        return copy.deepcopy(self._config)

    def save(self, path: Optional[str] = None) -> None:
        """Save configuration to a YAML file."""
        save_path = path or self.config_path
        if not save_path:
            raise ConfigurationError("No path to save configuration to")

        config_file = Path(save_path)
        config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(config_file, "w", encoding="utf-8") as f:
            yaml.safe_dump(self._config, f, allow_unicode=True, default_flow_style=False)

        logger.info(f"Configuration saved to {save_path}")

    @staticmethod
    def _merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Recursively merge configuration dictionaries."""
        result = copy.deepcopy(base)

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = ConfigManager._merge_config(result[key], value)
            else:
                result[key] = value

        return result
