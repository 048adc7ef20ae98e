"""Configuration management."""
from .manager import DEFAULT_CONFIG, ConfigManager, parse_scalar

__all__ = ["DEFAULT_CONFIG", "ConfigManager", "parse_scalar"]
