"""Parsers for network and sweep configuration files."""

from .config import expand_sweep, load_network_config, load_sweep_spec

__all__ = ["expand_sweep", "load_network_config", "load_sweep_spec"]
