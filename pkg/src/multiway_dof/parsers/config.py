"""JSON network and sweep configuration parser."""

import itertools
import json
from collections.abc import Iterator
from pathlib import Path

from pydantic import ValidationError

from ..errors import ConfigValidationError, SweepTooLargeError
from ..models import NetworkConfig, SweepSpec
from ..network import validate_config

MAX_SWEEP_CELLS = 10**6


def _read_json(file_path: str) -> dict:
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {file_path}")

    with open(path, "r", encoding="utf-8") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigValidationError("file", f"invalid JSON at line {e.lineno}: {e.msg}") from e

    if not isinstance(raw, dict):
        raise ConfigValidationError("file", "top level must be a JSON object")
    return raw


def _validation_error(e: ValidationError) -> ConfigValidationError:
    first = e.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or "config"
    return ConfigValidationError(field, first["msg"])


def load_network_config(file_path: str) -> NetworkConfig:
    """
    Parse a network configuration file.

    Expected layout: {"clusters": [[M_1^1, M_2^1, ...], ...], "relay_antennas": N}

    Args:
        file_path: Path to the JSON file

    Returns:
        Validated NetworkConfig in the file's own labelling
    """
    raw = _read_json(file_path)
    try:
        config = NetworkConfig(**raw)
    except ValidationError as e:
        raise _validation_error(e) from e
    validate_config(config)
    return config


def _variables(spec: SweepSpec) -> set[str]:
    values: list = [spec.relay_antennas]
    if spec.clusters is not None:
        values.extend(v for cluster in spec.clusters for v in cluster)
    if spec.symmetric is not None:
        values.extend([spec.symmetric.clusters, spec.symmetric.users, spec.symmetric.antennas])
    return {v for v in values if isinstance(v, str)}


def load_sweep_spec(file_path: str) -> SweepSpec:
    """
    Parse and check a sweep file.

    Either "clusters" (a template of ints and variable names) or
    "symmetric" ({"clusters", "users", "antennas"}) describes the networks;
    "ranges" maps every variable to an inclusive [lo, hi] interval.

    Args:
        file_path: Path to the JSON file

    Returns:
        Validated SweepSpec

    Raises:
        SweepTooLargeError: if the grid has more than MAX_SWEEP_CELLS cells
    """
    raw = _read_json(file_path)
    try:
        spec = SweepSpec(**raw)
    except ValidationError as e:
        raise _validation_error(e) from e

    if (spec.clusters is None) == (spec.symmetric is None):
        raise ConfigValidationError("clusters", "give exactly one of 'clusters' or 'symmetric'")
    for name, (lo, hi) in spec.ranges.items():
        if lo > hi:
            raise ConfigValidationError(f"ranges.{name}", f"empty range [{lo}, {hi}]")
        if lo < 1:
            raise ConfigValidationError(f"ranges.{name}", f"values must be >= 1, got {lo}")
    used = _variables(spec)
    missing = used - set(spec.ranges)
    if missing:
        raise ConfigValidationError("ranges", f"no range for {', '.join(sorted(missing))}")
    unused = set(spec.ranges) - used
    if unused:
        raise ConfigValidationError("ranges", f"unused variables {', '.join(sorted(unused))}")
    if spec.p_lo <= 0:
        raise ConfigValidationError("p_lo", f"must be positive, got {spec.p_lo}")
    if spec.p_hi < 100 * spec.p_lo:
        raise ConfigValidationError(
            "p_hi", f"must be at least 100 x p_lo, got {spec.p_hi} vs {spec.p_lo}"
        )

    if spec.num_cells > MAX_SWEEP_CELLS:
        raise SweepTooLargeError(
            f"sweep has {spec.num_cells} cells, limit is {MAX_SWEEP_CELLS}"
        )
    return spec


def expand_sweep(spec: SweepSpec) -> Iterator[tuple[dict[str, int], NetworkConfig]]:
    """
    Yield every grid cell in lexicographic order of the declared ranges.

    Args:
        spec: Validated sweep specification

    Yields:
        Tuples of (variable assignment, network configuration)
    """
    names = list(spec.ranges)
    axes = [range(lo, hi + 1) for lo, hi in spec.ranges.values()]

    for values in itertools.product(*axes):
        env = dict(zip(names, values))

        def resolve(v, env=env):
            return env[v] if isinstance(v, str) else v

        if spec.clusters is not None:
            clusters = tuple(tuple(resolve(m) for m in cluster) for cluster in spec.clusters)
        else:
            layout = spec.symmetric
            clusters = ((resolve(layout.antennas),) * resolve(layout.users),) * resolve(
                layout.clusters
            )
        yield env, NetworkConfig(clusters=clusters, relay_antennas=resolve(spec.relay_antennas))
