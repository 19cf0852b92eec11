"""Network configuration handling: validation, canonical ordering, messages and channel sampling."""

import logging

import numpy as np

from .errors import ConfigValidationError, DegenerateChannelError
from .models import ChannelSet, MessageId, NetworkConfig, PermutationRecord
from .utils.linalg import complex_gaussian, is_full_rank

logger = logging.getLogger(__name__)

MAX_RESAMPLE = 16


def validate_config(config: NetworkConfig) -> None:
    """
    Check the structural rules every configuration must satisfy.

    Args:
        config: Raw network configuration

    Raises:
        ConfigValidationError: naming the offending field
    """
    if not config.clusters:
        raise ConfigValidationError("clusters", "at least one cluster is required")
    for l, cluster in enumerate(config.clusters, start=1):
        if len(cluster) < 2:
            raise ConfigValidationError(
                f"clusters[{l}]", f"needs at least 2 users, got {len(cluster)}"
            )
        for k, antennas in enumerate(cluster, start=1):
            if antennas < 1:
                raise ConfigValidationError(
                    f"clusters[{l}][{k}]", f"antenna count must be >= 1, got {antennas}"
                )
    if config.relay_antennas < 1:
        raise ConfigValidationError(
            "relay_antennas", f"must be >= 1, got {config.relay_antennas}"
        )


def canonicalize(
    config: NetworkConfig, catalog: bool | None = None
) -> tuple[NetworkConfig, PermutationRecord]:
    """
    Sort users by antenna count within each cluster and, for the two-cluster
    two-user catalog, order clusters so that M_2^1 >= M_2^2.

    Cluster ties on M_2 are broken by the larger M_1, then by original index.

    Args:
        config: Raw network configuration
        catalog: Apply the 2x2 cluster ordering; None applies it when the shape is 2x2

    Returns:
        Tuple of (canonical config, permutation record)
    """
    validate_config(config)
    if catalog is None:
        catalog = config.shape == (2, 2)

    # stable sort keeps the original order among equal antenna counts
    user_orders = [
        sorted(range(len(cluster)), key=lambda k, c=cluster: -c[k])
        for cluster in config.clusters
    ]
    sorted_clusters = [
        tuple(cluster[k] for k in order)
        for cluster, order in zip(config.clusters, user_orders)
    ]

    cluster_order = list(range(len(sorted_clusters)))
    tie_broken = False
    if catalog:
        if config.shape != (2, 2):
            raise ConfigValidationError("clusters", "catalog ordering needs 2 clusters of 2 users")
        cluster_order.sort(key=lambda l: (-sorted_clusters[l][1], -sorted_clusters[l][0], l))
        first, second = sorted_clusters
        tie_broken = first[1] == second[1] and first[0] != second[0]

    canonical = NetworkConfig(
        clusters=tuple(sorted_clusters[l] for l in cluster_order),
        relay_antennas=config.relay_antennas,
    )
    record = PermutationRecord(
        cluster_order=tuple(l + 1 for l in cluster_order),
        user_orders=tuple(tuple(k + 1 for k in user_orders[l]) for l in cluster_order),
        tie_broken=tie_broken,
    )
    return canonical, record


def message_universe(config: NetworkConfig) -> list[MessageId]:
    """
    List every message in (cluster, dest, src) order.

    Args:
        config: Canonical network configuration

    Returns:
        List of sum_l K_l (K_l - 1) MessageId objects
    """
    return [
        MessageId(cluster=l, dest=dest, src=src)
        for l, cluster in enumerate(config.clusters, start=1)
        for dest in range(1, len(cluster) + 1)
        for src in range(1, len(cluster) + 1)
        if dest != src
    ]


def sample_channels(config: NetworkConfig, seed: int) -> ChannelSet:
    """
    Draw i.i.d. CN(0, 1) uplink and downlink matrices for every user.

    A draw with any numerically rank-deficient matrix is discarded and redrawn
    from the next sub-seed.

    Args:
        config: Canonical network configuration
        seed: Base seed; the result is a pure function of (config, seed)

    Returns:
        ChannelSet with uplink N x M and downlink M x N matrices

    Raises:
        DegenerateChannelError: if MAX_RESAMPLE draws all failed the rank check
    """
    n = config.relay_antennas
    for attempt in range(MAX_RESAMPLE):
        rng = np.random.default_rng([seed, attempt])
        uplink = {}
        downlink = {}
        for l, k in config.users():
            m = config.antennas(l, k)
            uplink[(l, k)] = complex_gaussian(rng, (n, m))
            downlink[(l, k)] = complex_gaussian(rng, (m, n))

        if all(is_full_rank(h) for h in [*uplink.values(), *downlink.values()]):
            return ChannelSet(uplink=uplink, downlink=downlink, seed=seed, attempt=attempt)
        logger.debug("seed %d attempt %d drew a rank-deficient matrix, resampling", seed, attempt)

    raise DegenerateChannelError(
        f"no full-rank channel draw for seed {seed} after {MAX_RESAMPLE} attempts"
    )
