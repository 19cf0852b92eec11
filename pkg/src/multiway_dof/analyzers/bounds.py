"""Closed-form DoF upper bounds and the genie-aided decodable-set schedule."""

from ..errors import ConfigValidationError
from ..models import GenieSchedule, GenieStep, NetworkConfig, UpperBoundBreakdown


def _weak_antennas(cluster: tuple[int, ...]) -> int:
    """Antennas of every user except the strongest one."""
    return sum(cluster) - max(cluster)


def cluster_cut_bound(config: NetworkConfig) -> int:
    """Sum over clusters of min(cluster total, 2 * weak users)."""
    return sum(min(sum(c), 2 * _weak_antennas(c)) for c in config.clusters)


def dof_upper_bound(config: NetworkConfig) -> UpperBoundBreakdown:
    """
    Evaluate the three-term DoF upper bound.

    The bound is min{sum of all antennas, 2 * sum of non-strongest users, 2N}.
    cluster_cut additionally applies the first two terms per cluster before
    summing, which is never looser.

    Args:
        config: Canonical network configuration

    Returns:
        UpperBoundBreakdown with exact integer terms
    """
    sum_all = config.total_antennas
    weak = 2 * sum(_weak_antennas(c) for c in config.clusters)
    relay = 2 * config.relay_antennas
    cluster_cut = cluster_cut_bound(config)

    return UpperBoundBreakdown(
        term_sum_all=sum_all,
        term_weak_users=weak,
        term_relay=relay,
        bound=min(sum_all, weak, relay),
        cluster_cut=cluster_cut,
    )


def cutset_cluster_bounds(config: NetworkConfig, cluster: int) -> list[tuple[int, int]]:
    """
    Per-user caps on the DoF a user can receive inside one cluster.

    User 1 is capped by min{M_1, N, sum_{k>=2} M_k}; every other user i by
    min{M_i, N}.

    Args:
        config: Canonical network configuration
        cluster: 1-based cluster label

    Returns:
        List of (user, cap) pairs in user order
    """
    antennas = config.clusters[cluster - 1]
    n = config.relay_antennas
    caps = [(1, min(antennas[0], n, sum(antennas[1:])))]
    caps.extend((i, min(m, n)) for i, m in enumerate(antennas[1:], start=2))
    return caps


def genie_schedule(num_users: int) -> GenieSchedule:
    """
    Build the decodable message set of the genie-aided converse.

    At step k the genie hands over {W_ik : i > k}, which lets the receiver
    decode {W_ki : i > k}. After K - 1 steps half of the cluster's messages
    are decodable.

    Args:
        num_users: Users per cluster, K >= 2

    Returns:
        GenieSchedule with |D| = K(K-1)/2
    """
    if num_users < 2:
        raise ConfigValidationError("num_users", f"needs K >= 2, got {num_users}")

    steps = []
    decodable: list[tuple[int, int]] = []
    for k in range(1, num_users):
        genie = tuple((i, k) for i in range(k + 1, num_users + 1))
        decoded = tuple((k, i) for i in range(k + 1, num_users + 1))
        steps.append(GenieStep(step=k, genie=genie, decoded=decoded))
        decodable.extend(decoded)

    return GenieSchedule(num_users=num_users, steps=tuple(steps), decodable=tuple(decodable))
