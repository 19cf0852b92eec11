"""Regime catalog: classify a configuration and report its achievable DoF."""

import logging
from fractions import Fraction

from ..errors import ConfigValidationError, ShapeError
from ..models import DoFReport, NetworkConfig, OptimalityStatus, PermutationRecord
from ..network import canonicalize, validate_config
from .bounds import dof_upper_bound
from .strategies import candidates, descriptor_violations

logger = logging.getLogger(__name__)

# label -> short description; every classified configuration lands on one of these
REGIMES: dict[str, str] = {
    "P1.i.C1": "N <= M_2^1: two-way relaying in cluster 1",
    "P1.i.C2.cond1": "N <= M_1^1 and N <= M_1^2: SSA in both clusters",
    "P1.i.C2.cond2.1": "M_1^1 < N <= M_1^2, M_1^1+M_2^1+M_2^2 >= 2N",
    "P1.i.C2.cond2.2": "M_1^1 < N <= M_1^2, M_1^1+M_2^1+M_2^2 < 2N: relay subset",
    "P1.i.C2.cond3.1": "M_1^2 < N <= M_1^1, M_2^1+M_1^2+M_2^2 >= 2N",
    "P1.i.C2.cond3.2": "M_1^2 < N <= M_1^1, M_2^1+M_1^2+M_2^2 < 2N",
    "P1.i.C2.cond4.1": "both M_1 < N, all antennas >= 3N",
    "P1.i.C2.cond4.2": "both M_1 < N, all antennas < 3N",
    "P1.ii.C1": "N >= 2(M_2^1+M_2^2): MAC and broadcast",
    "P1.ii.C2.cond1": "N <= M_1^1 and N <= M_1^2",
    "P1.ii.C2.cond2.1": "M_1^1 < N <= M_1^2, N >= 2M_2^1+M_2^2",
    "P1.ii.C2.cond2.2": "M_1^1 < N <= M_1^2, M_1^1 >= M_2^1+M_2^2",
    "P1.ii.C2.cond2.3": "M_1^1 < N <= M_1^2, otherwise",
    "P1.ii.C2.cond3.1": "M_1^2 < N <= M_1^1, N >= M_2^1+2M_2^2",
    "P1.ii.C2.cond3.2": "M_1^2 < N <= M_1^1, M_1^2 >= M_2^1+M_2^2",
    "P1.ii.C2.cond3.3": "M_1^2 < N <= M_1^1, otherwise",
    "P1.ii.C2.cond4.1": "both M_1 < N, both M_1 >= M_2^1+M_2^2",
    "P1.ii.C2.cond4.2": "both M_1 < N, M_1^2 >= 2M_2^1+M_2^2",
    "P1.ii.C2.cond4.3": "both M_1 < N, M_1^1 >= M_2^1+2M_2^2",
    "P1.ii.C2.cond4.4": "both M_1 < N, otherwise",
    "T3.bind-2N.two-way": "2N binds, one cluster's second user covers the relay",
    "T3.bind-2N.cond1": "2N binds, both M_1 >= N",
    "T3.bind-2N.cond2": "2N binds, M_1^1 >= N > M_1^2",
    "T3.bind-2N.cond3": "2N binds, M_1^2 >= N > M_1^1",
    "T3.bind-2N.cond4": "2N binds, both M_1 < N",
    "T3.bind-total.mac": "sum of all antennas binds and N covers it",
    "T3.bind-weak.mac": "weak-user term binds and N covers it",
    "T3.bind-weak.subset": "weak-user term binds, both strong users cover their cluster",
    "T3.bind-weak.c2ssa": "weak-user term binds, SSA in cluster 2 only",
    "T3.bind-weak.c1ssa": "weak-user term binds, SSA in cluster 1 only",
    "T3.bind-mix4.mac": "T^1 + 2W^2 binds and N covers it",
    "T3.bind-mix4.subset": "T^1 + 2W^2 binds, SSA in cluster 2",
    "T3.bind-mix5.mac": "2W^1 + T^2 binds and N covers it",
    "T3.bind-mix5.subset": "2W^1 + T^2 binds, SSA in cluster 1",
    "T3.unknown": "2x3 configuration outside the closed-form conditions",
    "T4.mac": "symmetric, N >= KLM",
    "T4.ssa": "symmetric, pairs x (2M - N) >= N",
    "T4.unknown": "symmetric configuration between the two closed-form regimes",
    "GEN.unknown": "no closed form; upper bound only",
}


def _pos(x: int) -> int:
    return max(0, x)


def _small_relay_thirds(a: int, b: int, c: int, d: int, n: int) -> Fraction:
    s = a + b + c + d
    third = min(
        Fraction(2 * s, 3),
        Fraction(4 * (a + b + d) - 2 * c, 3),
        Fraction(4 * (b + c + d) - 2 * a, 3),
    )
    return max(Fraction(_pos(c + d - n) + n), Fraction(a + b), third)


def _large_relay_thirds(a: int, b: int, c: int, d: int, n: int) -> Fraction:
    s = a + b + c + d
    third = min(
        Fraction(2 * s, 3),
        Fraction(4 * (a + b + d) - 2 * c, 3),
        Fraction(4 * (b + c + d) - 2 * a, 3),
    )
    return max(
        Fraction(n),
        Fraction(_pos(a + b - n) + n),
        Fraction(_pos(c + d - n) + n),
        third,
    )


def _two_by_two_label(config: NetworkConfig) -> str:
    (a, b), (c, d) = config.clusters
    n = config.relay_antennas
    s = a + b + c + d
    if n <= b + d:
        if n <= b:
            return "P1.i.C1"
        if n <= a and n <= c:
            return "P1.i.C2.cond1"
        if a < n <= c:
            return "P1.i.C2.cond2.1" if a + b + d >= 2 * n else "P1.i.C2.cond2.2"
        if c < n <= a:
            return "P1.i.C2.cond3.1" if b + c + d >= 2 * n else "P1.i.C2.cond3.2"
        return "P1.i.C2.cond4.1" if s >= 3 * n else "P1.i.C2.cond4.2"

    if n >= 2 * (b + d):
        return "P1.ii.C1"
    if n <= a and n <= c:
        return "P1.ii.C2.cond1"
    if a < n <= c:
        if n >= 2 * b + d:
            return "P1.ii.C2.cond2.1"
        return "P1.ii.C2.cond2.2" if a >= b + d else "P1.ii.C2.cond2.3"
    if c < n <= a:
        if n >= b + 2 * d:
            return "P1.ii.C2.cond3.1"
        return "P1.ii.C2.cond3.2" if c >= b + d else "P1.ii.C2.cond3.3"
    if a >= b + d and c >= b + d:
        return "P1.ii.C2.cond4.1"
    if c >= 2 * b + d:
        return "P1.ii.C2.cond4.2"
    if a >= b + 2 * d:
        return "P1.ii.C2.cond4.3"
    return "P1.ii.C2.cond4.4"


def _two_by_two_value(label: str, config: NetworkConfig) -> Fraction:
    (a, b), (c, d) = config.clusters
    n = config.relay_antennas
    special = {
        "P1.i.C2.cond2.2": lambda: Fraction(a + b + d),
        "P1.i.C2.cond3.2": lambda: Fraction(max(b + c + d, n + b)),
        "P1.i.C2.cond4.2": lambda: _small_relay_thirds(a, b, c, d, n),
        "P1.ii.C2.cond2.3": lambda: Fraction(max(n + d, a + b + d)),
        "P1.ii.C2.cond3.3": lambda: Fraction(max(b + c + d, n + b)),
        "P1.ii.C2.cond4.4": lambda: _large_relay_thirds(a, b, c, d, n),
    }
    if label in special:
        return special[label]()
    if label.startswith("P1.i."):
        return Fraction(2 * n)
    return Fraction(2 * (b + d))


def _two_by_three_terms(config: NetworkConfig) -> dict[str, int]:
    (a1, b1, c1), (a2, b2, c2) = config.clusters
    w1, w2 = b1 + c1, b2 + c2
    t1, t2 = a1 + w1, a2 + w2
    return {
        "2N": 2 * config.relay_antennas,
        "total": t1 + t2,
        "weak": 2 * (w1 + w2),
        "mix4": t1 + 2 * w2,
        "mix5": 2 * w1 + t2,
    }


def _two_by_three_condition(term: str, config: NetworkConfig) -> str | None:
    (a1, b1, c1), (a2, b2, c2) = config.clusters
    n = config.relay_antennas
    w1, w2 = b1 + c1, b2 + c2
    t1, t2 = a1 + w1, a2 + w2

    if term == "2N":
        if n <= max(b1, b2):
            return "T3.bind-2N.two-way"
        pairs1 = _pos(a1 + b1 - n) + _pos(a1 + c1 - n) + _pos(b1 + c1 - n)
        pairs2 = _pos(a2 + b2 - n) + _pos(a2 + c2 - n) + _pos(b2 + c2 - n)
        if a1 >= n and a2 >= n:
            return "T3.bind-2N.cond1"
        if a1 >= n and w1 + _pos(w1 - n) + pairs2 >= n:
            return "T3.bind-2N.cond2"
        if a2 >= n and a1 < n and pairs1 + w2 + _pos(w2 - n) >= n:
            return "T3.bind-2N.cond3"
        if a1 < n and a2 < n and pairs1 + pairs2 >= n:
            return "T3.bind-2N.cond4"
        return None
    if term == "total":
        return "T3.bind-total.mac" if n >= t1 + t2 else None
    if term == "weak":
        if n >= 2 * (w1 + w2):
            return "T3.bind-weak.mac"
        if a1 >= w1 + w2 and a2 >= w1 + w2:
            return "T3.bind-weak.subset"
        if n >= 2 * w1 + w2 and a2 >= 2 * w1 + w2:
            return "T3.bind-weak.c2ssa"
        if n >= w1 + 2 * w2 and a1 >= w1 + 2 * w2:
            return "T3.bind-weak.c1ssa"
        return None
    if term == "mix4":
        if n >= t1 + 2 * w2:
            return "T3.bind-mix4.mac"
        if t1 + w2 <= n and a2 >= t1 + w2:
            return "T3.bind-mix4.subset"
        return None
    if term == "mix5":
        if n >= 2 * w1 + t2:
            return "T3.bind-mix5.mac"
        if w1 + t2 <= n and a1 >= w1 + t2:
            return "T3.bind-mix5.subset"
    return None


def _two_by_three_label(config: NetworkConfig) -> str:
    terms = _two_by_three_terms(config)
    binding = min(terms.values())
    for term, value in terms.items():
        if value != binding:
            continue
        label = _two_by_three_condition(term, config)
        if label is not None:
            return label
    return "T3.unknown"


def _symmetric_label(config: NetworkConfig) -> str:
    clusters, users = config.shape
    m = config.clusters[0][0]
    n = config.relay_antennas
    pairs = clusters * users * (users - 1) // 2
    if n >= users * clusters * m:
        return "T4.mac"
    if pairs * (2 * m - n) >= n:
        return "T4.ssa"
    return "T4.unknown"


def regime_value(label: str, config: NetworkConfig) -> Fraction | None:
    """
    Achievable DoF attached to a regime label.

    Args:
        label: Regime label from REGIMES
        config: Canonical configuration the label was derived from

    Returns:
        Exact achievable value, or None for the unknown regimes
    """
    if label not in REGIMES:
        raise ValueError(f"Unknown regime label: {label}")
    if label.endswith("unknown"):
        return None
    if label.startswith("P1."):
        return _two_by_two_value(label, config)
    if label.startswith("T3."):
        return Fraction(min(_two_by_three_terms(config).values()))

    clusters, users = config.shape
    m = config.clusters[0][0]
    if label == "T4.mac":
        return Fraction(users * clusters * m)
    return Fraction(2 * config.relay_antennas)


def regime_strategy(label: str, config: NetworkConfig):
    """
    Pick the first candidate allocation that is feasible and reaches the regime value.

    Args:
        label: Regime label from REGIMES
        config: Canonical configuration

    Returns:
        StrategyDescriptor, or None when no candidate reaches the value
    """
    value = regime_value(label, config)
    if value is None:
        return None
    for candidate in candidates(label, config):
        if candidate.stream_dof != value:
            continue
        if descriptor_violations(config, candidate):
            logger.debug("candidate %s for %s is infeasible", candidate.summary(), label)
            continue
        return candidate
    logger.warning("no allocation for %s reaches %s", label, value)
    return None


def _report(
    config: NetworkConfig, label: str, permutation: PermutationRecord | None = None
) -> DoFReport:
    breakdown = dof_upper_bound(config)
    upper = Fraction(breakdown.tightest)
    value = regime_value(label, config)
    strategy = regime_strategy(label, config)

    logger.debug("%s classified as %s", config.clusters, label)
    notes = []
    if value is not None and strategy is None:
        notes.append("no constructive allocation reaches the catalog value")
    if strategy is not None and strategy.sketched:
        logger.warning("%s uses the outlined thirds-valued allocation", label)
        notes.append("thirds-valued allocation from an outlined construction")
    if permutation is not None and permutation.tie_broken:
        notes.append("cluster order set by the larger M_1 on an M_2 tie")
    if breakdown.cluster_cut < breakdown.bound:
        notes.append(f"per-cluster cut {breakdown.cluster_cut} tightens the bound {breakdown.bound}")

    optimal = (
        OptimalityStatus.OPTIMAL
        if value is not None and value == upper
        else OptimalityStatus.UNKNOWN
    )
    return DoFReport(
        upper_bound=upper,
        achievable=value,
        regime=label,
        optimal=optimal,
        strategy=strategy,
        breakdown=breakdown,
        config=config,
        permutation=permutation,
        notes=tuple(notes),
    )


def classify_2x2(config: NetworkConfig) -> DoFReport:
    """
    Classify a two-cluster two-user configuration.

    Args:
        config: Raw configuration with shape (2, 2)

    Returns:
        DoFReport on the canonical configuration

    Raises:
        ShapeError: if the configuration is not 2x2
    """
    validate_config(config)
    if config.shape != (2, 2):
        raise ShapeError(f"expected 2 clusters of 2 users, got {config.users_per_cluster}")
    canonical, permutation = canonicalize(config, catalog=True)
    return _report(canonical, _two_by_two_label(canonical), permutation)


def classify_2x3(config: NetworkConfig) -> DoFReport:
    """Classify a two-cluster three-user configuration."""
    validate_config(config)
    if config.shape != (2, 3):
        raise ShapeError(f"expected 2 clusters of 3 users, got {config.users_per_cluster}")
    canonical, permutation = canonicalize(config, catalog=False)
    return _report(canonical, _two_by_three_label(canonical), permutation)


def classify_symmetric(clusters: int, users: int, antennas: int, relay: int) -> DoFReport:
    """
    Classify an equal-antenna network of L clusters with K users each.

    Args:
        clusters: L >= 1
        users: K >= 2
        antennas: M >= 1
        relay: N >= 1

    Returns:
        DoFReport with regime T4.mac, T4.ssa or T4.unknown
    """
    for name, value, low in (
        ("clusters", clusters, 1),
        ("users", users, 2),
        ("antennas", antennas, 1),
        ("relay_antennas", relay, 1),
    ):
        if value < low:
            raise ConfigValidationError(name, f"must be >= {low}, got {value}")
    config = NetworkConfig(clusters=((antennas,) * users,) * clusters, relay_antennas=relay)
    return _report(config, _symmetric_label(config))


def classify(config: NetworkConfig) -> DoFReport:
    """
    Route a configuration to the catalog covering its shape.

    2x2 and 2x3 networks use their dedicated catalogs and other equal-antenna
    networks the symmetric one; anything else is reported with its upper
    bound only.
    """
    validate_config(config)
    shape = config.shape
    if shape == (2, 2):
        return classify_2x2(config)
    if shape == (2, 3):
        return classify_2x3(config)
    if config.is_symmetric:
        clusters, users = shape
        return classify_symmetric(
            clusters, users, config.clusters[0][0], config.relay_antennas
        )
    canonical, permutation = canonicalize(config, catalog=False)
    return _report(canonical, "GEN.unknown", permutation)


def symmetric_2x2_optimal(m1: int, m2: int, relay: int) -> Fraction | None:
    """
    Optimal DoF of [[m1, m2], [m1, m2]] wherever a closed form exists.

    Args:
        m1: Antennas of one user in each cluster
        m2: Antennas of the other user in each cluster
        relay: Relay antennas N

    Returns:
        2N or 4 min(m1, m2) when optimal, else None
    """
    big, small = max(m1, m2), min(m1, m2)
    n = relay
    if n <= 2 * small:
        if n <= big or 3 * n <= 2 * (big + small):
            return Fraction(2 * n)
        return None
    if n >= 4 * small or n <= big or big >= 2 * small:
        return Fraction(4 * small)
    return None
