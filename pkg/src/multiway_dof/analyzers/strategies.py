"""Stream allocations (strategy descriptors) for every catalog regime."""

import math
from collections import Counter
from collections.abc import Iterable, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from ..generators.alignment import shared_dim
from ..models import NetworkConfig, StrategyDescriptor


def _pos(x: int) -> int:
    return max(0, x)


def mac_capacity(caps: Sequence[int]) -> int:
    """Streams a cluster can exchange through the relay in multiple-access fashion."""
    if not caps:
        return 0
    top = max(caps)
    rest = sum(caps) - top
    return rest + min(top, rest)


def mac_exchange(caps: Sequence[int], budget: int) -> dict[tuple[int, int], int]:
    """
    Cyclic multiple-access exchange inside one cluster.

    The strongest user is capped at the others' total, sender slots are
    listed user by user, and receivers are the same list rotated by the
    largest cap, so no user is paired with itself and every user receives
    at most as many streams as it may send.

    Args:
        caps: Per-user stream capacity, user 1 first
        budget: Maximum number of streams to allocate

    Returns:
        Dictionary mapping (dest, src) to stream count
    """
    caps = list(caps)
    if not caps:
        return {}
    top = caps.index(max(caps))
    caps[top] = min(caps[top], sum(caps) - caps[top])

    senders = [k for k, cap in enumerate(caps, start=1) for _ in range(cap)]
    shift = max(caps)
    receivers = senders[shift:] + senders[:shift]

    counts: Counter = Counter()
    for src, dest in list(zip(senders, receivers))[: max(0, budget)]:
        counts[(dest, src)] += 1
    return dict(counts)


def _aligned_load(aligned: dict) -> Counter:
    load: Counter = Counter()
    for (l, i, j), count in aligned.items():
        load[(l, i)] += count
        load[(l, j)] += count
    return load


def fill_mac(
    config: NetworkConfig,
    aligned: dict[tuple[int, int, int], int],
    relay_dimensions: int,
    order: Iterable[int],
    extension: int = 1,
) -> dict[tuple[int, int, int], int]:
    """Fill relay dimensions left over by aligned pairs with MAC streams, cluster by cluster."""
    load = _aligned_load(aligned)
    remaining = relay_dimensions - sum(aligned.values())
    mac: dict[tuple[int, int, int], int] = {}
    for l in order:
        caps = [
            extension * m - load[(l, k)]
            for k, m in enumerate(config.clusters[l - 1], start=1)
        ]
        grant = min(remaining, mac_capacity(caps))
        for (dest, src), count in mac_exchange(caps, grant).items():
            mac[(l, dest, src)] = count
        remaining -= grant
    return mac


def descriptor_violations(config: NetworkConfig, descriptor: StrategyDescriptor) -> list[str]:
    """
    Check a descriptor against the structural feasibility rules.

    Args:
        config: Canonical network configuration
        descriptor: Stream allocation to check

    Returns:
        List of human-readable violations; empty when feasible
    """
    t = descriptor.extension_factor
    p = descriptor.relay_dimensions
    problems = []
    if p > t * config.relay_antennas:
        problems.append(f"relay dimensions {p} exceed {t} x N = {t * config.relay_antennas}")
    if descriptor.slots_used > p:
        problems.append(f"{descriptor.slots_used} streams at the relay exceed {p} dimensions")

    for l, i, j in [*descriptor.aligned, *descriptor.mac]:
        size = len(config.clusters[l - 1]) if 1 <= l <= config.num_clusters else 0
        if not (1 <= i <= size and 1 <= j <= size):
            problems.append(f"stream key ({l}, {i}, {j}) outside the configuration")
    if problems:
        return problems

    for (l, i, j), count in descriptor.aligned.items():
        available = shared_dim(p, t * config.antennas(l, i), t * config.antennas(l, j))
        if count > available:
            problems.append(
                f"cluster {l} pair ({i},{j}) aligns {count} > shared dimension {available}"
            )
    for l, k in config.users():
        sent, received = descriptor.user_load(l, k)
        limit = t * config.antennas(l, k)
        if max(sent, received) > limit:
            problems.append(
                f"user ({l},{k}) carries {max(sent, received)} streams > {limit} antennas"
            )
    return problems


def pair_allocation(
    config: NetworkConfig,
    pairs: Sequence[tuple[int, int, int]],
    relay_dimensions: int,
) -> dict[tuple[int, int, int], int]:
    """
    Maximise the aligned dimensions over user pairs as a small integer program.

    Each pair is limited by its shared dimension, each user by its antennas
    and the total by the relay dimensions.
    """
    n = len(pairs)
    upper = [
        shared_dim(relay_dimensions, config.antennas(l, i), config.antennas(l, j))
        for l, i, j in pairs
    ]
    users = config.users()
    rows = [[1.0 if (l, k) in ((pl, i), (pl, j)) else 0.0 for pl, i, j in pairs] for l, k in users]
    limits = [config.antennas(l, k) for l, k in users]
    rows.append([1.0] * n)
    limits.append(relay_dimensions)

    result = milp(
        c=-np.ones(n),
        integrality=np.ones(n),
        bounds=Bounds(np.zeros(n), np.array(upper, dtype=float)),
        constraints=LinearConstraint(np.array(rows), -np.inf, np.array(limits, dtype=float)),
    )
    if result.x is None:
        return {}
    return {pair: int(round(x)) for pair, x in zip(pairs, result.x)}


def symmetric_pair_split(
    clusters: int, users: int, antennas: int, relay: int
) -> dict[tuple[int, int, int], int]:
    """
    Spread N aligned dimensions over the LK(K-1)/2 user pairs.

    With n = N / pairs fractional, every pair but the last takes ceil(n) and
    the last takes the remainder; when that remainder is negative or some
    user would exceed its antennas, a balanced floor/ceil split is used,
    handing the extra dimensions to the least-loaded pairs first.
    """
    pairs = [
        (l, i, j)
        for l in range(1, clusters + 1)
        for i in range(1, users + 1)
        for j in range(i + 1, users + 1)
    ]
    count = len(pairs)
    if relay % count == 0:
        return {pair: relay // count for pair in pairs}

    ceil = math.ceil(relay / count)
    last = relay - (count - 1) * ceil
    if last >= 0:
        alloc = {pair: ceil for pair in pairs[:-1]}
        alloc[pairs[-1]] = last
        load = _aligned_load(alloc)
        if max(load.values()) <= antennas:
            return alloc

    base, extra = divmod(relay, count)
    alloc = {pair: base for pair in pairs}
    load = _aligned_load(alloc)
    for _ in range(extra):
        pick = min(
            (pair for pair in pairs if alloc[pair] == base),
            key=lambda p: (load[(p[0], p[1])] + load[(p[0], p[2])], pairs.index(p)),
        )
        alloc[pick] += 1
        load[(pick[0], pick[1])] += 1
        load[(pick[0], pick[2])] += 1
    return alloc


# -- two clusters, two users ------------------------------------------------


def _ssa_greedy(
    config: NetworkConfig, relay_dimensions: int, order: Iterable[int], extension: int = 1
) -> dict[tuple[int, int, int], int]:
    aligned = {}
    used = 0
    for l in order:
        a, b = config.clusters[l - 1]
        take = min(
            shared_dim(relay_dimensions, extension * a, extension * b),
            relay_dimensions - used,
        )
        aligned[(l, 1, 2)] = take
        used += take
    return aligned


def _ssa(relay_dimensions: int, counts: dict[int, int]) -> StrategyDescriptor:
    return StrategyDescriptor(
        relay_dimensions=relay_dimensions,
        aligned={(l, 1, 2): count for l, count in counts.items()},
    )


def _ssa_mac(
    config: NetworkConfig,
    relay_dimensions: int,
    aligned: dict[tuple[int, int, int], int],
    order: Iterable[int],
) -> StrategyDescriptor:
    return StrategyDescriptor(
        relay_dimensions=relay_dimensions,
        aligned=aligned,
        mac=fill_mac(config, aligned, relay_dimensions, order),
    )


def _subset(config: NetworkConfig, total: int, order: Iterable[int]) -> StrategyDescriptor:
    """Relay limited to total/2 antennas, on a two-symbol extension when total is odd."""
    extension = 1 if total % 2 == 0 else 2
    relay_dimensions = total * extension // 2
    return StrategyDescriptor(
        relay_dimensions=relay_dimensions,
        extension_factor=extension,
        aligned=_ssa_greedy(config, relay_dimensions, order, extension),
    )


def _thirds(config: NetworkConfig) -> StrategyDescriptor:
    """Relay limited to a third of all user antennas, on a three-symbol extension when needed."""
    total = config.total_antennas
    extension = 1 if total % 3 == 0 else 3
    relay_dimensions = total * extension // 3
    return StrategyDescriptor(
        relay_dimensions=relay_dimensions,
        extension_factor=extension,
        aligned=_ssa_greedy(config, relay_dimensions, (1, 2), extension),
        sketched=True,
    )


def two_by_two_candidates(label: str, config: NetworkConfig) -> list[StrategyDescriptor]:
    """Candidate allocations for a 2x2 regime, in preference order."""
    (a, b), (c, d) = config.clusters
    n = config.relay_antennas

    def hybrid(p, counts, order):
        return _ssa_mac(config, p, {(l, 1, 2): x for l, x in counts.items()}, order)

    table = {
        "P1.i.C1": lambda: [_ssa(n, {1: n})],
        "P1.i.C2.cond1": lambda: [_ssa(n, {1: b, 2: n - b})],
        "P1.i.C2.cond2.1": lambda: [_ssa(n, {1: a + b - n, 2: 2 * n - a - b})],
        "P1.i.C2.cond2.2": lambda: [_subset(config, a + b + d, (2, 1))],
        "P1.i.C2.cond3.1": lambda: [_ssa(n, {1: b, 2: n - b})],
        "P1.i.C2.cond3.2": lambda: [
            _subset(config, b + c + d, (1, 2)),
            hybrid(n, {1: b}, (2, 1)),
        ],
        "P1.i.C2.cond4.1": lambda: [_ssa(n, {1: a + b - n, 2: 2 * n - a - b})],
        "P1.i.C2.cond4.2": lambda: [
            hybrid(n, {2: _pos(c + d - n)}, (1, 2)),
            hybrid(n, {1: _pos(a + b - n)}, (2, 1)),
            _thirds(config),
        ],
        "P1.ii.C1": lambda: [hybrid(2 * (b + d), {}, (1, 2))],
        "P1.ii.C2.cond1": lambda: [_ssa(n, {1: b, 2: d})],
        "P1.ii.C2.cond2.1": lambda: [hybrid(2 * b + d, {2: d}, (1,))],
        "P1.ii.C2.cond2.2": lambda: [_ssa(b + d, {1: b, 2: d})],
        "P1.ii.C2.cond2.3": lambda: [
            hybrid(n, {2: d}, (1,)),
            _subset(config, a + b + d, (2, 1)),
        ],
        "P1.ii.C2.cond3.1": lambda: [hybrid(b + 2 * d, {1: b}, (2,))],
        "P1.ii.C2.cond3.2": lambda: [_ssa(b + d, {1: b, 2: d})],
        "P1.ii.C2.cond3.3": lambda: [
            hybrid(n, {1: b}, (2,)),
            _subset(config, b + c + d, (1, 2)),
        ],
        "P1.ii.C2.cond4.1": lambda: [_ssa(b + d, {1: b, 2: d})],
        "P1.ii.C2.cond4.2": lambda: [hybrid(2 * b + d, {2: d}, (1,))],
        "P1.ii.C2.cond4.3": lambda: [hybrid(b + 2 * d, {1: b}, (2,))],
        "P1.ii.C2.cond4.4": lambda: [
            hybrid(n, {}, (1, 2)),
            hybrid(n, {1: _pos(a + b - n)}, (2, 1)),
            hybrid(n, {2: _pos(c + d - n)}, (1, 2)),
            _thirds(config),
        ],
    }
    build = table.get(label)
    return build() if build else []


# -- two clusters, three users ------------------------------------------------

TWO_BY_THREE_PAIRS = [(1, 1, 2), (2, 1, 2), (1, 1, 3), (2, 1, 3), (1, 2, 3), (2, 2, 3)]


def _strong_pairs(config: NetworkConfig, clusters: Iterable[int]) -> dict[tuple[int, int, int], int]:
    """Users 2 and 3 each align all their antennas with user 1."""
    aligned = {}
    for l in clusters:
        _, m2, m3 = config.clusters[l - 1]
        aligned[(l, 1, 2)] = m2
        aligned[(l, 1, 3)] = m3
    return aligned


def two_by_three_candidates(label: str, config: NetworkConfig) -> list[StrategyDescriptor]:
    """Candidate allocations for a 2x3 regime."""
    (a1, b1, c1), (a2, b2, c2) = config.clusters
    n = config.relay_antennas
    w1, w2 = b1 + c1, b2 + c2
    t1, t2 = a1 + w1, a2 + w2

    def mac_only(p):
        return _ssa_mac(config, p, {}, (1, 2))

    if label == "T3.bind-2N.two-way":
        l = 1 if b1 >= n else 2
        return [_ssa(n, {l: n})]
    if label.startswith("T3.bind-2N.cond"):
        return [StrategyDescriptor(
            relay_dimensions=n, aligned=pair_allocation(config, TWO_BY_THREE_PAIRS, n)
        )]

    table = {
        "T3.bind-total.mac": lambda: [mac_only(t1 + t2)],
        "T3.bind-weak.mac": lambda: [mac_only(2 * (w1 + w2))],
        "T3.bind-weak.subset": lambda: [StrategyDescriptor(
            relay_dimensions=w1 + w2, aligned=_strong_pairs(config, (1, 2))
        )],
        "T3.bind-weak.c2ssa": lambda: [
            _ssa_mac(config, 2 * w1 + w2, _strong_pairs(config, (2,)), (1,))
        ],
        "T3.bind-weak.c1ssa": lambda: [
            _ssa_mac(config, w1 + 2 * w2, _strong_pairs(config, (1,)), (2,))
        ],
        "T3.bind-mix4.mac": lambda: [mac_only(t1 + 2 * w2)],
        "T3.bind-mix4.subset": lambda: [
            _ssa_mac(config, t1 + w2, _strong_pairs(config, (2,)), (1,))
        ],
        "T3.bind-mix5.mac": lambda: [mac_only(2 * w1 + t2)],
        "T3.bind-mix5.subset": lambda: [
            _ssa_mac(config, w1 + t2, _strong_pairs(config, (1,)), (2,))
        ],
    }
    build = table.get(label)
    return build() if build else []


# -- symmetric L clusters, K users ---------------------------------------------


def symmetric_candidates(label: str, config: NetworkConfig) -> list[StrategyDescriptor]:
    """Candidate allocations for the symmetric L x K regimes."""
    clusters, users = config.shape
    antennas = config.clusters[0][0]
    n = config.relay_antennas
    if label == "T4.mac":
        total = clusters * users * antennas
        return [_ssa_mac(config, total, {}, range(1, clusters + 1))]
    if label == "T4.ssa":
        return [StrategyDescriptor(
            relay_dimensions=n,
            aligned=symmetric_pair_split(clusters, users, antennas, n),
        )]
    return []


def candidates(label: str, config: NetworkConfig) -> list[StrategyDescriptor]:
    """All candidate allocations for a regime label."""
    if label.startswith("P1."):
        return two_by_two_candidates(label, config)
    if label.startswith("T3."):
        return two_by_three_candidates(label, config)
    if label.startswith("T4."):
        return symmetric_candidates(label, config)
    return []
