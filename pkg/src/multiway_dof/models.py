"""Data models for Multiway DoF."""

from enum import Enum
from fractions import Fraction
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .utils.formatting import format_rational


def _as_fraction(value):
    if value is None or isinstance(value, Fraction):
        return value
    return Fraction(value)


class NetworkConfig(BaseModel):
    """Antenna counts of an L-cluster multi-way relay network.

    Cluster and user labels are 1-based everywhere in the public API.
    """

    model_config = ConfigDict(frozen=True)

    clusters: tuple[tuple[int, ...], ...]  # e.g. ((3, 2), (2, 2))
    relay_antennas: int  # e.g. 3

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)

    @property
    def users_per_cluster(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.clusters)

    @property
    def total_antennas(self) -> int:
        return sum(sum(c) for c in self.clusters)

    @property
    def shape(self) -> tuple[int, int] | None:
        """(L, K) when every cluster has the same number of users."""
        sizes = set(self.users_per_cluster)
        if len(sizes) != 1:
            return None
        return self.num_clusters, sizes.pop()

    @property
    def is_symmetric(self) -> bool:
        """True when every user in every cluster has the same antenna count."""
        counts = {m for c in self.clusters for m in c}
        return self.shape is not None and len(counts) == 1

    def antennas(self, cluster: int, user: int) -> int:
        """Antenna count M_user^cluster (1-based labels)."""
        return self.clusters[cluster - 1][user - 1]

    def users(self) -> list[tuple[int, int]]:
        """All (cluster, user) labels in cluster-major order."""
        return [
            (l + 1, k + 1)
            for l, cluster in enumerate(self.clusters)
            for k in range(len(cluster))
        ]


class MessageId(BaseModel):
    """Message W_{dest,src}^cluster sent from user src to user dest."""

    model_config = ConfigDict(frozen=True)

    cluster: int  # e.g. 1
    dest: int  # e.g. 2
    src: int  # e.g. 1

    @model_validator(mode="after")
    def _distinct_users(self) -> "MessageId":
        if self.dest == self.src:
            raise ValueError(f"message must have dest != src, got {self.dest}")
        if min(self.cluster, self.dest, self.src) < 1:
            raise ValueError("cluster and user labels are 1-based")
        return self

    def label(self) -> str:
        return f"W[{self.cluster}]({self.dest}<-{self.src})"


class PermutationRecord(BaseModel):
    """How a raw configuration was reordered into canonical form."""

    model_config = ConfigDict(frozen=True)

    cluster_order: tuple[int, ...]  # canonical position -> original cluster, e.g. (2, 1)
    user_orders: tuple[tuple[int, ...], ...]  # per canonical cluster, canonical user -> original user
    tie_broken: bool = False  # cluster order decided by the M_1 tie-break rule

    @property
    def is_identity(self) -> bool:
        return self.cluster_order == tuple(range(1, len(self.cluster_order) + 1)) and all(
            order == tuple(range(1, len(order) + 1)) for order in self.user_orders
        )

    def to_original(self, message: MessageId) -> MessageId:
        """Map a canonical message label back to the raw configuration's labels."""
        users = self.user_orders[message.cluster - 1]
        return MessageId(
            cluster=self.cluster_order[message.cluster - 1],
            dest=users[message.dest - 1],
            src=users[message.src - 1],
        )


class ChannelSet(BaseModel):
    """One sampled realization of all uplink and downlink channel matrices."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    uplink: dict[tuple[int, int], np.ndarray]  # (l, k) -> N x M_k^l
    downlink: dict[tuple[int, int], np.ndarray]  # (l, k) -> M_k^l x N
    seed: int
    attempt: int = 0  # sub-seed that produced a full-rank draw


class UpperBoundBreakdown(BaseModel):
    """Terms of the three-term DoF upper bound."""

    model_config = ConfigDict(frozen=True)

    term_sum_all: int  # sum of every user's antennas
    term_weak_users: int  # 2 * sum of all but the strongest user per cluster
    term_relay: int  # 2N
    bound: int
    cluster_cut: int  # sum over clusters of min(cluster total, 2 * weak users)

    @model_validator(mode="after")
    def _bound_is_min(self) -> "UpperBoundBreakdown":
        expected = min(self.term_sum_all, self.term_weak_users, self.term_relay)
        if self.bound != expected:
            raise ValueError(f"bound {self.bound} != min of terms {expected}")
        return self

    @property
    def tightest(self) -> int:
        """Three-term bound intersected with the per-cluster cut."""
        return min(self.bound, self.cluster_cut)


class GenieStep(BaseModel):
    """One step of the genie-aided decoding argument."""

    model_config = ConfigDict(frozen=True)

    step: int
    genie: tuple[tuple[int, int], ...]  # (dest, src) pairs handed over as side information
    decoded: tuple[tuple[int, int], ...]  # (dest, src) pairs decoded at this step


class GenieSchedule(BaseModel):
    """Decodable message set of one cluster in the genie-aided bound."""

    model_config = ConfigDict(frozen=True)

    num_users: int
    steps: tuple[GenieStep, ...]
    decodable: tuple[tuple[int, int], ...]  # (dest k, src i) with k < i

    @property
    def mirror(self) -> tuple[tuple[int, int], ...]:
        return tuple((src, dest) for dest, src in self.decodable)


class StrategyDescriptor(BaseModel):
    """Stream allocation of a transmission strategy.

    relay_dimensions counts dimensions of the (possibly symbol-extended)
    relay space, so the physical antenna use is relay_dimensions / extension_factor.
    """

    model_config = ConfigDict(frozen=True)

    relay_dimensions: int  # e.g. 5 with extension_factor 2 means 5/2 antennas
    extension_factor: int = 1
    aligned: dict[tuple[int, int, int], int] = Field(default_factory=dict)  # (l, i, j), i < j
    mac: dict[tuple[int, int, int], int] = Field(default_factory=dict)  # (l, dest, src)
    sketched: bool = False  # thirds-valued allocation from an outlined, not fully derived, construction

    @field_validator("aligned", "mac")
    @classmethod
    def _drop_empty(cls, value: dict) -> dict:
        return {key: count for key, count in value.items() if count > 0}

    @model_validator(mode="after")
    def _check_keys(self) -> "StrategyDescriptor":
        if self.extension_factor < 1:
            raise ValueError("extension_factor must be >= 1")
        for l, i, j in self.aligned:
            if not i < j:
                raise ValueError(f"aligned pair ({l}, {i}, {j}) must have i < j")
        for l, dest, src in self.mac:
            if dest == src:
                raise ValueError(f"MAC stream ({l}, {dest}, {src}) sent to itself")
        return self

    @property
    def relay_antennas_used(self) -> Fraction:
        return Fraction(self.relay_dimensions, self.extension_factor)

    @property
    def slots_used(self) -> int:
        return sum(self.aligned.values()) + sum(self.mac.values())

    @property
    def stream_dof(self) -> Fraction:
        """Interference-free streams per channel use."""
        streams = 2 * sum(self.aligned.values()) + sum(self.mac.values())
        return Fraction(streams, self.extension_factor)

    @property
    def mac_per_user(self) -> dict[tuple[int, int], int]:
        """MAC streams sent by each (cluster, user)."""
        totals: dict[tuple[int, int], int] = {}
        for (l, _dest, src), count in self.mac.items():
            totals[(l, src)] = totals.get((l, src), 0) + count
        return totals

    def user_load(self, cluster: int, user: int) -> tuple[int, int]:
        """(streams sent, streams received) by one user."""
        aligned = sum(
            count for (l, i, j), count in self.aligned.items()
            if l == cluster and user in (i, j)
        )
        sent = sum(c for (l, _d, s), c in self.mac.items() if l == cluster and s == user)
        received = sum(c for (l, d, _s), c in self.mac.items() if l == cluster and d == user)
        return aligned + sent, aligned + received

    @property
    def kind(self) -> str:
        clusters = {key[0] for key in self.aligned} | {key[0] for key in self.mac}
        if not self.aligned and not self.mac:
            return "idle"
        if not self.mac:
            return "two-way-rc" if len(clusters) == 1 and len(self.aligned) == 1 else "ssa"
        if not self.aligned:
            return "mac+bc"
        return "ssa+mac"

    def summary(self) -> str:
        parts = [
            f"{self.kind}",
            f"relay antennas {format_rational(self.relay_antennas_used)}",
        ]
        if self.extension_factor > 1:
            parts.append(f"{self.extension_factor}-symbol extension")
        for (l, i, j), count in sorted(self.aligned.items()):
            parts.append(f"cluster {l} SSA({i},{j})={count}")
        for (l, dest, src), count in sorted(self.mac.items()):
            parts.append(f"cluster {l} MAC({src}->{dest})={count}")
        if self.sketched:
            parts.append("sketched construction")
        return ", ".join(parts)


class OptimalityStatus(str, Enum):
    """Whether the achievable value is known to meet the upper bound."""

    OPTIMAL = "optimal"
    # No catalog regime has a proven gap yet; classify never returns this.
    SUBOPTIMAL_KNOWN_GAP = "suboptimal-known-gap"
    UNKNOWN = "unknown"


class DoFReport(BaseModel):
    """Upper bound, catalog regime and achievable DoF of one configuration."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    upper_bound: Fraction
    achievable: Optional[Fraction] = None
    regime: str  # e.g. "P1.i.C2.cond3.1"
    optimal: OptimalityStatus
    strategy: Optional[StrategyDescriptor] = None
    breakdown: UpperBoundBreakdown
    config: NetworkConfig  # canonical form
    permutation: Optional[PermutationRecord] = None
    notes: tuple[str, ...] = ()

    @field_validator("upper_bound", "achievable", mode="before")
    @classmethod
    def _coerce_fraction(cls, value):
        return _as_fraction(value)

    @model_validator(mode="after")
    def _consistent(self) -> "DoFReport":
        if self.achievable is not None and self.achievable > self.upper_bound:
            raise ValueError(
                f"achievable {self.achievable} exceeds upper bound {self.upper_bound}"
            )
        reaches = self.achievable is not None and self.achievable == self.upper_bound
        if reaches != (self.optimal is OptimalityStatus.OPTIMAL):
            raise ValueError("optimal status must match achievable == upper_bound")
        return self


class SharedSubspace(BaseModel):
    """Aligned relay directions with their per-user preimages.

    Columns of directions, u and w are the vectors q_i, u_i and w_i with
    h1 @ u_i == h2 @ w_i == q_i.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dimension: int
    directions: np.ndarray  # p x d
    u: np.ndarray  # q1 x d
    w: np.ndarray  # q2 x d
    residual: float


class ReceiverFilters(BaseModel):
    """Receive filters making two users present identical effective rows."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dimension: int
    filters1: np.ndarray  # d x m1, rows u_{1,i}^T
    filters2: np.ndarray  # d x m2, rows u_{2,i}^T
    directions: np.ndarray  # d x p, rows g_i^T
    residual: float


class RelaySlot(BaseModel):
    """One relay dimension and the message(s) it carries."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["aligned", "mac"]
    messages: tuple[MessageId, ...]  # two for aligned slots, one for MAC


class StreamInfo(BaseModel):
    """One message stream and where it lives in the scheme."""

    model_config = ConfigDict(frozen=True)

    index: int
    message: MessageId
    slot: int  # relay slot carrying the stream
    beam_column: int  # column of the sender's beamforming matrix
    filter_row: int  # row of the destination's receive-filter matrix


class TransmissionScheme(BaseModel):
    """Explicit beamformers, relay matrices and receive filters."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: NetworkConfig
    descriptor: StrategyDescriptor
    seed: int
    relay_subspace: np.ndarray  # P x (T*N) rows spanning the relay dimensions used
    effective_uplink: dict[tuple[int, int], np.ndarray]  # (l, k) -> P x T*M
    effective_downlink: dict[tuple[int, int], np.ndarray]  # (l, k) -> T*M x P
    beamformers: dict[tuple[int, int], np.ndarray]  # (l, k) -> T*M x streams sent
    receive_filters: dict[tuple[int, int], np.ndarray]  # (l, k) -> streams received x T*M
    slots: tuple[RelaySlot, ...]
    streams: tuple[StreamInfo, ...]
    relay_directions: np.ndarray  # P x slots
    relay_decode: np.ndarray  # slots x P
    effective_receive: np.ndarray  # slots x P
    relay_precode: np.ndarray  # P x slots
    alignment_residual: float
    filter_residual: float
    decode_condition: float
    precode_condition: float

    @property
    def extension_factor(self) -> int:
        return self.descriptor.extension_factor

    @property
    def relay_antennas_used(self) -> Fraction:
        return self.descriptor.relay_antennas_used

    @property
    def stream_dof(self) -> Fraction:
        return Fraction(len(self.streams), self.extension_factor)


class VerificationReport(BaseModel):
    """Outcome of a noiseless end-to-end decode."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    decoded: dict[int, complex]
    residuals: dict[int, float]
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def failures(self) -> list[int]:
        return [s for s, r in sorted(self.residuals.items()) if r > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures


class SymmetricLayout(BaseModel):
    """Sweep template for equal-antenna networks; values are ints or variable names."""

    model_config = ConfigDict(frozen=True)

    clusters: int | str  # e.g. "L"
    users: int | str  # e.g. 3
    antennas: int | str  # e.g. "M"


class SweepSpec(BaseModel):
    """Grid of network configurations to classify."""

    model_config = ConfigDict(frozen=True)

    clusters: Optional[tuple[tuple[int | str, ...], ...]] = None  # e.g. (("M1", "M2"), ("M1", "M2"))
    symmetric: Optional[SymmetricLayout] = None
    relay_antennas: int | str  # e.g. 16 or "N"
    ranges: dict[str, tuple[int, int]]  # inclusive, in declared order
    seeds: tuple[int, ...] = (0,)
    p_lo: float = 1e4  # slope powers when verify is set
    p_hi: float = 1e6  # at least 100 x p_lo
    verify: bool = False  # also build and verify a scheme per seed

    @property
    def num_cells(self) -> int:
        cells = 1
        for lo, hi in self.ranges.values():
            cells *= hi - lo + 1
        return cells

