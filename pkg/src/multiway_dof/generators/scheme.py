"""Constructive transmission schemes: beamformers, relay decode/precode and receive filters."""

import logging

import numpy as np
from scipy.linalg import null_space, pinv, qr

from ..analyzers.strategies import descriptor_violations
from ..errors import DegenerateChannelError, IllConditionedError, PlanError
from ..models import (
    ChannelSet,
    MessageId,
    NetworkConfig,
    RelaySlot,
    StrategyDescriptor,
    StreamInfo,
    TransmissionScheme,
)
from ..network import MAX_RESAMPLE, sample_channels
from ..utils.linalg import complex_gaussian, condition_number
from .alignment import receiver_filters, shared_subspace

logger = logging.getLogger(__name__)

COND_MAX = 1e10
RESEED_STRIDE = 1_000_003


def relay_subspace(
    relay_antennas: int, descriptor: StrategyDescriptor, rng: np.random.Generator
) -> np.ndarray:
    """
    Rows spanning the relay dimensions a descriptor uses.

    Without extension these are the first P relay antennas. Over T channel
    uses the extended channel is block diagonal, so a random orthonormal
    P-dimensional subspace of the T*N extended space is used instead of a
    row subset.
    """
    t = descriptor.extension_factor
    p = descriptor.relay_dimensions
    if t == 1:
        return np.eye(relay_antennas, dtype=complex)[:p]
    q, _ = qr(complex_gaussian(rng, (t * relay_antennas, p)), mode="economic")
    return q.conj().T


def _complement(vectors: list[np.ndarray], dim: int) -> np.ndarray:
    """Unit vector orthogonal to every vector given."""
    if not vectors:
        return np.eye(dim, 1, dtype=complex)[:, 0]
    basis = null_space(np.array(vectors).conj())
    if basis.shape[1] == 0:
        raise PlanError(f"no free dimension left in a {dim}-dimensional user space")
    return basis[:, 0]


def build_scheme(
    config: NetworkConfig,
    descriptor: StrategyDescriptor,
    channels: ChannelSet,
) -> TransmissionScheme:
    """
    Turn a stream allocation into beamformers, relay processing and receive filters.

    Aligned pairs get their uplink beams from shared_subspace and their
    receive filters from receiver_filters on the effective channels; MAC
    streams use directions orthogonal to the sender's and receiver's
    already-used ones. The relay zero-forces the stacked slot directions
    on the uplink and precodes with the right inverse of the stacked
    effective receive rows on the downlink.

    Args:
        config: Canonical network configuration
        descriptor: Feasible stream allocation
        channels: Channels sampled for config

    Returns:
        TransmissionScheme ready for simulation

    Raises:
        PlanError: if the descriptor violates a feasibility rule
        IllConditionedError: if a stacked relay matrix cannot be inverted reliably
    """
    violations = descriptor_violations(config, descriptor)
    if violations:
        raise PlanError("infeasible strategy: " + "; ".join(violations))

    t = descriptor.extension_factor
    p = descriptor.relay_dimensions
    rng = np.random.default_rng([channels.seed, channels.attempt, 1])

    subspace = relay_subspace(config.relay_antennas, descriptor, rng)
    eye_t = np.eye(t, dtype=complex)
    uplink = {
        user: subspace @ np.kron(eye_t, channels.uplink[user]) for user in config.users()
    }
    downlink = {
        user: np.kron(eye_t, channels.downlink[user]) @ subspace.conj().T
        for user in config.users()
    }

    columns: dict[tuple[int, int], list[np.ndarray]] = {user: [] for user in config.users()}
    rows: dict[tuple[int, int], list[np.ndarray]] = {user: [] for user in config.users()}
    slots: list[RelaySlot] = []
    streams: list[StreamInfo] = []
    directions: list[np.ndarray] = []
    receive_rows: list[np.ndarray] = []
    align_residual = 0.0
    filter_residual = 0.0

    def add_stream(message: MessageId, slot: int, beam: np.ndarray, row: np.ndarray) -> None:
        sender = (message.cluster, message.src)
        receiver = (message.cluster, message.dest)
        streams.append(StreamInfo(
            index=len(streams),
            message=message,
            slot=slot,
            beam_column=len(columns[sender]),
            filter_row=len(rows[receiver]),
        ))
        columns[sender].append(beam)
        rows[receiver].append(row)

    for (l, i, j), count in sorted(descriptor.aligned.items()):
        sub = shared_subspace(uplink[(l, i)], uplink[(l, j)], count, rng)
        filters = receiver_filters(downlink[(l, i)], downlink[(l, j)], count, rng)
        align_residual = max(align_residual, sub.residual)
        filter_residual = max(filter_residual, filters.residual)
        for c in range(count):
            to_j = MessageId(cluster=l, dest=j, src=i)
            to_i = MessageId(cluster=l, dest=i, src=j)
            slot = len(slots)
            slots.append(RelaySlot(kind="aligned", messages=(to_j, to_i)))
            directions.append(sub.directions[:, c])
            receive_rows.append(filters.directions[c])
            add_stream(to_j, slot, sub.u[:, c], filters.filters2[c])
            add_stream(to_i, slot, sub.w[:, c], filters.filters1[c])

    for (l, dest, src), count in sorted(descriptor.mac.items()):
        for _ in range(count):
            message = MessageId(cluster=l, dest=dest, src=src)
            beam = _complement(columns[(l, src)], t * config.antennas(l, src))
            row = _complement(rows[(l, dest)], t * config.antennas(l, dest))
            slot = len(slots)
            slots.append(RelaySlot(kind="mac", messages=(message,)))
            directions.append(uplink[(l, src)] @ beam)
            receive_rows.append(row @ downlink[(l, dest)])
            add_stream(message, slot, beam, row)

    n_slots = len(slots)
    if n_slots:
        stacked = np.column_stack(directions)
        effective = np.vstack(receive_rows)
    else:
        stacked = np.zeros((p, 0), dtype=complex)
        effective = np.zeros((0, p), dtype=complex)

    decode_condition = condition_number(stacked)
    precode_condition = condition_number(effective)
    logger.debug(
        "scheme with %d slots: decode cond %.2e, precode cond %.2e",
        n_slots, decode_condition, precode_condition,
    )
    if decode_condition > COND_MAX:
        raise IllConditionedError("stacked relay direction matrix", decode_condition)
    if precode_condition > COND_MAX:
        raise IllConditionedError("stacked effective receive matrix", precode_condition)

    def stack_columns(user):
        m = t * config.antennas(*user)
        return np.column_stack(columns[user]) if columns[user] else np.zeros((m, 0), dtype=complex)

    def stack_rows(user):
        m = t * config.antennas(*user)
        return np.vstack(rows[user]) if rows[user] else np.zeros((0, m), dtype=complex)

    return TransmissionScheme(
        config=config,
        descriptor=descriptor,
        seed=channels.seed,
        relay_subspace=subspace,
        effective_uplink=uplink,
        effective_downlink=downlink,
        beamformers={user: stack_columns(user) for user in config.users()},
        receive_filters={user: stack_rows(user) for user in config.users()},
        slots=tuple(slots),
        streams=tuple(streams),
        relay_directions=stacked,
        relay_decode=pinv(stacked) if n_slots else np.zeros((0, p), dtype=complex),
        effective_receive=effective,
        relay_precode=pinv(effective) if n_slots else np.zeros((p, 0), dtype=complex),
        alignment_residual=align_residual,
        filter_residual=filter_residual,
        decode_condition=decode_condition,
        precode_condition=precode_condition,
    )


def build_scheme_resampling(
    config: NetworkConfig,
    descriptor: StrategyDescriptor,
    seed: int,
    max_attempts: int = MAX_RESAMPLE,
) -> tuple[TransmissionScheme, ChannelSet]:
    """
    Sample channels and build a scheme, redrawing on ill-conditioned draws.

    Args:
        config: Canonical network configuration
        descriptor: Feasible stream allocation
        seed: Base seed; attempt a uses seed + a * RESEED_STRIDE
        max_attempts: Number of channel draws to try

    Returns:
        Tuple of (scheme, channels it was built on)
    """
    last_error: Exception | None = None
    for attempt in range(max_attempts):
        channels = sample_channels(config, seed + attempt * RESEED_STRIDE)
        try:
            return build_scheme(config, descriptor, channels), channels
        except (IllConditionedError, DegenerateChannelError) as e:
            logger.warning("seed %d attempt %d: %s", seed, attempt, e)
            last_error = e
    raise last_error
