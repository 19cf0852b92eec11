"""Noiseless end-to-end verification and finite-SNR rate evaluation of built schemes."""

import logging
from collections import defaultdict

import numpy as np

from ..errors import DegenerateChannelError, PlanError, PreconditionError, VerificationError
from ..models import ChannelSet, DoFReport, SweepSpec, TransmissionScheme, VerificationReport
from .scheme import build_scheme_resampling

logger = logging.getLogger(__name__)

DECODE_RTOL = 1e-6


def _slot_members(scheme: TransmissionScheme) -> dict[int, list[int]]:
    members: dict[int, list[int]] = defaultdict(list)
    for stream in scheme.streams:
        members[stream.slot].append(stream.index)
    return members


def simulate_noiseless(
    scheme: TransmissionScheme, messages: dict[int, complex]
) -> VerificationReport:
    """
    Push one symbol per stream through uplink, relay and downlink without noise.

    The relay recovers one value per slot (the sum of both symbols on an
    aligned slot), and each destination removes its own contribution to
    aligned slots before reading its intended symbol.

    Args:
        scheme: Built transmission scheme
        messages: Stream index -> transmitted symbol

    Returns:
        VerificationReport with decoded symbols and relative residuals
    """
    expected = {stream.index for stream in scheme.streams}
    if set(messages) != expected:
        raise PreconditionError(
            f"need exactly one symbol per stream 0..{len(expected) - 1}, got keys {sorted(messages)}"
        )

    p = scheme.descriptor.relay_dimensions
    y = np.zeros(p, dtype=complex)
    for stream in scheme.streams:
        sender = (stream.message.cluster, stream.message.src)
        beam = scheme.beamformers[sender][:, stream.beam_column]
        y += scheme.effective_uplink[sender] @ beam * messages[stream.index]

    x = scheme.relay_precode @ (scheme.relay_decode @ y)

    members = _slot_members(scheme)
    scale = max([1.0, *(abs(s) for s in messages.values())])
    decoded: dict[int, complex] = {}
    residuals: dict[int, float] = {}
    for stream in scheme.streams:
        receiver = (stream.message.cluster, stream.message.dest)
        row = scheme.receive_filters[receiver][stream.filter_row]
        value = complex(row @ (scheme.effective_downlink[receiver] @ x))
        for partner in members[stream.slot]:
            if partner != stream.index:
                value -= messages[partner]
        decoded[stream.index] = value
        residuals[stream.index] = abs(value - messages[stream.index]) / scale

    report = VerificationReport(decoded=decoded, residuals=residuals, tolerance=DECODE_RTOL)
    logger.debug("noiseless decode of %d streams, max residual %.2e", len(decoded), report.max_residual)
    return report


def verify_scheme(scheme: TransmissionScheme, seed: int = 0) -> VerificationReport:
    """
    Run a noiseless round trip with random unit-modulus symbols.

    Raises:
        VerificationError: listing every stream whose residual exceeds DECODE_RTOL
    """
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, len(scheme.streams))
    messages = {stream.index: complex(np.exp(1j * phases[stream.index])) for stream in scheme.streams}
    report = simulate_noiseless(scheme, messages)
    if not report.passed:
        raise VerificationError({s: report.residuals[s] for s in report.failures})
    return report


def _unit_columns(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=0)
    return matrix / np.where(norms > 0, norms, 1.0)


def sum_rate(scheme: TransmissionScheme, channels: ChannelSet, power: float) -> float:
    """
    Achievable-rate proxy of a scheme at transmit power P, in bits per channel use.

    Every user splits T*P uniformly over its streams and the relay splits
    T*P uniformly over its slots; noise is unit variance per dimension.
    Each stream earns half a log(1 + SINR) on the uplink (the relay's
    zero-forced slot, worst stream on an aligned slot) and half on the
    downlink (after the destination's filter), and the total is divided
    by the extension factor.

    Args:
        scheme: Built transmission scheme
        channels: Channels the scheme was built on
        power: Transmit power P > 0

    Returns:
        Sum rate in bits per channel use
    """
    if power <= 0:
        raise PreconditionError(f"power must be positive, got {power}")
    if not scheme.streams:
        return 0.0

    t = scheme.extension_factor
    subspace = scheme.relay_subspace
    eye_t = np.eye(t, dtype=complex)
    uplink = {
        user: subspace @ np.kron(eye_t, h) for user, h in channels.uplink.items()
    }
    downlink = {
        user: np.kron(eye_t, g) @ subspace.conj().T for user, g in channels.downlink.items()
    }

    sent = defaultdict(int)
    for stream in scheme.streams:
        sent[(stream.message.cluster, stream.message.src)] += 1

    # relay-side gain of every stream after its sender's normalised beam
    arrivals = []
    for stream in scheme.streams:
        sender = (stream.message.cluster, stream.message.src)
        beam = scheme.beamformers[sender][:, stream.beam_column]
        beam = beam / np.linalg.norm(beam)
        stream_power = t * power / sent[sender]
        arrivals.append(np.sqrt(stream_power) * (uplink[sender] @ beam))
    arrivals = np.column_stack(arrivals)

    decode = scheme.relay_decode
    gains = np.abs(decode @ arrivals) ** 2  # slots x streams
    noise_up = np.linalg.norm(decode, axis=1) ** 2
    members = _slot_members(scheme)

    sinr_up = {}
    for slot, streams in members.items():
        interference = sum(gains[slot, c] for c in range(arrivals.shape[1]) if c not in streams)
        sinr_up[slot] = min(gains[slot, c] for c in streams) / (noise_up[slot] + interference)

    n_slots = len(scheme.slots)
    precode = _unit_columns(scheme.relay_precode) * np.sqrt(t * power / n_slots)

    total = 0.0
    for stream in scheme.streams:
        receiver = (stream.message.cluster, stream.message.dest)
        row = scheme.receive_filters[receiver][stream.filter_row]
        seen = np.abs(row @ downlink[receiver] @ precode) ** 2
        interference = seen.sum() - seen[stream.slot]
        sinr_down = seen[stream.slot] / (np.linalg.norm(row) ** 2 + interference)
        total += 0.5 * np.log2(1.0 + sinr_up[stream.slot]) + 0.5 * np.log2(1.0 + sinr_down)

    return float(total / t)


def estimate_dof_slope(
    scheme: TransmissionScheme,
    channels: ChannelSet,
    p_lo: float,
    p_hi: float,
) -> float:
    """
    Finite-SNR DoF estimate: rate gain per doubling of transmit power.

    Args:
        scheme: Built transmission scheme
        channels: Channels the scheme was built on
        p_lo: Lower transmit power, > 0
        p_hi: Upper transmit power, >= 100 * p_lo

    Returns:
        (sum_rate(p_hi) - sum_rate(p_lo)) / (log2 p_hi - log2 p_lo)
    """
    if p_lo <= 0:
        raise PreconditionError(f"p_lo must be positive, got {p_lo}")
    if p_hi < 100 * p_lo:
        raise PreconditionError(f"p_hi must be at least 100 x p_lo, got {p_hi} vs {p_lo}")

    rate_lo = sum_rate(scheme, channels, p_lo)
    rate_hi = sum_rate(scheme, channels, p_hi)
    return float((rate_hi - rate_lo) / (np.log2(p_hi) - np.log2(p_lo)))


def verify_sweep_cell(report: DoFReport, spec: SweepSpec) -> tuple[str, float | None]:
    """
    Build, verify and measure the scheme of one sweep cell on every sweep seed.

    Args:
        report: Classified cell
        spec: Sweep specification supplying seeds and slope powers

    Returns:
        Tuple of (verdict, median DoF slope or None); the verdict is PASS, FAIL or n/a
    """
    if report.strategy is None:
        return "n/a", None
    slopes = []
    for seed in spec.seeds:
        try:
            scheme, channels = build_scheme_resampling(report.config, report.strategy, seed)
            verify_scheme(scheme, seed=seed)
        except (PlanError, DegenerateChannelError, VerificationError) as e:
            logger.warning("verification failed for %s, seed %d: %s", report.config, seed, e)
            return "FAIL", None
        slopes.append(estimate_dof_slope(scheme, channels, spec.p_lo, spec.p_hi))
    return "PASS", float(np.median(slopes))
