"""Shared column-space dimension and constructive signal space alignment."""

import logging

import numpy as np
from scipy.linalg import lstsq, null_space, svd

from ..errors import AlignmentDimensionError, DegenerateChannelError
from ..models import ReceiverFilters, SharedSubspace
from ..utils.linalg import RANK_RTOL, complex_gaussian, is_full_rank, relative_residual

logger = logging.getLogger(__name__)

# Directions whose relay-side block is shorter than this are kernel artefacts
V_NORM_FLOOR = 1e-6
ALIGN_RTOL = 1e-8


def shared_dim(p: int, q1: int, q2: int) -> int:
    """
    Generic dimension of col(H1) ∩ col(H2) for H1 p x q1 and H2 p x q2.

    Args:
        p: Relay-space dimension
        q1: Columns of the first matrix
        q2: Columns of the second matrix

    Returns:
        max(0, min(p, q1, q2, q1 + q2 - p))
    """
    q1, q2 = max(q1, q2), min(q1, q2)
    return max(0, min(p, q1, q2, q1 + q2 - p))


def _stacked(h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    """[[I, H1, 0], [I, 0, H2]]; its null space holds (v, -u, -w) with v = H1 u = H2 w."""
    p, q1 = h1.shape
    q2 = h2.shape[1]
    eye = np.eye(p, dtype=complex)
    return np.block([
        [eye, h1, np.zeros((p, q2), dtype=complex)],
        [eye, np.zeros((p, q1), dtype=complex), h2],
    ])


def _aligned_basis(h1: np.ndarray, h2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Null-space basis rotated so its relay blocks are orthogonal, strongest first."""
    p = h1.shape[0]
    basis = null_space(_stacked(h1, h2), rcond=RANK_RTOL)
    if basis.shape[1] == 0:
        return basis, np.zeros(0)
    _, s, vh = svd(basis[:p], full_matrices=False)
    rotated = basis @ vh.conj().T
    return rotated[:, : s.size], s


def numerical_shared_dim(h1: np.ndarray, h2: np.ndarray) -> int:
    """Rank of the relay block of the stacked null space."""
    _, s = _aligned_basis(h1, h2)
    return int(np.count_nonzero(s > V_NORM_FLOOR))


def shared_subspace(
    h1: np.ndarray,
    h2: np.ndarray,
    d: int,
    rng: np.random.Generator | None = None,
) -> SharedSubspace:
    """
    Find d directions reachable by both users with their preimages.

    When both matrices have at least as many columns as rows any target is
    reachable, so targets are picked first (standard basis, or random draws
    from rng) and preimages solved by least squares. Otherwise the directions
    come from the null space of the stacked matrix.

    Args:
        h1: p x q1 complex matrix
        h2: p x q2 complex matrix
        d: Number of aligned directions requested
        rng: Source of random targets for the direct construction

    Returns:
        SharedSubspace with h1 @ u == h2 @ w == directions

    Raises:
        AlignmentDimensionError: if d exceeds shared_dim(p, q1, q2)
        DegenerateChannelError: on rank-deficient input or excessive residual
    """
    p, q1 = h1.shape
    q2 = h2.shape[1]
    if d == 0:
        return SharedSubspace(
            dimension=0,
            directions=np.zeros((p, 0), dtype=complex),
            u=np.zeros((q1, 0), dtype=complex),
            w=np.zeros((q2, 0), dtype=complex),
            residual=0.0,
        )

    available = shared_dim(p, q1, q2)
    if d > available:
        raise AlignmentDimensionError(
            f"requested {d} aligned directions but shared_dim({p}, {q1}, {q2}) = {available}"
        )
    if not (is_full_rank(h1) and is_full_rank(h2)):
        raise DegenerateChannelError("alignment input matrices are rank deficient")

    if q1 >= p and q2 >= p:
        if rng is None:
            v = np.eye(p, d, dtype=complex)
        else:
            v = complex_gaussian(rng, (p, d))
        u = lstsq(h1, v)[0]
        w = lstsq(h2, v)[0]
    else:
        basis, s = _aligned_basis(h1, h2)
        survivors = int(np.count_nonzero(s > V_NORM_FLOOR))
        if survivors < d:
            raise DegenerateChannelError(
                f"only {survivors} non-zero aligned directions, {d} requested"
            )
        chosen = basis[:, :d]
        v = chosen[:p]
        u = -chosen[p : p + q1]
        w = -chosen[p + q1 :]

    scale = np.linalg.norm(v, axis=0)
    v, u, w = v / scale, u / scale, w / scale

    residual = max(relative_residual(h1 @ u, v), relative_residual(h2 @ w, v))
    logger.debug("aligned %d directions in %dx(%d,%d), residual %.2e", d, p, q1, q2, residual)
    if residual > ALIGN_RTOL:
        raise DegenerateChannelError(f"alignment residual {residual:.2e} exceeds {ALIGN_RTOL}")

    return SharedSubspace(dimension=d, directions=v, u=u, w=w, residual=residual)


def receiver_filters(
    g1: np.ndarray,
    g2: np.ndarray,
    d: int,
    rng: np.random.Generator | None = None,
) -> ReceiverFilters:
    """
    Receive filters with u1^T G1 == u2^T G2 == g^T, by aligning the transposes.

    Args:
        g1: m1 x p downlink matrix
        g2: m2 x p downlink matrix
        d: Number of common effective rows
        rng: Source of random targets for the direct construction

    Returns:
        ReceiverFilters with filter rows and common rows g_i^T
    """
    subspace = shared_subspace(g1.T, g2.T, d, rng)
    filters1 = subspace.u.T
    filters2 = subspace.w.T
    directions = subspace.directions.T
    residual = max(
        relative_residual((filters1 @ g1).T, directions.T),
        relative_residual((filters2 @ g2).T, directions.T),
    )
    return ReceiverFilters(
        dimension=d,
        filters1=filters1,
        filters2=filters2,
        directions=directions,
        residual=residual,
    )
