"""Rank and conditioning helpers shared by sampling, alignment and scheme construction."""

import numpy as np
from scipy.linalg import svdvals

# Relative singular-value floor for full-rank decisions
RANK_RTOL = 1e-9


def singular_values(matrix: np.ndarray) -> np.ndarray:
    if matrix.size == 0:
        return np.zeros(0)
    return svdvals(matrix)


def numerical_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Count singular values above rtol times the largest one."""
    s = singular_values(matrix)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def is_full_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> bool:
    return numerical_rank(matrix, rtol) == min(matrix.shape)


def condition_number(matrix: np.ndarray) -> float:
    """Ratio of largest to smallest singular value; inf when singular."""
    s = singular_values(matrix)
    if s.size == 0:
        return 1.0
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def relative_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """max over columns of ||lhs_i - rhs_i|| / ||rhs_i||."""
    if rhs.size == 0:
        return 0.0
    err = np.linalg.norm(lhs - rhs, axis=0)
    scale = np.linalg.norm(rhs, axis=0)
    return float(np.max(err / np.where(scale > 0, scale, 1.0)))


def complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """i.i.d. CN(0, 1) entries."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
