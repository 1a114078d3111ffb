"""Small dense linear-algebra helpers shared by the analysis modules."""
from __future__ import annotations

from typing import Optional

import numpy as np


def singular_values(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def rank_threshold(M: np.ndarray, sv: np.ndarray, rtol: Optional[float] = None) -> float:
    """Cut-off below which singular values count as zero.

    Default is ``max(rows, cols) * eps * sigma_max``; ``rtol`` replaces the
    ``max(rows, cols) * eps`` factor.
    """
    if sv.size == 0:
        return 0.0
    if rtol is None:
        rtol = max(M.shape) * np.finfo(float).eps
    return rtol * sv[0]


def numerical_rank(M: np.ndarray, rtol: Optional[float] = None) -> int:
    M = np.asarray(M, dtype=float)
    sv = singular_values(M)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rank_threshold(M, sv, rtol)))


def spectral_norm(M: np.ndarray) -> float:
    sv = singular_values(M)
    return float(sv[0]) if sv.size else 0.0


def smallest_singular_value(M: np.ndarray) -> float:
    """``sigma_k`` with ``k`` = number of columns; zero for wide matrices.

    A matrix with more columns than rows always has a non-trivial null
    space, so its smallest singular value in this sense is exactly zero.
    """
    M = np.asarray(M, dtype=float)
    rows, cols = M.shape
    if cols == 0:
        return np.inf
    if cols > rows:
        return 0.0
    return float(singular_values(M)[-1])
