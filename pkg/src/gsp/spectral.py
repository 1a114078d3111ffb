"""Laplacian eigenbasis and the graph Fourier transform."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, EigensolverFailure, NotSymmetric

SIGN_TOL = 1e-8
CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class GFTBasis:
    """Orthonormal eigenvectors ``U`` (columns) with ascending ``lambdas``."""

    U: np.ndarray = field(repr=False)
    lambdas: np.ndarray
    vertex_ids: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        U = np.array(self.U, dtype=float)
        lam = np.array(self.lambdas, dtype=float)
        if U.ndim != 2 or U.shape[0] != U.shape[1] or lam.shape != (U.shape[0],):
            raise DimensionMismatch(f"U {U.shape} and lambdas {lam.shape} disagree")
        if self.vertex_ids is not None and len(self.vertex_ids) != U.shape[0]:
            raise DimensionMismatch("vertex_ids length differs from basis size")
        U.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "lambdas", lam)
        if self.vertex_ids is not None:
            object.__setattr__(self, "vertex_ids", tuple(self.vertex_ids))

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def columns(self, idx) -> np.ndarray:
        """Sub-basis ``U[:, idx]`` for 0-based frequency indices."""
        return self.U[:, np.asarray(idx, dtype=int)]


def _fix_signs(V: np.ndarray) -> np.ndarray:
    """Flip columns so the first entry with magnitude > SIGN_TOL is positive."""
    V = V.copy()
    for k in range(V.shape[1]):
        big = np.flatnonzero(np.abs(V[:, k]) > SIGN_TOL)
        if big.size and V[big[0], k] < 0:
            V[:, k] = -V[:, k]
    return V


def _clusters(values: np.ndarray, tol: float) -> list[tuple[int, int]]:
    """Half-open index ranges of consecutive (sorted) values closer than ``tol``."""
    out = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] >= tol:
            out.append((start, i))
            start = i
    return out


def canonicalize(vals: np.ndarray, vecs: np.ndarray, tol: float = CLUSTER_TOL) -> np.ndarray:
    """Apply the sign convention and order columns inside eigenvalue clusters.

    ``vals`` must already be sorted. Inside a cluster of (numerically) equal
    eigenvalues the columns are ordered by descending lexicographic
    comparison, so the zero matrix yields the identity.
    """
    vecs = _fix_signs(vecs)
    scale = 1.0 + (np.max(np.abs(vals)) if vals.size else 0.0)
    for a, b in _clusters(np.asarray(vals), tol * scale):
        if b - a > 1:
            block = vecs[:, a:b]
            # lexsort uses the last key as primary, so feed rows in reverse
            order = np.lexsort(-block[::-1, :])
            vecs[:, a:b] = block[:, order]
    return vecs


def eigendecompose(L: np.ndarray, vertex_ids=None) -> GFTBasis:
    """Dense symmetric eigendecomposition ``L = U diag(lambdas) U^T``.

    Eigenvalues come back ascending; see :func:`canonicalize` for how the
    eigenvector signs and the order inside repeated eigenvalues are fixed.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {L.shape}")
    if L.size and np.max(np.abs(L - L.T)) > 1e-12:
        raise NotSymmetric("matrix is not symmetric within 1e-12")
    if not np.all(np.isfinite(L)):
        raise EigensolverFailure("matrix has non-finite entries")
    try:
        lam, U = scipy.linalg.eigh((L + L.T) / 2)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(str(exc)) from exc
    U = canonicalize(lam, U)
    return GFTBasis(U, lam, vertex_ids)


def _check_len(basis: GFTBasis, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise DimensionMismatch(f"expected length {basis.n}, got shape {x.shape}")
    return x


def gft(basis: GFTBasis, f) -> np.ndarray:
    """Graph Fourier transform ``U^T f``."""
    return basis.U.T @ _check_len(basis, f)


def igft(basis: GFTBasis, fhat) -> np.ndarray:
    """Inverse transform ``U fhat``."""
    return basis.U @ _check_len(basis, fhat)


def split_clusters(basis: GFTBasis, freq_indices, tol: float = CLUSTER_TOL) -> list[int]:
    """Boundaries of ``freq_indices`` that cut through a repeated eigenvalue.

    Returns the 0-based positions ``i`` where exactly one of ``i`` and
    ``i + 1`` is selected while ``|lambda_i - lambda_{i+1}| < tol``. The band
    projector is basis-dependent whenever this list is non-empty.
    """
    sel = np.zeros(basis.n, dtype=bool)
    sel[np.asarray(list(freq_indices), dtype=int)] = True
    gaps = np.abs(np.diff(basis.lambdas)) < tol
    return [int(i) for i in np.flatnonzero(gaps & (sel[:-1] != sel[1:]))]
