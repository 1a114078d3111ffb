"""Joint vertex/frequency localization.

Graph Slepian vectors are the eigenvectors of ``B D B``; their eigenvalues
``sigma_i^2`` measure how much of a band-limited vector's energy sits on the
vertex set. A unit eigenvalue means a signal lives entirely on ``S`` and
entirely inside ``F`` at the same time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import DataError, EigensolverFailure, EmptyComplement
from .linalg import (
    numerical_rank,
    rank_threshold,
    singular_values,
    smallest_singular_value,
    spectral_norm,
)
from .operators import IndexLike, IndexSet, as_index_set, band_limiter, vertex_limiter
from .spectral import GFTBasis, canonicalize

UNIT_TOL = 1e-8
CONCENTRATED_TOL = 1e-8


@dataclass(frozen=True)
class SlepianBasis:
    """Eigenpairs of ``B D B`` sorted by decreasing concentration.

    Only columns flagged in ``bandlimited`` (``sigma^2 > 1e-8``) are solutions
    of the concentration problem; the rest span the kernel of ``B D B`` and
    are generally not band-limited.
    """

    vectors: np.ndarray = field(repr=False)
    concentrations: np.ndarray
    S: IndexSet
    F: IndexSet

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def bandlimited(self) -> np.ndarray:
        return self.concentrations > CONCENTRATED_TOL

    def leading(self, k: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
        """The ``k`` most concentrated vectors (default ``|F|``) and their sigma^2."""
        k = len(self.F) if k is None else k
        return self.vectors[:, :k], self.concentrations[:k]


def _check_tol(tol: float) -> None:
    if not 0 < tol <= 0.1:
        raise DataError(f"tol must lie in (0, 0.1], got {tol}")


def bdb_matrix(basis: GFTBasis, S: IndexLike, F: IndexLike) -> np.ndarray:
    B = band_limiter(basis, F).matrix
    d = as_index_set(S, basis.n).mask.astype(float)
    M = (B * d[None, :]) @ B
    return (M + M.T) / 2


def slepian_vectors(basis: GFTBasis, S: IndexLike, F: IndexLike) -> SlepianBasis:
    S = as_index_set(S, basis.n)
    F = as_index_set(F, basis.n)
    M = bdb_matrix(basis, S, F)
    try:
        vals, vecs = scipy.linalg.eigh(M)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(str(exc)) from exc
    vals, vecs = vals[::-1], vecs[:, ::-1]
    vecs = canonicalize(-vals, vecs)
    return SlepianBasis(vecs, vals, S, F)


def perfect_localization_exists(
    basis: GFTBasis, S: IndexLike, F: IndexLike, tol: float = UNIT_TOL
) -> tuple[bool, list[np.ndarray]]:
    """Whether ``B D B`` has an eigenvalue within ``tol`` of one.

    Returns the flag and every Slepian vector with ``sigma^2 >= 1 - tol``.
    """
    _check_tol(tol)
    slep = slepian_vectors(basis, S, F)
    hits = np.flatnonzero(slep.concentrations >= 1 - tol)
    return bool(hits.size), [slep.vectors[:, i].copy() for i in hits]


@dataclass(frozen=True)
class LocalizationMatrix:
    """``G[k, l] = U[col_verts[l], row_freqs[k]]``, of shape ``(n - |F|, |S|)``.

    A non-trivial null space ``G phi = 0`` gives a vector supported on ``S``
    with no energy outside ``F``.
    """

    G: np.ndarray = field(repr=False)
    row_freqs: tuple[int, ...]
    col_verts: tuple[int, ...]
    n: int

    def rank(self, rtol: Optional[float] = None) -> int:
        return numerical_rank(self.G, rtol)

    def has_null_space(self, rtol: Optional[float] = None) -> bool:
        rows, cols = self.G.shape
        if cols == 0:
            return False
        return cols > rows or self.rank(rtol) < cols

    def min_leakage(self) -> float:
        """``min ||G phi||^2 / ||phi||^2``: the least out-of-band energy of a unit
        vector supported on ``S``. Equals ``1 - max sigma^2`` of ``B D B``."""
        return smallest_singular_value(self.G) ** 2

    def is_localizing(self, tol: float = UNIT_TOL) -> bool:
        """Null-space test on the energy scale used by the concentration tests."""
        if self.G.shape[1] == 0:
            return False
        return self.min_leakage() <= tol

    def null_space(self, rtol: Optional[float] = None) -> np.ndarray:
        """Orthonormal basis of the numerical null space, one column per vector."""
        rows, cols = self.G.shape
        if cols == 0:
            return np.zeros((0, 0))
        if rows == 0:
            return np.eye(cols)
        _, sv, Vt = np.linalg.svd(self.G)
        r = int(np.sum(sv > rank_threshold(self.G, sv, rtol))) if sv[0] > 0 else 0
        return Vt[r:].T.copy()


def localization_matrix(basis: GFTBasis, S: IndexLike, F: IndexLike) -> LocalizationMatrix:
    S = as_index_set(S, basis.n)
    F = as_index_set(F, basis.n)
    if len(F) == basis.n:
        raise EmptyComplement("F covers every frequency; G would have no rows")
    Fc = F.complement()
    G = basis.U[np.ix_(S.array, Fc.array)].T
    return LocalizationMatrix(G, Fc.indices, S.indices, basis.n)


def perfect_localization_vectors(
    basis: GFTBasis, S: IndexLike, F: IndexLike, rtol: Optional[float] = None
) -> list[np.ndarray]:
    """Unit vectors supported on ``S`` and band-limited to ``F``, from ``null(G)``."""
    lm = localization_matrix(basis, S, F)
    out = []
    for phi in lm.null_space(rtol).T:
        x = np.zeros(basis.n)
        x[list(lm.col_verts)] = phi
        out.append(x / np.linalg.norm(x))
    return out


@dataclass(frozen=True)
class DofCounts:
    """Counts of unit (C), transition (Q) and zero (O) singular values of ``B D``."""

    C: int
    Q: int
    O: int
    notes: tuple[str, ...] = ()


def dof_counts(
    basis: GFTBasis,
    S: IndexLike,
    F: IndexLike,
    tol: float = UNIT_TOL,
    rtol: Optional[float] = None,
) -> DofCounts:
    """Degrees of freedom from rank identities on the projectors.

    ``C = rank D - rank(B^c D)``. ``Q`` is ``rank(B D^c)`` when
    ``rank D >= rank B`` and ``rank(B^c D)`` otherwise; when the two ranks
    are equal both branches are evaluated and any mismatch is recorded in
    ``notes``. ``O = n - C - Q``. The unit count is also compared against
    the ``B D B`` spectrum (``sigma^2 >= 1 - tol``).
    """
    _check_tol(tol)
    n = basis.n
    S = as_index_set(S, n)
    F = as_index_set(F, n)
    D = vertex_limiter(S, n).matrix
    Dc = vertex_limiter(S.complement(), n).matrix
    B = band_limiter(basis, F).matrix
    # built from the complementary columns so that B^c = 0 exactly when F = V
    Bc = band_limiter(basis, F.complement()).matrix

    def rank(M):
        return numerical_rank(M, rtol)

    rD, rB = rank(D), rank(B)
    rBcD = rank(Bc @ D)
    C = rD - rBcD
    notes = []
    if rD > rB:
        Q = rank(B @ Dc)
    elif rD < rB:
        Q = rBcD
    else:
        Q = rank(B @ Dc)
        if Q != rBcD:
            notes.append(
                f"rank D == rank B == {rD} but rank(B D^c)={Q} != rank(B^c D)={rBcD}; "
                "using rank(B D^c)"
            )
    O = n - C - Q

    sig2 = slepian_vectors(basis, S, F).concentrations
    C_spectral = int(np.sum(sig2 >= 1 - tol))
    if C_spectral != C:
        notes.append(f"unit count from B D B spectrum is {C_spectral}, rank identity gives {C}")
    if O < 0:
        notes.append(f"negative zero count O={O}")
    return DofCounts(C, Q, O, tuple(notes))


def bd_norm(basis: GFTBasis, S: IndexLike, F: IndexLike) -> float:
    """``||B D||_2``."""
    B = band_limiter(basis, F).matrix
    D = vertex_limiter(S, basis.n).matrix
    return spectral_norm(B @ D)


def concentration_spectrum(basis: GFTBasis, S: IndexLike, F: IndexLike) -> np.ndarray:
    """``sigma_i^2`` via the reduced ``|F| x |F|`` matrix ``U_F^T D U_F``, descending."""
    S = as_index_set(S, basis.n)
    F = as_index_set(F, basis.n)
    sub = basis.U[np.ix_(S.array, F.array)]
    out = np.zeros(len(F))
    sv = singular_values(sub)
    out[: sv.size] = sv**2
    return out
