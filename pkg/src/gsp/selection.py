"""Sampling-set selection: random baseline and two forward-greedy heuristics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import SizeOutOfRange
from .linalg import smallest_singular_value, spectral_norm
from .operators import IndexLike, IndexSet, as_index_set
from .sampling import CONDITION_TOL, bdc_norm, sampling_condition
from .spectral import GFTBasis

TIE_TOL = 1e-12


@dataclass(frozen=True)
class SelectionResult:
    S: IndexSet
    score: float
    method: str
    feasible: Optional[bool]


def _check_size(n: int, m: int, lo: int = 1) -> None:
    if not lo <= m <= n:
        raise SizeOutOfRange(f"requested {m} vertices out of {n}")


def _feasible(basis: GFTBasis, S: IndexSet, F: IndexSet) -> bool:
    return sampling_condition(basis, S, F, CONDITION_TOL)[0]


def select_random(
    n: int,
    m: int,
    seed: int,
    basis: Optional[GFTBasis] = None,
    F: Optional[IndexLike] = None,
) -> SelectionResult:
    """Uniform random ``m``-subset of ``range(n)``.

    With ``basis`` and ``F`` the result also carries ``||B D^c||_2`` as score
    and the sampling-condition flag; otherwise those are NaN and None.
    """
    _check_size(n, m)
    rng = np.random.default_rng(seed)
    S = IndexSet(tuple(rng.choice(n, size=m, replace=False)), n)
    if basis is None or F is None:
        return SelectionResult(S, math.nan, "random", None)
    F = as_index_set(F, n)
    return SelectionResult(S, bdc_norm(basis, S, F), "random", _feasible(basis, S, F))


def _greedy(n: int, m: int, score: Callable[[list[int]], float], maximize: bool) -> list[int]:
    chosen: list[int] = []
    for _ in range(m):
        best_v, best = -1, None
        for v in range(n):
            if v in chosen:
                continue
            s = score(sorted(chosen + [v]))
            if maximize:
                s = -s
            # strict improvement only: equal scores keep the smaller index
            if best is None or s < best - TIE_TOL * max(1.0, abs(best)):
                best_v, best = v, s
        chosen.append(best_v)
    return sorted(chosen)


def select_greedy_min_bdc(basis: GFTBasis, F: IndexLike, m: int) -> SelectionResult:
    """Add, one at a time, the vertex giving the smallest ``||B D^c||_2``.

    ``||B D^c||_2`` equals the spectral norm of ``U_F`` restricted to the
    unsampled rows, which is what each candidate is scored with.
    """
    n = basis.n
    _check_size(n, m)
    F = as_index_set(F, n)
    UF = basis.columns(F.array)

    def score(S: list[int]) -> float:
        mask = np.ones(n, dtype=bool)
        mask[S] = False
        return spectral_norm(UF[mask])

    S = IndexSet(tuple(_greedy(n, m, score, maximize=False)), n)
    return SelectionResult(S, score(list(S)), "greedy-bdc", _feasible(basis, S, F))


def g_sigma_min(basis: GFTBasis, S: IndexLike, F: IndexLike) -> float:
    """Smallest singular value of the localization matrix ``G``; 0 when ``|S| > n - |F|``."""
    S = as_index_set(S, basis.n)
    F = as_index_set(F, basis.n)
    G = basis.U[np.ix_(S.array, F.complement().array)].T
    return smallest_singular_value(G)


def select_greedy_maxcond_G(basis: GFTBasis, F: IndexLike, m: int) -> SelectionResult:
    """Add, one at a time, the vertex maximizing ``sigma_min`` of ``G``.

    ``G`` has one column per selected vertex, so once ``|S| > n - |F|`` every
    candidate scores zero and ties fall back to the smallest index.
    """
    n = basis.n
    _check_size(n, m)
    F = as_index_set(F, n)

    def score(S: list[int]) -> float:
        return g_sigma_min(basis, S, F)

    S = IndexSet(tuple(_greedy(n, m, score, maximize=True)), n)
    return SelectionResult(S, score(list(S)), "greedy-g", _feasible(basis, S, F))
