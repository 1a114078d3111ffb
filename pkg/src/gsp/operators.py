"""Vertex- and band-limiting orthogonal projectors.

Index sets are 0-based inside the library. :meth:`IndexSet.parse` and
:meth:`IndexSet.one_based` convert from and to the 1-based notation used by
files and the command line.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .errors import DataError, IndexOutOfRange
from .spectral import GFTBasis


@dataclass(frozen=True)
class IndexSet:
    """Sorted set of distinct 0-based indices drawn from ``range(n)``."""

    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        idx = sorted(set(int(i) for i in self.indices))
        if idx and (idx[0] < 0 or idx[-1] >= self.n):
            raise IndexOutOfRange(f"indices must lie in [0, {self.n}), got {idx}")
        object.__setattr__(self, "indices", tuple(idx))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(tuple(range(n)), n)

    @classmethod
    def parse(cls, text: str, n: int) -> "IndexSet":
        """Parse 1-based syntax such as ``"1:10,15"``, ``"all"`` or ``""``."""
        text = text.strip()
        if text.lower() == "all":
            return cls.full(n)
        out: list[int] = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            try:
                if ":" in part:
                    lo, hi = (int(x) for x in part.split(":"))
                    if hi < lo:
                        raise DataError(f"empty range {part!r}")
                    out.extend(range(lo, hi + 1))
                else:
                    out.append(int(part))
            except ValueError as exc:
                raise DataError(f"bad index-set token {part!r}") from exc
        bad = [i for i in out if not 1 <= i <= n]
        if bad:
            raise IndexOutOfRange(f"indices {bad} outside 1..{n}")
        return cls(tuple(i - 1 for i in out), n)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return int(i) in self.indices

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[self.array] = True
        return m

    def complement(self) -> "IndexSet":
        return IndexSet(tuple(np.flatnonzero(~self.mask)), self.n)

    def one_based(self) -> list[int]:
        return [i + 1 for i in self.indices]

    def format(self) -> str:
        """Compact 1-based rendering, inverse of :meth:`parse`."""
        parts = []
        vals = self.one_based()
        i = 0
        while i < len(vals):
            j = i
            while j + 1 < len(vals) and vals[j + 1] == vals[j] + 1:
                j += 1
            parts.append(str(vals[i]) if i == j else f"{vals[i]}:{vals[j]}")
            i = j + 1
        return ",".join(parts)


VertexSet = IndexSet
FrequencySet = IndexSet

IndexLike = Union[IndexSet, Iterable[int]]


def as_index_set(s: IndexLike, n: int) -> IndexSet:
    if isinstance(s, IndexSet):
        if s.n != n:
            raise IndexOutOfRange(f"index set built for n={s.n}, expected n={n}")
        return s
    return IndexSet(tuple(s), n)


@dataclass(frozen=True)
class Projector:
    """Dense orthogonal projector with the index set that defines it."""

    matrix: np.ndarray = field(repr=False)
    kind: str  # "vertex" or "band"
    set: IndexSet

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        if isinstance(other, Projector):
            other = other.matrix
        return self.matrix @ other

    def __rmatmul__(self, other):
        return other @ self.matrix


def vertex_limiter(S: IndexLike, n: int) -> Projector:
    """Diagonal 0/1 matrix keeping the entries indexed by ``S``."""
    S = as_index_set(S, n)
    return Projector(np.diag(S.mask.astype(float)), "vertex", S)


def band_limiter(basis: GFTBasis, F: IndexLike) -> Projector:
    """``U diag(1_F) U^T``, computed as ``U_F U_F^T``."""
    F = as_index_set(F, basis.n)
    UF = basis.columns(F.array)
    B = UF @ UF.T
    # exact symmetry; the product is symmetric only up to roundoff
    B = (B + B.T) / 2
    return Projector(B, "band", F)


def complement(P: Projector) -> Projector:
    """``I - P`` over the complementary index set."""
    return Projector(np.eye(P.n) - P.matrix, P.kind, P.set.complement())
