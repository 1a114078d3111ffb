"""Weighted undirected graphs: construction, validation and Laplacians."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    ConflictingDuplicateEdge,
    DataError,
    DimensionMismatch,
    DuplicateStationId,
    IsolatedVertexInNormalized,
    NegativeWeight,
    SelfLoop,
)

EARTH_RADIUS_KM = 6371.0

# Rough bounding box of the Italian peninsula (lat_min, lat_max, lon_min, lon_max).
ITALY_BBOX = (37.0, 46.5, 7.0, 18.5)


@dataclass(frozen=True)
class Graph:
    """Immutable weighted undirected graph.

    ``weights`` is the symmetric adjacency matrix with zero diagonal; row ``i``
    belongs to ``vertex_ids[i]``.
    """

    vertex_ids: tuple[str, ...]
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        n = len(self.vertex_ids)
        if w.shape != (n, n):
            raise DimensionMismatch(f"weights must be {n}x{n}, got {w.shape}")
        if len(set(self.vertex_ids)) != n:
            raise DataError("vertex ids must be unique")
        if not np.all(np.isfinite(w)):
            raise DataError("weights must be finite")
        if np.any(w < 0):
            raise NegativeWeight("adjacency weights must be nonnegative")
        if np.any(np.diag(w) != 0):
            raise SelfLoop("self-loops are not allowed")
        if np.any(w != w.T):
            raise DataError("adjacency matrix must be exactly symmetric")
        w.setflags(write=False)
        object.__setattr__(self, "vertex_ids", tuple(self.vertex_ids))
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.vertex_ids)

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def degree_matrix(self) -> np.ndarray:
        return np.diag(self.degrees)

    def index_of(self, vertex_id: str) -> int:
        return self.vertex_ids.index(vertex_id)

    def is_connected(self) -> bool:
        from scipy.sparse.csgraph import connected_components

        if self.n == 0:
            return True
        ncomp, _ = connected_components(self.weights > 0, directed=False)
        return ncomp == 1


@dataclass(frozen=True)
class GeoStation:
    id: str
    lat: float
    lon: float
    value: Optional[float] = None

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise DataError(f"station {self.id!r}: latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise DataError(f"station {self.id!r}: longitude {self.lon} outside [-180, 180]")


def build_from_edges(edges: Iterable[tuple[str, str, float]]) -> Graph:
    """Build a graph from ``(u, v, w)`` triples.

    Vertices are ordered lexicographically by id. Repeated edges (in either
    orientation) are merged when their weights agree and rejected otherwise.
    """
    seen: dict[tuple[str, str], float] = {}
    ids: set[str] = set()
    for u, v, w in edges:
        u, v, w = str(u), str(v), float(w)
        if u == v:
            raise SelfLoop(f"self-loop on vertex {u!r}")
        if not w > 0:
            raise NegativeWeight(f"edge ({u!r}, {v!r}) has non-positive weight {w}")
        key = (u, v) if u < v else (v, u)
        if key in seen and seen[key] != w:
            raise ConflictingDuplicateEdge(
                f"edge {key} given with weights {seen[key]} and {w}"
            )
        seen[key] = w
        ids.update(key)

    order = sorted(ids)
    pos = {vid: i for i, vid in enumerate(order)}
    A = np.zeros((len(order), len(order)))
    for (u, v), w in seen.items():
        A[pos[u], pos[v]] = A[pos[v], pos[u]] = w
    return Graph(tuple(order), A)


def haversine_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in kilometres on a sphere of radius 6371 km."""
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(a)))


def build_geo_graph(stations: Sequence[GeoStation], radius_km: float) -> Graph:
    """Unit-weight graph linking stations closer than ``radius_km``.

    Vertex order follows the input order. The result may be disconnected.
    """
    if not radius_km > 0:
        raise DataError("radius_km must be positive")
    if len(stations) < 2:
        raise DataError("at least two stations are required")
    ids = [s.id for s in stations]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise DuplicateStationId(f"duplicate station ids: {dup}")

    n = len(stations)
    A = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = haversine_km(stations[i].lat, stations[i].lon, stations[j].lat, stations[j].lon)
            if d < radius_km:
                A[i, j] = A[j, i] = 1.0
    return Graph(tuple(ids), A)


def laplacian(g: Graph, kind: str = "combinatorial") -> np.ndarray:
    """Return ``K - A`` or, for ``kind="normalized"``, ``K^-1/2 (K - A) K^-1/2``."""
    deg = g.degrees
    L = np.diag(deg) - g.weights
    if kind == "combinatorial":
        return L
    if kind == "normalized":
        if np.any(deg <= 0):
            bad = [g.vertex_ids[i] for i in np.flatnonzero(deg <= 0)]
            raise IsolatedVertexInNormalized(f"isolated vertices: {bad}")
        s = 1.0 / np.sqrt(deg)
        Ln = s[:, None] * L * s[None, :]
        # exact symmetry; the elementwise product can differ in the last bit
        return (Ln + Ln.T) / 2
    raise ValueError(f"unknown Laplacian kind {kind!r}")


def random_geo_stations(
    n: int,
    seed: int,
    bbox: tuple[float, float, float, float] = ITALY_BBOX,
) -> list[GeoStation]:
    """Seeded uniform scatter of ``n`` stations inside ``bbox``.

    Stand-in for a real station network; ids are ``s000``, ``s001``, ...
    """
    rng = np.random.default_rng(seed)
    lat0, lat1, lon0, lon1 = bbox
    lats = rng.uniform(lat0, lat1, size=n)
    lons = rng.uniform(lon0, lon1, size=n)
    width = max(3, len(str(n - 1)))
    return [
        GeoStation(f"s{i:0{width}d}", float(la), float(lo))
        for i, (la, lo) in enumerate(zip(lats, lons))
    ]


def random_weighted_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p) with weights drawn uniformly from (0, 1]."""
    mask = np.triu(rng.random((n, n)) < p, k=1)
    w = 1.0 - rng.random((n, n))  # (0, 1]
    A = np.where(mask, w, 0.0)
    A = A + A.T
    return Graph(tuple(f"v{i}" for i in range(n)), A)
