"""File formats: edge/station/sample CSVs and graph/basis JSON documents.

Every float is written with 17 significant digits so that reading a file back
reproduces the exact binary value.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np

from .errors import FormatError
from .graph import GeoStation, Graph
from .spectral import GFTBasis


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _json_encode(obj: Any, out: list[str]) -> None:
    if isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        # JSON has no NaN/Infinity
        out.append(fmt_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for k, (key, val) in enumerate(obj.items()):
            if k:
                out.append(", ")
            out.append(json.dumps(str(key), ensure_ascii=False))
            out.append(": ")
            _json_encode(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for k, val in enumerate(obj):
            if k:
                out.append(", ")
            _json_encode(val, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """JSON text with 17-significant-digit floats."""
    out: list[str] = []
    _json_encode(obj, out)
    return "".join(out)


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return doc


def graph_to_dict(g: Graph) -> dict:
    return {"vertex_ids": list(g.vertex_ids), "weights": g.weights.tolist()}


def save_graph(g: Graph, path) -> None:
    Path(path).write_text(dumps(graph_to_dict(g)) + "\n", encoding="utf-8")


def load_graph(path) -> Graph:
    doc = _load_json(path)
    try:
        return Graph(tuple(str(v) for v in doc["vertex_ids"]), np.array(doc["weights"], dtype=float))
    except KeyError as exc:
        raise FormatError(f"{path}: missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def basis_to_dict(basis: GFTBasis) -> dict:
    doc = {"lambdas": basis.lambdas.tolist(), "U": basis.U.tolist()}
    if basis.vertex_ids is not None:
        doc["vertex_ids"] = list(basis.vertex_ids)
    return doc


def save_basis(basis: GFTBasis, path) -> None:
    Path(path).write_text(dumps(basis_to_dict(basis)) + "\n", encoding="utf-8")


def load_basis(path) -> GFTBasis:
    doc = _load_json(path)
    try:
        ids = doc.get("vertex_ids")
        return GFTBasis(
            np.array(doc["U"], dtype=float),
            np.array(doc["lambdas"], dtype=float),
            tuple(str(v) for v in ids) if ids is not None else None,
        )
    except KeyError as exc:
        raise FormatError(f"{path}: missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _rows(path, required: Iterable[str]) -> Iterable[tuple[int, dict]]:
    """Yield ``(row_number, row)`` with row numbers counted from the header (line 1)."""
    required = list(required)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in required if c not in header]
        if missing:
            raise FormatError(f"{path}: header lacks column(s) {missing}")
        reader.fieldnames = header
        for lineno, row in enumerate(reader, start=2):
            for c in required:
                if row.get(c) is None or str(row[c]).strip() == "":
                    raise FormatError(f"{path}: row {lineno}: missing value for {c!r}")
            yield lineno, row


def _float(path, lineno, row, key) -> float:
    try:
        return float(row[key])
    except ValueError as exc:
        raise FormatError(f"{path}: row {lineno}: {key}={row[key]!r} is not a number") from exc


def read_edges(path) -> list[tuple[str, str, float]]:
    return [
        (row["u"].strip(), row["v"].strip(), _float(path, ln, row, "w"))
        for ln, row in _rows(path, ("u", "v", "w"))
    ]


def read_stations(path) -> list[GeoStation]:
    out = []
    for ln, row in _rows(path, ("id", "lat", "lon")):
        value = row.get("value")
        value = None if value is None or value.strip() == "" else _float(path, ln, row, "value")
        try:
            out.append(
                GeoStation(row["id"].strip(), _float(path, ln, row, "lat"), _float(path, ln, row, "lon"), value)
            )
        except ValueError as exc:
            raise FormatError(f"{path}: row {ln}: {exc}") from exc
    return out


def write_stations(stations, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "lat", "lon", "value"])
        for s in stations:
            w.writerow([s.id, fmt_float(s.lat), fmt_float(s.lon), "" if s.value is None else fmt_float(s.value)])


def _vertex_index(token: str, n: int, ids: Optional[tuple[str, ...]], where: str) -> int:
    token = token.strip()
    if ids is not None and token in ids:
        return ids.index(token)
    try:
        k = int(token)
    except ValueError:
        raise FormatError(f"{where}: unknown vertex {token!r}") from None
    if not 1 <= k <= n:
        raise FormatError(f"{where}: vertex index {k} outside 1..{n}")
    return k - 1


def read_vertex_values(path, n: int, ids: Optional[tuple[str, ...]] = None) -> dict[int, float]:
    """``vertex,value`` rows; vertex is a 1-based index or a vertex id. Keys are 0-based."""
    out: dict[int, float] = {}
    for ln, row in _rows(path, ("vertex", "value")):
        i = _vertex_index(row["vertex"], n, ids, f"{path}: row {ln}")
        if i in out:
            raise FormatError(f"{path}: row {ln}: vertex {row['vertex']!r} repeated")
        out[i] = _float(path, ln, row, "value")
    return out


def read_signal(path, n: int, ids: Optional[tuple[str, ...]] = None) -> np.ndarray:
    vals = read_vertex_values(path, n, ids)
    if len(vals) != n:
        missing = sorted(set(range(n)) - set(vals))
        raise FormatError(f"{path}: signal lacks values for vertices {[i + 1 for i in missing]}")
    return np.array([vals[i] for i in range(n)])


def write_signal(f, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["vertex", "value"])
        for i, v in enumerate(np.asarray(f, dtype=float), start=1):
            w.writerow([i, fmt_float(v)])


def write_sweep(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["size", "bandwidth", "nmse_mean", "nmse_std", "valid_trials"])
        for r in rows:
            w.writerow([r.size, r.bandwidth, fmt_float(r.nmse_mean), fmt_float(r.nmse_std), r.valid_trials])
