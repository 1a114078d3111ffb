"""``gsp`` command-line interface.

Every subcommand is a thin adapter over the library. Exit codes: 0 success,
2 usage error, 3 data/format error, 4 numerical failure. Errors are reported
as a JSON object on stderr. Index sets on the command line are 1-based, e.g.
``--freq 1:10,15``.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .errors import DataError, GSPError, NumericalError
from .graph import build_from_edges, build_geo_graph, laplacian
from .io import (
    dumps,
    load_basis,
    load_graph,
    read_edges,
    read_signal,
    read_stations,
    read_vertex_values,
    save_basis,
    save_graph,
    write_signal,
    write_stations,
    write_sweep,
)
from .localization import bd_norm, dof_counts, perfect_localization_exists, slepian_vectors
from .operators import IndexSet, band_limiter
from .sampling import (
    SampledSignal,
    nmse_sweep,
    reconstruct_direct,
    reconstruct_slepian,
    sampling_condition,
    synthetic_geo_experiment,
)
from .selection import select_greedy_maxcond_G, select_greedy_min_bdc, select_random
from .spectral import eigendecompose, split_clusters


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: Optional[int] = None
    tool_version: str = __version__
    input_digests: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "input_digests": self.input_digests,
        }


def _digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _manifest(args, inputs: list[str]) -> RunManifest:
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "threads") and not k.startswith("_")
    }
    return RunManifest(
        command=args._command,
        parameters=params,
        seed=getattr(args, "seed", None),
        input_digests={str(p): _digest(p) for p in inputs if p},
    )


def _write_manifest(out: str, manifest: RunManifest) -> None:
    Path(str(out) + ".manifest.json").write_text(dumps(manifest.to_dict()) + "\n", encoding="utf-8")


def _emit_json(doc: dict, args, inputs: list[str]) -> None:
    manifest = _manifest(args, inputs)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(dumps(doc) + "\n", encoding="utf-8")
        _write_manifest(out, manifest)
    else:
        doc = dict(doc, manifest=manifest.to_dict())
        sys.stdout.write(dumps(doc) + "\n")


def _warn(msg: str) -> None:
    sys.stderr.write(dumps({"warning": msg}) + "\n")


def _freq(args, basis) -> IndexSet:
    F = IndexSet.parse(args.freq, basis.n)
    cuts = split_clusters(basis, F)
    if cuts:
        _warn(
            "frequency set splits a repeated eigenvalue at position(s) "
            f"{[c + 1 for c in cuts]}; the band projector depends on the chosen eigenbasis"
        )
    return F


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("GSP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"GSP_THREADS={env!r} is not an integer") from None
    return 1


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# subcommands -----------------------------------------------------------------


def cmd_graph_build(args) -> None:
    g = build_from_edges(read_edges(args.edges))
    save_graph(g, args.out)
    _write_manifest(args.out, _manifest(args, [args.edges]))


def cmd_graph_geo(args) -> None:
    stations = read_stations(args.stations)
    g = build_geo_graph(stations, args.radius_km)
    save_graph(g, args.out)
    _write_manifest(args.out, _manifest(args, [args.stations]))
    if args.signal_out:
        if any(s.value is None for s in stations):
            raise DataError("--signal-out needs a value for every station")
        write_signal([s.value for s in stations], args.signal_out)
        _write_manifest(args.signal_out, _manifest(args, [args.stations]))


def cmd_graph_synth(args) -> None:
    g, basis, f = synthetic_geo_experiment(args.n, args.seed, args.radius_km)
    save_graph(g, args.out)
    _write_manifest(args.out, _manifest(args, []))
    if args.signal_out:
        write_signal(f, args.signal_out)
        _write_manifest(args.signal_out, _manifest(args, []))


def cmd_basis(args) -> None:
    g = load_graph(args.graph)
    basis = eigendecompose(laplacian(g, args.kind), g.vertex_ids)
    save_basis(basis, args.out)
    _write_manifest(args.out, _manifest(args, [args.graph]))


def cmd_slepian(args) -> None:
    basis = load_basis(args.basis)
    S = IndexSet.parse(args.verts, basis.n)
    F = _freq(args, basis)
    slep = slepian_vectors(basis, S, F)
    doc = {
        "concentrations": slep.concentrations,
        "bandlimited": slep.bandlimited.tolist(),
        "vectors": slep.vectors.T,
    }
    _emit_json(doc, args, [args.basis])


def cmd_check(args) -> None:
    basis = load_basis(args.basis)
    S = IndexSet.parse(args.verts, basis.n)
    F = _freq(args, basis)
    localized, _ = perfect_localization_exists(basis, S, F, args.tol)
    dof = dof_counts(basis, S, F, args.tol)
    sig2 = slepian_vectors(basis, S, F).concentrations
    for note in dof.notes:
        _warn(note)
    doc = {
        "bd_norm": bd_norm(basis, S, F),
        "localized": localized,
        "C": dof.C,
        "Q": dof.Q,
        "O": dof.O,
        "sigma": np.sqrt(np.clip(sig2, 0.0, None)),
        "sigma_sq": sig2,
    }
    _emit_json(doc, args, [args.basis])


def cmd_reconstruct(args) -> None:
    basis = load_basis(args.basis)
    F = _freq(args, basis)
    fs = SampledSignal(read_vertex_values(args.samples, basis.n, basis.vertex_ids), basis.n)
    if args.method == "slepian":
        f = reconstruct_slepian(fs, slepian_vectors(basis, fs.S, F), args.tol)
    else:
        f = reconstruct_direct(fs, band_limiter(basis, F), fs.S)
    write_signal(f, args.out)
    _write_manifest(args.out, _manifest(args, [args.basis, args.samples]))


def cmd_sweep(args) -> None:
    if args.graph:
        g = load_graph(args.graph)
        basis = eigendecompose(laplacian(g), g.vertex_ids)
        src = args.graph
    else:
        basis = load_basis(args.basis)
        src = args.basis
    f = read_signal(args.signal, basis.n, basis.vertex_ids)
    if args.bandwidths:
        bws = IndexSet.parse(args.bandwidths, basis.n).one_based()
    else:
        bws = list(range(1, min(args.max_bw, basis.n) + 1))
    rows = nmse_sweep(basis, f, args.sizes, bws, args.trials, args.seed, threads=_threads(args))
    write_sweep(rows, args.out)
    _write_manifest(args.out, _manifest(args, [src, args.signal]))


def cmd_select(args) -> None:
    basis = load_basis(args.basis)
    F = _freq(args, basis)
    if args.method == "random":
        if args.seed is None:
            raise UsageError("--method random requires --seed")
        res = select_random(basis.n, args.size, args.seed, basis, F)
    elif args.method == "greedy-bdc":
        res = select_greedy_min_bdc(basis, F, args.size)
    else:
        res = select_greedy_maxcond_G(basis, F, args.size)
    doc = {"S": res.S.one_based(), "score": res.score, "feasible": res.feasible, "method": res.method}
    _emit_json(doc, args, [args.basis])


# parser ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gsp", description="Vertex-frequency localization and sampling on graphs.")
    p.add_argument("--version", action="version", version=f"gsp {__version__}")
    sub = p.add_subparsers(dest="_command", required=True, parser_class=_Parser)

    g = sub.add_parser("graph", help="build graph.json from edges, stations or a synthetic generator")
    gsub = g.add_subparsers(dest="_graph_command", required=True, parser_class=_Parser)

    q = gsub.add_parser("build", help="graph from an edge CSV (u,v,w)")
    q.add_argument("--edges", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_graph_build)

    q = gsub.add_parser("geo", help="unit-weight radius graph from a station CSV (id,lat,lon[,value])")
    q.add_argument("--stations", required=True)
    q.add_argument("--radius-km", type=float, required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--signal-out", help="also write the station values as signal CSV")
    q.set_defaults(func=cmd_graph_geo)

    q = gsub.add_parser("synth", help="seeded random geometric graph plus heat-kernel signal")
    q.add_argument("--n", type=int, default=100)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--radius-km", type=float, default=250.0)
    q.add_argument("--out", required=True)
    q.add_argument("--signal-out")
    q.set_defaults(func=cmd_graph_synth)

    q = sub.add_parser("basis", help="Laplacian eigenbasis as basis.json")
    q.add_argument("--graph", required=True)
    q.add_argument("--kind", choices=["combinatorial", "normalized"], default="combinatorial")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_basis)

    q = sub.add_parser("slepian", help="Slepian vectors (eigenpairs of BDB)")
    q.add_argument("--basis", required=True)
    q.add_argument("--verts", required=True)
    q.add_argument("--freq", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_slepian)

    q = sub.add_parser("check", help="perfect-localization test and degrees of freedom")
    q.add_argument("--basis", required=True)
    q.add_argument("--verts", required=True)
    q.add_argument("--freq", required=True)
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--out")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("reconstruct", help="recover a band-limited signal from samples")
    q.add_argument("--basis", required=True)
    q.add_argument("--freq", required=True)
    q.add_argument("--samples", required=True, help="CSV vertex,value (1-based index or vertex id)")
    q.add_argument("--method", choices=["slepian", "direct"], default="slepian")
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_reconstruct)

    q = sub.add_parser(
        "sweep",
        help="NMSE = ||f - f~||^2 / ||f||^2 versus bandwidth over random sampling sets",
    )
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--basis")
    q.add_argument("--signal", required=True)
    q.add_argument("--sizes", type=_int_list, required=True)
    bw = q.add_mutually_exclusive_group(required=True)
    bw.add_argument("--max-bw", type=int)
    bw.add_argument("--bandwidths", help="explicit bandwidth list, e.g. 1:20,30")
    q.add_argument("--trials", type=int, default=500)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--threads", type=int, help="worker threads (default $GSP_THREADS or 1)")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sweep)

    q = sub.add_parser("select", help="choose a sampling set")
    q.add_argument("--basis", required=True)
    q.add_argument("--freq", required=True)
    q.add_argument("--size", type=int, required=True)
    q.add_argument("--method", choices=["random", "greedy-bdc", "greedy-g"], default="greedy-bdc")
    q.add_argument("--seed", type=int)
    q.add_argument("--out")
    q.set_defaults(func=cmd_select)
    return p


def _fail(code: int, exc: BaseException) -> int:
    sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args._command == "graph":
            args._command = f"graph {args._graph_command}"
        args.func(args)
    except UsageError as exc:
        return _fail(2, exc)
    except NumericalError as exc:
        return _fail(4, exc)
    except (GSPError, OSError, UnicodeDecodeError) as exc:
        return _fail(3, exc)
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
