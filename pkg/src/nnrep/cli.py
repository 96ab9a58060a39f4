"""Command line interface.

Exit status: 0 success, 1 data error, 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Optional, Sequence

from .core import SamplerConfig, local_sample, sample
from .datasets import file_sha256
from .exceptions import InputError, NNRepError
from .graph import WeightedGraph
from .io import (
    atomic_writer,
    is_sample_file,
    read_edge_list_file,
    read_points_file,
    read_region,
    read_sample,
    write_distribution,
    write_sample,
)
from .metrics import (
    cumulative_degree_distribution,
    cumulative_weight_distribution,
    grid_density_histogram,
    ks_distance,
    retention_pct,
)


def _real(name: str, lower: float, inclusive: bool):
    def parse(text: str) -> float:
        try:
            x = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a real number, got {text!r}") from None
        ok = math.isfinite(x) and (x >= lower if inclusive else x > lower)
        if not ok:
            op = ">=" if inclusive else ">"
            raise argparse.ArgumentTypeError(f"{name} must be {op} {lower:g}, got {text!r}")
        return x

    return parse


def _threads(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--threads must be an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("--threads must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nnrep",
        description="Deterministic nearest-neighbor representative sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def sampler_flags(p, points: bool, region: bool):
        p.add_argument("input", help="edge list (source,target,weight)" if not points else "point table")
        p.add_argument("-o", "--output", help="sample file to write")
        p.add_argument("--log-base", type=_real("--log-base", 1, False), required=True)
        p.add_argument("--threshold", type=_real("--threshold", 0, True), default=1.0)
        if points:
            p.add_argument("--radius", type=_real("--radius", 0, False), required=not region)
            p.add_argument("--step", type=_real("--step", 0, False))
        if region:
            p.add_argument("--region", required=True, help="file with one object label per line")
        else:
            p.add_argument("--emit-metrics", action="store_true",
                           help="also write distribution tables next to the output")
            p.add_argument("--threads", type=_threads, default=None,
                           help="scoring threads (default: all cores)")

    sampler_flags(sub.add_parser("sample-graph", help="sample a weighted graph"), False, False)
    sampler_flags(sub.add_parser("sample-points", help="sample n-dimensional points"), True, False)
    sampler_flags(sub.add_parser("local-sample", help="sample only a region of a graph or point set"),
                  True, True)

    m = sub.add_parser("metrics", help="compare a graph with its sample")
    m.add_argument("original", help="original edge list")
    m.add_argument("sample", help="sample file or sampled edge list")
    m.add_argument("-o", "--output-dir", required=True)
    return parser


def _summary(n_selected: int, n_total: int) -> str:
    pct = f"{retention_pct(n_total, n_selected)}%" if n_total else "n/a"
    return f"{n_selected}/{n_total} objects ({pct})"


def _stem(path: str) -> str:
    root, ext = os.path.splitext(path)
    return root if ext else path


def _write_distributions(prefix: str, original: WeightedGraph, sampled: WeightedGraph) -> list[str]:
    tables = {
        "degree": (cumulative_degree_distribution(original), cumulative_degree_distribution(sampled)),
        "weight": (cumulative_weight_distribution(original), cumulative_weight_distribution(sampled)),
    }
    notes = []
    for name, (a, b) in tables.items():
        for which, dist in (("original", a), ("sample", b)):
            with atomic_writer(f"{prefix}{name}_{which}.csv") as fh:
                write_distribution(dist, fh)
        ks = ks_distance(a, b) if len(a) and len(b) else float("nan")
        notes.append(f"ks_{name}={ks:.6f}")
    return notes


def _graph_retention(original: WeightedGraph, sampled: WeightedGraph) -> str:
    nodes = retention_pct(original.n_nodes, sampled.n_nodes) if original.n_nodes else "n/a"
    edges = retention_pct(original.n_edges, sampled.n_edges) if original.n_edges else "n/a"
    return f"retention nodes={nodes}% edges={edges}%"


def _write_density(prefix: str, points, sampled, cell: float):
    for which, ps in (("original", points), ("sample", sampled)):
        hist = grid_density_histogram(ps, cell)
        with atomic_writer(f"{prefix}density_{which}.csv") as fh:
            fh.write(b"cell_x,cell_y,count\n")
            for (i, j), c in sorted(hist.items()):
                fh.write(f"{i},{j},{c}\n".encode())


def _run_sample(args, points: bool) -> int:
    config = SamplerConfig(args.log_base, args.threshold,
                           radius=getattr(args, "radius", None), step=getattr(args, "step", None))
    data = read_points_file(args.input) if points else read_edge_list_file(args.input)
    result = sample(data, config, n_jobs=args.threads, checksum="sha256:" + file_sha256(args.input))
    if args.output:
        with atomic_writer(args.output) as fh:
            write_sample(result, fh)
    lines = [_summary(len(result), result.n_total)]
    if args.emit_metrics:
        prefix = _stem(args.output) + "."
        if points:
            if data.dim == 2:
                _write_density(prefix, data, data.subset(result.indices), config.radius)
        else:
            notes = _write_distributions(prefix, data, result.subgraph)
            lines.append(" ".join([_graph_retention(data, result.subgraph)] + notes))
    print("\n".join(lines))
    return 0


def _run_local(args) -> int:
    points = args.radius is not None
    config = SamplerConfig(args.log_base, args.threshold, radius=args.radius, step=args.step)
    data = read_points_file(args.input) if points else read_edge_list_file(args.input)
    with open(args.region, "rb") as fh:
        labels = read_region(fh)
    if points:
        if data.labels is not None:
            index = {lab: i for i, lab in enumerate(data.labels)}
            region = [_lookup(index, lab) for lab in labels]
        else:
            region = [_point_id(lab, len(data)) for lab in labels]
    else:
        region = [data.node_id(lab) for lab in labels]
    result = local_sample(data, region, config)
    result.checksum = "sha256:" + file_sha256(args.input)
    if args.output:
        with atomic_writer(args.output) as fh:
            write_sample(result, fh)
    print(_summary(len(result), len(result.scores)))
    return 0


def _lookup(index: dict, label: str) -> int:
    try:
        return index[label]
    except KeyError:
        raise InputError(f"unknown point id {label!r}") from None


def _point_id(label: str, n: int) -> int:
    try:
        i = int(label)
    except ValueError:
        raise InputError(f"unknown point id {label!r}") from None
    if not 0 <= i < n:
        raise InputError(f"unknown point id {label!r}")
    return i


def _run_metrics(args) -> int:
    original = read_edge_list_file(args.original)
    if is_sample_file(args.sample):
        with open(args.sample, "rb") as fh:
            members = read_sample(fh).members
        sampled = original.induced_subgraph(original.node_id(m) for m in members)
    else:
        sampled = read_edge_list_file(args.sample)
    os.makedirs(args.output_dir, exist_ok=True)
    notes = _write_distributions(os.path.join(args.output_dir, ""), original, sampled)
    print(" ".join([_graph_retention(original, sampled)] + notes))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "emit_metrics", False) and not args.output:
        parser.error("--emit-metrics requires --output")
    if args.command == "local-sample" and args.step is not None and args.radius is None:
        parser.error("--step requires --radius")
    try:
        if args.command == "sample-graph":
            return _run_sample(args, points=False)
        if args.command == "sample-points":
            return _run_sample(args, points=True)
        if args.command == "local-sample":
            return _run_local(args)
        return _run_metrics(args)
    except (NNRepError, OSError) as exc:
        print(f"nnrep: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
