"""Plain-text readers and writers for edge lists, point tables, samples and distributions.

Data lines are split on tab or comma (whichever the first data line uses,
falling back to runs of whitespace).  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import io
import math
import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import IO, Iterator, Optional, Union

import numpy as np

from .exceptions import InputError
from .graph import WeightedGraph, build_graph
from .vector import PointSet

__all__ = [
    "EdgeList",
    "SampleFile",
    "format_number",
    "read_edge_list",
    "read_edge_list_file",
    "read_points",
    "read_points_file",
    "read_region",
    "write_sample",
    "read_sample",
    "write_distribution",
    "read_distribution",
    "atomic_writer",
]

SAMPLE_MAGIC = "# nnrep sample v1"
DISTRIBUTION_HEADER = "value,cumulative_fraction"


class EdgeList(list):
    """List of ``(label, label, weight)`` triples that remembers source line numbers."""

    def __init__(self, items=(), line_numbers=()):
        super().__init__(items)
        self.line_numbers = list(line_numbers)


def format_number(x) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _lines(source) -> Iterator[tuple[int, str]]:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for no, raw in enumerate(source, start=1):
        if isinstance(raw, (bytes, bytearray)):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError:
                raise InputError(f"line {no}: not valid UTF-8") from None
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield no, line


def _splitter(line: str):
    if "\t" in line:
        return lambda s: [f.strip() for f in s.split("\t")]
    if "," in line:
        return lambda s: [f.strip() for f in s.split(",")]
    return str.split


def _real(text: str) -> Optional[float]:
    try:
        return float(text)
    except ValueError:
        return None


def read_edge_list(source) -> EdgeList:
    """Parse ``source,target,weight`` lines into triples in file order.

    A first line whose weight column reads ``weight`` is taken as a header.
    """
    out = EdgeList()
    split = None
    for no, line in _lines(source):
        if split is None:
            split = _splitter(line)
            fields = split(line)
            if len(fields) == 3 and fields[2].lower() == "weight":
                continue
        else:
            fields = split(line)
        if len(fields) != 3:
            raise InputError(f"line {no}: expected 3 fields, got {len(fields)}: {line!r}")
        a, b, w = fields
        if not a or not b:
            raise InputError(f"line {no}: empty node label: {line!r}")
        weight = _real(w)
        if weight is None or not math.isfinite(weight) or weight <= 0:
            raise InputError(f"line {no}: weight must be a positive real: {line!r}")
        out.append((a, b, weight))
        out.line_numbers.append(no)
    return out


def read_edge_list_file(path) -> WeightedGraph:
    with open(path, "rb") as fh:
        edges = read_edge_list(fh)
    return build_graph(edges, line_numbers=edges.line_numbers)


def read_points(source) -> PointSet:
    """Parse one point per line; a non-numeric first line is a header.

    When the header's first column is ``id`` that column becomes the point labels.
    """
    rows: list[list[float]] = []
    labels: Optional[list[str]] = None
    split = None
    width = None
    for no, line in _lines(source):
        if split is None:
            split = _splitter(line)
            fields = split(line)
            if any(_real(f) is None for f in fields):
                if fields[0].lower() == "id":
                    labels = []
                width = len(fields)
                continue
        else:
            fields = split(line)
        if width is None:
            width = len(fields)
        if len(fields) != width:
            raise InputError(f"line {no}: expected {width} fields, got {len(fields)}: {line!r}")
        if labels is not None:
            labels.append(fields[0])
            fields = fields[1:]
        values = [_real(f) for f in fields]
        if any(v is None or not math.isfinite(v) for v in values):
            raise InputError(f"line {no}: coordinates must be finite reals: {line!r}")
        rows.append(values)
    dim = (width or 1) - (labels is not None)
    if dim < 1:
        raise InputError("point table has no coordinate columns")
    coords = np.array(rows, dtype=np.float64).reshape(len(rows), dim)
    if labels is not None and len(set(labels)) != len(labels):
        raise InputError("duplicate point id")
    return PointSet(coords, labels)


def read_points_file(path) -> PointSet:
    with open(path, "rb") as fh:
        return read_points(fh)


def read_region(source) -> list[str]:
    """One object label per line."""
    return [line.strip() for _, line in _lines(source)]


def _writer(sink):
    if isinstance(sink, io.TextIOBase):
        return sink.write
    return lambda s: sink.write(s.encode("utf-8"))


def write_sample(result, sink) -> None:
    """Write a sample: ``# key: value`` header lines, then one member per line.

    Graph members are written as labels; point members as ``id,x1,...,xn``.
    """
    from .graph import WeightedGraph as _G

    write = _writer(sink)
    cfg = result.config
    data = result.dataset
    kind = "graph" if isinstance(data, _G) else "points" if isinstance(data, PointSet) else "objects"
    head = [("kind", kind), ("log_base", format_number(cfg.log_base)),
            ("threshold", format_number(cfg.threshold))]
    if kind == "points":
        head.append(("radius", format_number(cfg.radius)))
        head.append(("step", "none" if cfg.step is None else format_number(cfg.step)))
    if result.checksum:
        head.append(("checksum", result.checksum))
    head.append(("n_total", str(result.n_total)))
    if len(result.scores) != result.n_total:
        head.append(("region_size", str(len(result.scores))))
    head.append(("n_selected", str(len(result))))
    if kind == "graph":
        head.append(("n_edges_total", str(data.n_edges)))
        if result.subgraph is not None:
            head.append(("n_edges_selected", str(result.subgraph.n_edges)))
    write(SAMPLE_MAGIC + "\n")
    for key, value in head:
        write(f"# {key}: {value}\n")
    if kind == "graph":
        for i in result.indices.tolist():
            write(data.labels[i] + "\n")
    elif kind == "points":
        labels = data.labels
        for i in result.indices.tolist():
            name = labels[i] if labels is not None else str(i)
            coords = ",".join(format_number(v) for v in data.coords[i].tolist())
            write(f"{name},{coords}\n")
    else:
        for i in result.indices.tolist():
            write(f"{i}\n")


@dataclass
class SampleFile:
    header: dict = field(default_factory=dict)
    members: list = field(default_factory=list)

    @property
    def config(self):
        from .core import SamplerConfig

        h = self.header
        opt = lambda k: None if h.get(k, "none") == "none" else float(h[k])  # noqa: E731
        return SamplerConfig(float(h["log_base"]), float(h["threshold"]),
                             radius=opt("radius"), step=opt("step"))


def read_sample(source) -> SampleFile:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    out = SampleFile()
    for no, raw in enumerate(source, start=1):
        line = (raw.decode("utf-8") if isinstance(raw, bytes) else raw).rstrip("\r\n")
        if no == 1:
            if line != SAMPLE_MAGIC:
                raise InputError("line 1: not an nnrep sample file")
            continue
        if line.startswith("# "):
            key, sep, value = line[2:].partition(": ")
            if not sep:
                raise InputError(f"line {no}: malformed header {line!r}")
            out.header[key] = value
        elif line:
            if out.header.get("kind") == "points":
                out.members.append(line.split(",", 1)[0])
            else:
                out.members.append(line)
    return out


def is_sample_file(path) -> bool:
    with open(path, "rb") as fh:
        return fh.readline().rstrip(b"\r\n") == SAMPLE_MAGIC.encode()


def write_distribution(dist, sink) -> None:
    write = _writer(sink)
    write(DISTRIBUTION_HEADER + "\n")
    for v, f in zip(dist.values.tolist(), dist.fractions.tolist()):
        write(f"{format_number(v)},{format_number(f)}\n")


def read_distribution(source):
    from .metrics import CumulativeDistribution

    values, fractions = [], []
    for no, line in _lines(source):
        if line == DISTRIBUTION_HEADER:
            continue
        parts = line.split(",")
        if len(parts) != 2 or _real(parts[0]) is None or _real(parts[1]) is None:
            raise InputError(f"line {no}: expected 'value,cumulative_fraction': {line!r}")
        values.append(float(parts[0]))
        fractions.append(float(parts[1]))
    return CumulativeDistribution(np.array(values), np.array(fractions))


@contextmanager
def atomic_writer(path: Union[str, os.PathLike]) -> Iterator[IO[bytes]]:
    """Binary file handle whose contents replace ``path`` only on clean exit."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".nnrep-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            yield fh
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
