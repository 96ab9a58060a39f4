"""Weighted undirected graphs as neighborhood providers.

Adjacent nodes are neighbors; the edge weight is the similarity, so the
nearest neighbors of a node are the endpoints of its heaviest incident edges.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from .core import NeighborhoodProvider
from .exceptions import InputError

__all__ = ["WeightedGraph", "build_graph"]


class WeightedGraph(NeighborhoodProvider):
    """Immutable undirected graph with positive edge weights.

    Edges are kept in input order in ``edge_u``, ``edge_v``, ``edge_w``; the
    adjacency is a CSR structure with neighbors sorted by id.
    """

    def __init__(self, n_nodes: int, edge_u, edge_v, edge_w,
                 labels: Optional[Sequence[str]] = None,
                 line_numbers: Optional[Sequence[int]] = None):
        n = int(n_nodes)
        u = np.asarray(edge_u, dtype=np.int64).ravel()
        v = np.asarray(edge_v, dtype=np.int64).ravel()
        w = np.asarray(edge_w, dtype=np.float64).ravel()
        if not len(u) == len(v) == len(w):
            raise InputError("edge arrays differ in length")
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise InputError(f"{len(labels)} labels for {n} nodes")

        def where(i):
            e = (u[i], v[i], w[i])
            if line_numbers is not None:
                return f"line {line_numbers[i]} ({labels[e[0]]}, {labels[e[1]]}, {e[2]!r})"
            return f"edge {i + 1} ({labels[e[0]]}, {labels[e[1]]}, {e[2]!r})"

        if len(u):
            out_of_range = (u < 0) | (u >= n) | (v < 0) | (v >= n)
            if out_of_range.any():
                raise InputError(f"node id out of range at edge {int(np.argmax(out_of_range)) + 1}")
            bad = ~(np.isfinite(w) & (w > 0))
            if bad.any():
                raise InputError(f"edge weight must be positive and finite at {where(int(np.argmax(bad)))}")
            loops = u == v
            if loops.any():
                raise InputError(f"self-loop at {where(int(np.argmax(loops)))}")
            lo, hi = np.minimum(u, v), np.maximum(u, v)
            key = lo * n + hi
            order = np.argsort(key, kind="stable")
            dup = np.flatnonzero(key[order][1:] == key[order][:-1])
            if len(dup):
                # earliest edge repeating a pair seen before it
                raise InputError(f"duplicate edge at {where(int(order[dup + 1].min()))}")

        self._n = n
        self.labels = list(labels)
        self.edge_u, self.edge_v, self.edge_w = u, v, w
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        wt = np.concatenate([w, w])
        order = np.lexsort((dst, src))
        self.indices = dst[order]
        self.weights = wt[order]
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=self.indptr[1:])
        for a in (self.edge_u, self.edge_v, self.edge_w, self.indices, self.weights, self.indptr):
            a.flags.writeable = False
        self._label_index = None

    @property
    def n_objects(self) -> int:
        return self._n

    @property
    def n_nodes(self) -> int:
        return self._n

    @property
    def n_edges(self) -> int:
        return len(self.edge_u)

    def __repr__(self) -> str:
        return f"WeightedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.labels == other.labels
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.weights, other.weights))

    __hash__ = None

    def node_id(self, label: str) -> int:
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._label_index[label]
        except KeyError:
            raise InputError(f"unknown node label {label!r}") from None

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def _row(self, o: int) -> slice:
        o = self.check_id(o)
        return slice(self.indptr[o], self.indptr[o + 1])

    def neighborhood(self, o: int) -> frozenset:
        return frozenset(self.indices[self._row(o)].tolist())

    def nearest_neighbors(self, o: int) -> frozenset:
        row = self._row(o)
        w = self.weights[row]
        if not len(w):
            return frozenset()
        return frozenset(self.indices[row][w == w.max()].tolist())

    def edge_weight(self, a: int, b: int) -> float:
        row = self._row(a)
        nbrs = self.indices[row]
        j = np.searchsorted(nbrs, b)
        if j < len(nbrs) and nbrs[j] == b:
            return float(self.weights[row][j])
        raise InputError(f"no edge between {a} and {b}")

    def max_incident_weight(self) -> np.ndarray:
        """Largest incident weight per node, ``-inf`` for isolated nodes."""
        out = np.full(self._n, -np.inf)
        deg = self.degrees()
        nonempty = deg > 0
        if nonempty.any():
            out[nonempty] = np.maximum.reduceat(self.weights, self.indptr[:-1][nonempty])
        return out

    def proximity_counts(self, n_jobs: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
        deg = self.degrees().astype(np.int64)
        src = np.repeat(np.arange(self._n), deg)
        is_nn = self.weights == self.max_incident_weight()[src]
        rank = np.bincount(self.indices[is_nn], minlength=self._n).astype(np.int64)
        return deg, rank

    def induced_subgraph(self, nodes: Iterable[int]) -> "WeightedGraph":
        """Subgraph on ``nodes`` (relabelled in ascending id order) keeping every inner edge."""
        keep = np.array(sorted({self.check_id(o) for o in nodes}), dtype=np.int64)
        new_id = np.full(self._n, -1, dtype=np.int64)
        new_id[keep] = np.arange(len(keep))
        inner = (new_id[self.edge_u] >= 0) & (new_id[self.edge_v] >= 0)
        return WeightedGraph(
            len(keep),
            new_id[self.edge_u[inner]],
            new_id[self.edge_v[inner]],
            self.edge_w[inner],
            labels=[self.labels[i] for i in keep],
        )

    def edges(self):
        """Yield ``(label, label, weight)`` in input order."""
        for a, b, w in zip(self.edge_u.tolist(), self.edge_v.tolist(), self.edge_w.tolist()):
            yield self.labels[a], self.labels[b], w

    @classmethod
    def from_networkx(cls, g, weight: str = "weight") -> "WeightedGraph":
        return build_graph(((str(a), str(b), d.get(weight, 1.0)) for a, b, d in g.edges(data=True)),
                           labels=[str(n) for n in g.nodes])

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.labels)
        g.add_weighted_edges_from(self.edges())
        return g


def build_graph(edges: Iterable[tuple], line_numbers: Optional[Sequence[int]] = None,
                labels: Optional[Iterable[str]] = None) -> WeightedGraph:
    """Build a graph from ``(label, label, weight)`` triples.

    Node ids follow first appearance of labels. ``labels`` pre-registers nodes
    (e.g. isolated ones) ahead of the edges.
    """
    index: dict[str, int] = {}
    names: list[str] = []

    def node(label):
        i = index.get(label)
        if i is None:
            if not isinstance(label, str) or not label:
                raise InputError(f"node label must be a non-empty string, got {label!r}")
            i = index[label] = len(names)
            names.append(label)
        return i

    for lab in labels or ():
        node(lab)
    us, vs, ws = [], [], []
    for a, b, w in edges:
        us.append(node(a))
        vs.append(node(b))
        try:
            ws.append(float(w))
        except (TypeError, ValueError):
            raise InputError(f"edge weight {w!r} is not a number") from None
    return WeightedGraph(len(names), us, vs, ws, labels=names, line_numbers=line_numbers)
