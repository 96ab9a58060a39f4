"""Bundled and synthetic datasets."""
from __future__ import annotations

import hashlib
from importlib import resources

import numpy as np

from .graph import WeightedGraph
from .vector import PointSet

LESMIS_SHA256 = "122e468cd081019b4256a1d50dc4d7f9b05eaaa50783aaee2170160b78895092"


def les_miserables_path():
    """Path of the bundled Les Misérables co-appearance edge list (77 nodes, 254 edges)."""
    return resources.files("nnrep") / "data" / "lesmis.csv"


def les_miserables() -> WeightedGraph:
    from .io import read_edge_list_file

    return read_edge_list_file(les_miserables_path())


def clustered_points(n: int, density: float = 0.01, cluster_size: int = 1000,
                     noise: float = 0.05, seed: int = 0) -> PointSet:
    """Gaussian blobs of varying spread on a square sized so ``n / area == density``.

    Doubling ``n`` doubles the area and the number of blobs, which keeps the
    local point density (and so the average neighborhood size) fixed.
    """
    rng = np.random.default_rng(seed)
    side = np.sqrt(n / density)
    n_noise = int(round(n * noise))
    n_blob = n - n_noise
    n_clusters = max(1, n_blob // cluster_size)
    centers = rng.uniform(0, side, size=(n_clusters, 2))
    spread = rng.uniform(0.5, 2.0, size=n_clusters) * np.sqrt(cluster_size / density) / 4
    which = rng.integers(0, n_clusters, size=n_blob)
    blobs = centers[which] + rng.normal(size=(n_blob, 2)) * spread[which, None]
    uniform = rng.uniform(0, side, size=(n_noise, 2))
    pts = np.concatenate([blobs, uniform])
    return PointSet(np.round(pts, 3)[rng.permutation(n)])


def birch_like(n: int = 100_000, n_clusters: int = 100, seed: int = 3) -> PointSet:
    """Random-size, random-location Gaussian clusters on a 1e6 x 1e6 square."""
    rng = np.random.default_rng(seed)
    sizes = rng.dirichlet(np.full(n_clusters, 0.7)) * n
    counts = np.floor(sizes).astype(int)
    counts[: n - counts.sum()] += 1
    centers = rng.uniform(5e4, 9.5e5, size=(n_clusters, 2))
    spread = rng.uniform(5e2, 8e3, size=n_clusters)
    pts = np.concatenate([
        centers[i] + rng.normal(size=(c, 2)) * spread[i] for i, c in enumerate(counts)
    ])
    return PointSet(np.round(pts[rng.permutation(n)]))


def scale_free_graph(n: int, m: int = 2, seed: int = 0) -> WeightedGraph:
    """Preferential-attachment graph with heavy-tailed positive edge weights."""
    rng = np.random.default_rng(seed)
    # Barabasi-Albert: each new node attaches to m distinct targets drawn
    # proportionally to degree (sampled from the endpoint list)
    us = np.empty((n - m) * m, dtype=np.int64)
    vs = np.empty_like(us)
    ends = np.empty(2 * len(us), dtype=np.int64)
    n_ends = 0
    e = 0
    for v in range(m, n):
        if n_ends == 0:
            targets = list(range(m))
        else:
            targets = set()
            while len(targets) < m:
                targets.update(ends[rng.integers(0, n_ends, size=m - len(targets))].tolist())
            targets = sorted(targets)
        for t in targets:
            us[e], vs[e] = v, t
            ends[n_ends], ends[n_ends + 1] = v, t
            n_ends += 2
            e += 1
    weights = np.round(rng.pareto(1.5, size=len(us)) + 1.0, 3)
    return WeightedGraph(n, us, vs, weights)


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
