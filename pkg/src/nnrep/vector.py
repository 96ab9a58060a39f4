"""Point data as a neighborhood provider.

Two points are neighbors when their Euclidean distance is at most ``radius``.
Nearest neighbors are ranked by distance floored to a multiple of ``step``
(raw distance when ``step`` is None), so near-equal neighbors tie.  Radius
queries go through a uniform grid with cell size equal to the radius.
"""
from __future__ import annotations

import itertools
import math
import os
from contextlib import contextmanager
from functools import cached_property
from typing import Optional, Sequence

import numba
import numpy as np
from numba import njit, prange

from .core import NeighborhoodProvider
from .exceptions import ConfigError, InputError

__all__ = [
    "PointSet",
    "GridIndex",
    "PointProvider",
    "build_grid_index",
    "discretize_distance",
    "as_provider",
]

_MAX_CELL = 2.0 ** 62

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


class PointSet:
    """``N`` points in ``n`` dimensions, optionally carrying string labels."""

    def __init__(self, coords, labels: Optional[Sequence[str]] = None):
        x = np.array(coords, dtype=np.float64, copy=True)
        if x.ndim == 1 and x.size == 0:
            x = x.reshape(0, 1)
        if x.ndim != 2 or x.shape[1] < 1:
            raise InputError(f"points must form an (N, n) array with n >= 1, got shape {x.shape}")
        if not np.isfinite(x).all():
            i = int(np.argmax(~np.isfinite(x).all(axis=1)))
            raise InputError(f"point {i} has a non-finite coordinate")
        if labels is not None:
            labels = list(labels)
            if len(labels) != len(x):
                raise InputError(f"{len(labels)} labels for {len(x)} points")
        x.flags.writeable = False
        self.coords = x
        self.labels = labels

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __repr__(self) -> str:
        return f"PointSet(n_points={len(self)}, dim={self.dim})"

    def subset(self, ids) -> "PointSet":
        ids = np.asarray(ids, dtype=np.int64)
        labels = None if self.labels is None else [self.labels[i] for i in ids]
        return PointSet(self.coords[ids], labels)


def discretize_distance(dist: float, step: float) -> float:
    """Floor ``dist`` to a multiple of ``step``.

    The product is nudged up by ulps when rounding would drop it into the
    bucket below, so discretizing an output again returns it unchanged.
    """
    if not step > 0:
        raise ConfigError(f"step must be > 0, got {step!r}")
    if dist < 0:
        raise InputError(f"distance must be non-negative, got {dist!r}")
    bucket = math.floor(dist / step)
    out = bucket * step
    while math.floor(out / step) < bucket:
        out = math.nextafter(out, math.inf)
    return out


class GridIndex:
    """Uniform grid over a point set.

    ``cells`` lists the occupied integer cell coordinates in lexicographic
    order; the points of cell ``c`` are ``order[cell_start[c]:cell_start[c+1]]``.
    """

    def __init__(self, points: PointSet, radius: float):
        if not (isinstance(radius, (int, float, np.number)) and math.isfinite(radius) and radius > 0):
            raise ConfigError(f"radius must be > 0, got {radius!r}")
        self.radius = float(radius)
        self.points = points
        x = points.coords
        with np.errstate(over="ignore"):
            scaled = np.floor(x / self.radius)
        if len(x) and not np.abs(scaled).max() < _MAX_CELL:
            raise ConfigError("radius too small for the coordinate range of the data")
        cell_of_point = scaled.astype(np.int64)
        n, dim = x.shape
        if n:
            order = np.lexsort(cell_of_point.T[::-1])
            sorted_cells = cell_of_point[order]
            boundary = np.ones(n, dtype=bool)
            boundary[1:] = (sorted_cells[1:] != sorted_cells[:-1]).any(axis=1)
            starts = np.flatnonzero(boundary)
        else:
            order = np.zeros(0, dtype=np.int64)
            sorted_cells = cell_of_point
            starts = np.zeros(0, dtype=np.int64)
        self.order = order.astype(np.int64)
        self.cells = np.ascontiguousarray(sorted_cells[starts])
        self.cell_start = np.append(starts, n).astype(np.int64)
        self.point_cell = np.empty(n, dtype=np.int64)
        if n:
            self.point_cell[self.order] = np.cumsum(boundary) - 1
        self.offsets = np.array(list(itertools.product((-1, 0, 1), repeat=dim)), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.cells)

    @cached_property
    def _lookup(self) -> dict:
        return {tuple(c): i for i, c in enumerate(self.cells.tolist())}

    def cell_members(self, c: int) -> np.ndarray:
        return self.order[self.cell_start[c]:self.cell_start[c + 1]]

    def block(self, c: int) -> list[int]:
        """Occupied cells in the 3**n block centred on cell ``c``."""
        base = self.cells[c]
        found = []
        for off in self.offsets:
            j = self._lookup.get(tuple((base + off).tolist()))
            if j is not None:
                found.append(j)
        return found

    def candidates(self, o: int) -> np.ndarray:
        """Every point that may lie within the radius of point ``o`` (includes ``o``)."""
        cells = self.block(int(self.point_cell[o]))
        if not cells:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate([self.cell_members(c) for c in cells]))


def build_grid_index(points: PointSet, radius: float) -> GridIndex:
    return GridIndex(points, radius)


@njit(cache=True)
def _lex_find(cells, row):
    lo, hi = 0, cells.shape[0]
    dim = cells.shape[1]
    while lo < hi:
        mid = (lo + hi) // 2
        cmp = 0
        for d in range(dim):
            if cells[mid, d] < row[d]:
                cmp = -1
                break
            if cells[mid, d] > row[d]:
                cmp = 1
                break
        if cmp == 0:
            return mid
        if cmp < 0:
            lo = mid + 1
        else:
            hi = mid
    return -1


@njit(cache=True)
def _rank_key(sq, step):
    if step > 0.0:
        return np.floor(np.sqrt(sq) / step)
    return sq


@njit(cache=True)
def _block_cells(cells, offsets, c, out, row):
    dim = cells.shape[1]
    cnt = 0
    for t in range(offsets.shape[0]):
        for d in range(dim):
            row[d] = cells[c, d] + offsets[t, d]
        j = _lex_find(cells, row)
        if j >= 0:
            out[cnt] = j
            cnt += 1
    return cnt


@njit(cache=True)
def _sq_dist(pts, a, b):
    sq = 0.0
    for d in range(pts.shape[1]):
        diff = pts[a, d] - pts[b, d]
        sq += diff * diff
    return sq


@njit(parallel=True, cache=True)
def _grid_counts(pts, cells, cell_start, offsets, r2, step):
    # pts is in grid order; pass 1 finds degree and the minimal rank key per
    # point, pass 2 counts for each point the neighbors whose minimum it attains
    n = pts.shape[0]
    ncell = cells.shape[0]
    noff = offsets.shape[0]
    degree = np.zeros(n, dtype=np.int64)
    best = np.full(n, np.inf)
    rank = np.zeros(n, dtype=np.int64)
    for c in prange(ncell):
        nb = np.empty(noff, dtype=np.int64)
        row = np.empty(cells.shape[1], dtype=np.int64)
        cnt = _block_cells(cells, offsets, c, nb, row)
        for a in range(cell_start[c], cell_start[c + 1]):
            deg = 0
            mn = np.inf
            for t in range(cnt):
                cc = nb[t]
                for b in range(cell_start[cc], cell_start[cc + 1]):
                    if b == a:
                        continue
                    sq = _sq_dist(pts, a, b)
                    if sq <= r2:
                        deg += 1
                        key = _rank_key(sq, step)
                        if key < mn:
                            mn = key
            degree[a] = deg
            best[a] = mn
    for c in prange(ncell):
        nb = np.empty(noff, dtype=np.int64)
        row = np.empty(cells.shape[1], dtype=np.int64)
        cnt = _block_cells(cells, offsets, c, nb, row)
        for a in range(cell_start[c], cell_start[c + 1]):
            k = 0
            for t in range(cnt):
                cc = nb[t]
                for b in range(cell_start[cc], cell_start[cc + 1]):
                    if b == a:
                        continue
                    sq = _sq_dist(pts, a, b)
                    if sq <= r2 and _rank_key(sq, step) == best[b]:
                        k += 1
            rank[a] = k
    return degree, rank


@contextmanager
def _threads(n_jobs: Optional[int]):
    limit = numba.config.NUMBA_NUM_THREADS
    if n_jobs is None or n_jobs < 0:
        wanted = limit
    else:
        wanted = max(1, min(int(n_jobs), limit))
    previous = numba.get_num_threads()
    numba.set_num_threads(wanted)
    try:
        yield
    finally:
        numba.set_num_threads(previous)


class PointProvider(NeighborhoodProvider):
    """Fixed-radius neighborhoods over a :class:`PointSet`."""

    def __init__(self, points: PointSet, radius: float, step: Optional[float] = None):
        if step is not None and not (math.isfinite(step) and step > 0):
            raise ConfigError(f"step must be > 0, got {step!r}")
        self.points = points
        self.radius = float(radius)
        self.step = None if step is None else float(step)
        self.index = build_grid_index(points, radius)

    @property
    def n_objects(self) -> int:
        return len(self.points)

    @property
    def labels(self):
        return self.points.labels

    def _neighbors(self, o: int) -> tuple[np.ndarray, np.ndarray]:
        o = self.check_id(o)
        x = self.points.coords
        cand = self.index.candidates(o)
        cand = cand[cand != o]
        sq = np.zeros(len(cand))
        for d in range(x.shape[1]):
            diff = x[o, d] - x[cand, d]
            sq += diff * diff
        close = sq <= self.radius * self.radius
        return cand[close], sq[close]

    def neighborhood(self, o: int) -> frozenset:
        ids, _ = self._neighbors(o)
        return frozenset(ids.tolist())

    def nearest_neighbors(self, o: int) -> frozenset:
        ids, sq = self._neighbors(o)
        if not len(ids):
            return frozenset()
        key = np.floor(np.sqrt(sq) / self.step) if self.step is not None else sq
        return frozenset(ids[key == key.min()].tolist())

    def proximity_counts(self, n_jobs: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
        n = self.n_objects
        idx = self.index
        if n == 0:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        pts = np.ascontiguousarray(self.points.coords[idx.order])
        step = 0.0 if self.step is None else self.step
        with _threads(n_jobs):
            deg_s, rank_s = _grid_counts(pts, idx.cells, idx.cell_start, idx.offsets,
                                         self.radius * self.radius, step)
        degree = np.empty(n, dtype=np.int64)
        rank = np.empty(n, dtype=np.int64)
        degree[idx.order] = deg_s
        rank[idx.order] = rank_s
        return degree, rank


def as_provider(points: PointSet, radius: float, step: Optional[float] = None) -> PointProvider:
    return PointProvider(points, radius, step)
