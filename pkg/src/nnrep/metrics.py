"""Structure-preservation measures for samples."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .exceptions import InputError
from .graph import WeightedGraph
from .vector import PointSet

__all__ = [
    "CumulativeDistribution",
    "RetentionStats",
    "cumulative_distribution",
    "cumulative_degree_distribution",
    "cumulative_weight_distribution",
    "retention_pct",
    "retention_stats",
    "ks_distance",
    "grid_density_histogram",
]


@dataclass(eq=False)
class CumulativeDistribution:
    """Ascending ``values`` with ``fractions[i]`` = share of the population >= ``values[i]``."""

    values: np.ndarray
    fractions: np.ndarray
    population: Optional[int] = None

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CumulativeDistribution):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(self.fractions, other.fractions)

    def at(self, v) -> np.ndarray:
        """Share of the population with value >= ``v``."""
        v = np.asarray(v, dtype=np.float64)
        j = np.searchsorted(self.values, v, side="left")
        padded = np.append(self.fractions, 0.0)
        return padded[j]


def cumulative_distribution(sample) -> CumulativeDistribution:
    x = np.asarray(sample, dtype=np.float64).ravel()
    if not len(x):
        return CumulativeDistribution(np.zeros(0), np.zeros(0), 0)
    values, counts = np.unique(x, return_counts=True)
    at_least = np.cumsum(counts[::-1])[::-1]
    return CumulativeDistribution(values, at_least / len(x), len(x))


def cumulative_degree_distribution(g: WeightedGraph) -> CumulativeDistribution:
    return cumulative_distribution(g.degrees())


def cumulative_weight_distribution(g: WeightedGraph) -> CumulativeDistribution:
    return cumulative_distribution(g.edge_w)


@dataclass(frozen=True)
class RetentionStats:
    node_pct: int
    edge_pct: Optional[int] = None


def retention_pct(original: int, kept: int) -> int:
    """``100 * kept / original`` rounded half up to an integer."""
    if original <= 0:
        raise InputError("retention is undefined for an empty original")
    if not 0 <= kept <= original:
        raise InputError(f"sample count {kept} outside [0, {original}]")
    return int(Fraction(100 * kept, original) + Fraction(1, 2))


def retention_stats(original_counts: Union[int, tuple], sample_counts: Union[int, tuple]) -> RetentionStats:
    """Retention percentages from ``(nodes, edges)`` or bare node/point counts."""
    if isinstance(original_counts, tuple):
        n0, e0 = original_counts
        n1, e1 = sample_counts
        return RetentionStats(retention_pct(n0, n1), retention_pct(e0, e1))
    return RetentionStats(retention_pct(original_counts, sample_counts))


def ks_distance(a: CumulativeDistribution, b: CumulativeDistribution) -> float:
    """Largest gap between two cumulative curves over the union of their values."""
    if not len(a) or not len(b):
        raise InputError("ks_distance needs two non-empty distributions")
    grid = np.union1d(a.values, b.values)
    return float(np.max(np.abs(a.at(grid) - b.at(grid))))


def grid_density_histogram(ps: PointSet, cell: float) -> dict[tuple[int, int], int]:
    if ps.dim != 2:
        raise InputError(f"density histograms need 2-dimensional points, got dim={ps.dim}")
    if not cell > 0:
        raise InputError(f"cell size must be > 0, got {cell!r}")
    if not len(ps):
        return {}
    keys, counts = np.unique(np.floor(ps.coords / cell).astype(np.int64), axis=0, return_counts=True)
    return {(int(i), int(j)): int(c) for (i, j), c in zip(keys.tolist(), counts.tolist())}
