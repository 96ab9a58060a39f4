"""Nearest-neighbor representative sampling over an abstract neighborhood provider.

Every object ``o`` gets a proximity degree ``d(o)`` (size of its neighborhood)
and a proximity rank ``k(o)`` (how many objects list ``o`` among their nearest
neighbors).  The representativeness ``k / log_base(d)`` decides membership in
the sample.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

import mpmath
import numpy as np

from .exceptions import ConfigError, InputError

__all__ = [
    "NeighborhoodProvider",
    "SamplerConfig",
    "ScoreTable",
    "SampleResult",
    "representativeness",
    "representativeness_array",
    "score",
    "select",
    "sample",
    "local_sample",
]


class NeighborhoodProvider(ABC):
    """Symmetric proximity relation over objects ``0 .. n_objects - 1``.

    Subclasses may override :meth:`proximity_counts` with a bulk
    implementation; the default walks the per-object queries.
    """

    @property
    @abstractmethod
    def n_objects(self) -> int:
        ...

    @abstractmethod
    def neighborhood(self, o: int) -> frozenset:
        ...

    @abstractmethod
    def nearest_neighbors(self, o: int) -> frozenset:
        ...

    def proximity_counts(self, n_jobs: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
        return _generic_counts(self)

    def check_id(self, o: int) -> int:
        try:
            i = int(o)
        except (TypeError, ValueError):
            raise InputError(f"unknown object id {o!r}") from None
        if i != o or not 0 <= i < self.n_objects:
            raise InputError(f"unknown object id {o!r}")
        return i


@dataclass(frozen=True)
class SamplerConfig:
    log_base: float
    threshold: float = 1.0
    radius: Optional[float] = None
    step: Optional[float] = None

    def __post_init__(self):
        self.validate()

    def validate(self, points: bool = False) -> "SamplerConfig":
        if not _is_real(self.log_base) or not self.log_base > 1:
            raise ConfigError(f"log_base must be a real number > 1, got {self.log_base!r}")
        if not _is_real(self.threshold) or not self.threshold >= 0:
            raise ConfigError(f"threshold must be a real number >= 0, got {self.threshold!r}")
        if self.radius is not None and (not _is_real(self.radius) or not self.radius > 0):
            raise ConfigError(f"radius must be > 0, got {self.radius!r}")
        if self.step is not None and (not _is_real(self.step) or not self.step > 0):
            raise ConfigError(f"step must be > 0, got {self.step!r}")
        if points and self.radius is None:
            raise ConfigError("radius is required for point data")
        return self


def _is_real(x) -> bool:
    return isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool) \
        and math.isfinite(x)


@dataclass(eq=False)
class ScoreTable:
    """Per-object scores; ``ids[i]`` is the object described by row ``i``."""

    ids: np.ndarray
    degree: np.ndarray
    rank: np.ndarray
    representativeness: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.ids)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScoreTable):
            return NotImplemented
        fields = ("ids", "degree", "rank")
        if self.representativeness is not None or other.representativeness is not None:
            if self.representativeness is None or other.representativeness is None:
                return False
            fields += ("representativeness",)
        return all(np.array_equal(getattr(self, f), getattr(other, f)) for f in fields)

    def with_representativeness(self, log_base: float) -> "ScoreTable":
        r = representativeness_array(self.rank, self.degree, log_base)
        return ScoreTable(self.ids, self.degree, self.rank, r)


@dataclass(eq=False)
class SampleResult:
    indices: np.ndarray
    scores: ScoreTable
    config: SamplerConfig
    n_total: int
    dataset: Any = field(default=None, repr=False)
    checksum: Optional[str] = None
    subgraph: Any = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def members(self) -> list:
        """Representatives as dataset labels when available, else ids."""
        labels = getattr(self.dataset, "labels", None)
        if labels is None:
            return self.indices.tolist()
        return [labels[i] for i in self.indices]


def representativeness(k: int, d: int, log_base: float) -> float:
    """``k / log_base(d)``, with 0 for ``d == 0`` and ``k`` for ``d == 1``."""
    if not _is_real(log_base) or not log_base > 1:
        raise ConfigError(f"log_base must be > 1, got {log_base!r}")
    if k < 0 or d < 0:
        raise InputError(f"degree and rank must be non-negative (k={k}, d={d})")
    return float(representativeness_array([k], [d], log_base)[0])


_MP = mpmath.MPContext()
_MP.prec = 128


def representativeness_array(k, d, log_base: float) -> np.ndarray:
    """Vectorised :func:`representativeness`.

    Each value is the exact ratio ``k * ln(log_base) / ln(d)`` rounded once to
    float64, so ``d == log_base ** k`` yields exactly 1.0 and results are
    monotone in ``log_base``.
    """
    if not _is_real(log_base) or not log_base > 1:
        raise ConfigError(f"log_base must be > 1, got {log_base!r}")
    k = np.asarray(k, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    out = k.astype(np.float64)
    out[d == 0] = 0.0
    big = d >= 2
    if big.any():
        pairs, inv = np.unique(np.stack([k[big], d[big]], axis=1), axis=0, return_inverse=True)
        ln_base = _MP.log(_MP.mpf(float(log_base)))
        ln_d = {}
        vals = np.empty(len(pairs))
        for i, (kk, dd) in enumerate(pairs.tolist()):
            if dd not in ln_d:
                ln_d[dd] = _MP.log(dd)
            vals[i] = float(kk * ln_base / ln_d[dd])
        out[big] = vals[inv.ravel()]
    return out


def _generic_counts(provider: NeighborhoodProvider) -> tuple[np.ndarray, np.ndarray]:
    n = provider.n_objects
    degree = np.zeros(n, dtype=np.int64)
    rank = np.zeros(n, dtype=np.int64)
    for o in range(n):
        degree[o] = len(provider.neighborhood(o))
        for y in provider.nearest_neighbors(o):
            rank[y] += 1
    return degree, rank


def score(provider: NeighborhoodProvider, n_jobs: Optional[int] = None,
          generic: bool = False) -> ScoreTable:
    """Proximity degree and rank for every object of ``provider``.

    ``generic=True`` forces the per-object query loop even when the provider
    has a bulk implementation.
    """
    if generic:
        degree, rank = _generic_counts(provider)
    else:
        degree, rank = provider.proximity_counts(n_jobs=n_jobs)
    if np.any(rank > degree):
        bad = int(np.flatnonzero(rank > degree)[0])
        raise InputError(f"provider is not symmetric: rank exceeds degree at object {bad}")
    return ScoreTable(np.arange(provider.n_objects, dtype=np.int64), degree, rank)


def select(scores: ScoreTable, config: SamplerConfig, n_total: Optional[int] = None,
           dataset: Any = None, checksum: Optional[str] = None) -> SampleResult:
    table = scores.with_representativeness(config.log_base)
    chosen = table.ids[table.representativeness >= config.threshold]
    return SampleResult(
        indices=np.sort(chosen),
        scores=table,
        config=config,
        n_total=len(table) if n_total is None else n_total,
        dataset=dataset,
        checksum=checksum,
    )


def _provider_for(dataset, config: SamplerConfig) -> NeighborhoodProvider:
    from .graph import WeightedGraph
    from .vector import PointSet, as_provider

    if isinstance(dataset, WeightedGraph):
        if config.radius is not None or config.step is not None:
            raise ConfigError("radius/step do not apply to graph data")
        return dataset
    if isinstance(dataset, PointSet):
        config.validate(points=True)
        return as_provider(dataset, config.radius, config.step)
    if isinstance(dataset, NeighborhoodProvider):
        return dataset
    raise InputError(f"cannot sample object of type {type(dataset).__name__}")


def sample(dataset, config: SamplerConfig, n_jobs: Optional[int] = None,
           checksum: Optional[str] = None) -> SampleResult:
    """Score every object of ``dataset`` and keep those at or above the threshold.

    For a :class:`~nnrep.graph.WeightedGraph` the result also carries the
    subgraph induced by the representatives.
    """
    from .graph import WeightedGraph

    provider = _provider_for(dataset, config)
    result = select(score(provider, n_jobs=n_jobs), config, dataset=dataset, checksum=checksum)
    if isinstance(dataset, WeightedGraph):
        result.subgraph = dataset.induced_subgraph(result.indices)
    return result


def local_sample(provider, region: Iterable[int], config: SamplerConfig) -> SampleResult:
    """The global sample restricted to ``region``, computed from its one-hop closure.

    Only the neighborhoods of the region and the nearest-neighbor sets of
    their members are queried.
    """
    from .graph import WeightedGraph

    dataset = provider
    if not isinstance(provider, NeighborhoodProvider):
        provider = _provider_for(provider, config)
    ids = np.array(sorted({provider.check_id(o) for o in region}), dtype=np.int64)
    degree = np.zeros(len(ids), dtype=np.int64)
    rank = np.zeros(len(ids), dtype=np.int64)
    nn_cache: dict[int, frozenset] = {}
    for i, o in enumerate(ids.tolist()):
        eps = provider.neighborhood(o)
        degree[i] = len(eps)
        for p in eps:
            nn = nn_cache.get(p)
            if nn is None:
                nn = nn_cache[p] = provider.nearest_neighbors(p)
            if o in nn:
                rank[i] += 1
    result = select(ScoreTable(ids, degree, rank), config, n_total=provider.n_objects,
                    dataset=dataset)
    if isinstance(dataset, WeightedGraph):
        result.subgraph = dataset.induced_subgraph(result.indices)
    return result
