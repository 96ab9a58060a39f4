"""scikit-learn compatible front ends.

``PointSampler`` reduces the rows of a feature matrix; ``GraphSampler``
reduces a weighted graph to the subgraph induced by its representatives.
Both expose the fitted scores as trailing-underscore attributes.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import SamplerConfig, sample
from .exceptions import InputError
from .graph import WeightedGraph, build_graph
from .vector import PointSet

__all__ = ["PointSampler", "GraphSampler"]


class _SamplerMixin:
    def _store(self, result):
        self.proximity_degree_ = result.scores.degree
        self.proximity_rank_ = result.scores.rank
        self.representativeness_ = result.scores.representativeness
        self.sample_indices_ = result.indices
        self.support_ = np.zeros(result.n_total, dtype=bool)
        self.support_[result.indices] = True
        self.result_ = result

    def get_support(self, indices: bool = False):
        check_is_fitted(self, "support_")
        return self.sample_indices_ if indices else self.support_


class PointSampler(_SamplerMixin, TransformerMixin, BaseEstimator):
    """Keep the rows that are nearest neighbors of enough of their neighbors.

    Parameters
    ----------
    log_base : float, default=2.0
        Base of the logarithm in ``rank / log(degree)``; must exceed 1.
        Smaller bases give smaller samples.
    radius : float, default=1.0
        Two rows are neighbors when their Euclidean distance is at most this.
    step : float or None, default=None
        Distances are floored to multiples of ``step`` before picking nearest
        neighbors. ``None`` ranks by the raw distance.
    threshold : float, default=1.0
        Minimum representativeness of a kept row.
    n_jobs : int or None, default=None
        Scoring threads; ``None`` or ``-1`` uses all available.

    Attributes
    ----------
    proximity_degree_, proximity_rank_ : ndarray of shape (n_samples,)
    representativeness_ : ndarray of shape (n_samples,)
    sample_indices_ : ndarray
        Row indices of the representatives, ascending.
    support_ : ndarray of bool
    """

    def __init__(self, log_base=2.0, radius=1.0, step=None, threshold=1.0, n_jobs=None):
        self.log_base = log_base
        self.radius = radius
        self.step = step
        self.threshold = threshold
        self.n_jobs = n_jobs

    def _config(self):
        return SamplerConfig(self.log_base, self.threshold, radius=self.radius, step=self.step)

    def fit(self, X, y=None):
        config = self._config()
        X = check_array(X, dtype=np.float64, ensure_min_samples=0)
        self.n_features_in_ = X.shape[1]
        self._store(sample(PointSet(X), config, n_jobs=self.n_jobs))
        return self

    def transform(self, X):
        """Rows of ``X`` selected during fit; ``X`` must be the fitted data."""
        check_is_fitted(self, "support_")
        X = check_array(X, dtype=None, ensure_min_samples=0)
        if len(X) != len(self.support_):
            raise ValueError(f"X has {len(X)} rows but the sampler was fitted on {len(self.support_)}")
        return X[self.support_]

    def fit_resample(self, X, y):
        """Sample ``X`` and the matching entries of ``y``."""
        self.fit(X)
        return np.asarray(X)[self.support_], np.asarray(y)[self.support_]


def _as_graph(G) -> WeightedGraph:
    if isinstance(G, WeightedGraph):
        return G
    if hasattr(G, "edges") and hasattr(G, "nodes") and hasattr(G, "is_directed"):
        if G.is_directed():
            raise InputError("directed graphs are not supported")
        return WeightedGraph.from_networkx(G)
    return build_graph(G)


class GraphSampler(_SamplerMixin, TransformerMixin, BaseEstimator):
    """Representative-node sampling of a weighted undirected graph.

    ``fit`` accepts a :class:`~nnrep.graph.WeightedGraph`, a networkx graph or
    an iterable of ``(label, label, weight)`` triples. ``transform`` returns the
    subgraph induced by the representatives.
    """

    def __init__(self, log_base=2.0, threshold=1.0):
        self.log_base = log_base
        self.threshold = threshold

    def fit(self, G, y=None):
        graph = _as_graph(G)
        self._store(sample(graph, SamplerConfig(self.log_base, self.threshold)))
        self.graph_ = graph
        self.subgraph_ = self.result_.subgraph
        self.n_nodes_in_ = graph.n_nodes
        return self

    def transform(self, G):
        check_is_fitted(self, "support_")
        graph = _as_graph(G)
        if graph.n_nodes != self.n_nodes_in_:
            raise ValueError(f"graph has {graph.n_nodes} nodes but the sampler was fitted on {self.n_nodes_in_}")
        return graph.induced_subgraph(self.sample_indices_)
