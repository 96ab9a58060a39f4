"""Deterministic nearest-neighbor representative sampling for weighted graphs and point data."""
from .core import (
    NeighborhoodProvider,
    SampleResult,
    SamplerConfig,
    ScoreTable,
    local_sample,
    representativeness,
    sample,
    score,
    select,
)
from .estimators import GraphSampler, PointSampler
from .exceptions import ConfigError, InputError, NNRepError
from .graph import WeightedGraph, build_graph
from .vector import GridIndex, PointSet, as_provider, build_grid_index, discretize_distance

__version__ = "0.1.0"

__all__ = [
    "NeighborhoodProvider",
    "SampleResult",
    "SamplerConfig",
    "ScoreTable",
    "local_sample",
    "representativeness",
    "sample",
    "score",
    "select",
    "GraphSampler",
    "PointSampler",
    "ConfigError",
    "InputError",
    "NNRepError",
    "WeightedGraph",
    "build_graph",
    "GridIndex",
    "PointSet",
    "as_provider",
    "build_grid_index",
    "discretize_distance",
]
