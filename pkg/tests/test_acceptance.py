"""Exit criteria. Each test carries ``@pytest.mark.acceptance`` and the
terminal summary prints one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``. Regenerate the
scale-free baseline with ``python -m tests.test_acceptance``.
"""
import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from nnrep import PointSet, SamplerConfig, as_provider, local_sample, sample, score
from nnrep.datasets import clustered_points, file_sha256, les_miserables_path, scale_free_graph
from nnrep.datasets import LESMIS_SHA256
from nnrep.graph import WeightedGraph
from nnrep.io import read_points_file
from nnrep.metrics import cumulative_degree_distribution, cumulative_weight_distribution, ks_distance

from . import oracle
from .conftest import random_graph, random_points

HERE = Path(__file__).parent
BASELINE = HERE / "baselines" / "scale_free_100k.json"
acceptance = pytest.mark.acceptance


def note(request, text):
    request.node.user_properties.append(("detail", text))
    print(text)


def best_of(n, fn):
    best = float("inf")
    for _ in range(n):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def graph_of(n, edges):
    return WeightedGraph(n, [e[0] for e in edges], [e[1] for e in edges], [e[2] for e in edges])


def random_instance(rng):
    if rng.random() < 0.5:
        return graph_of(*random_graph(rng))
    coords, radius, step = random_points(rng)
    return PointSet(coords), radius, step


def config_for(inst, base):
    if isinstance(inst, tuple):
        return inst[0], SamplerConfig(base, radius=inst[1], step=inst[2])
    return inst, SamplerConfig(base)


@acceptance("Les Miserables counts")
def test_les_miserables(request, lesmis):
    assert file_sha256(les_miserables_path()) == LESMIS_SHA256
    got = []
    t = time.perf_counter()
    for base in (3, 2, 1.8):
        r = sample(lesmis, SamplerConfig(base))
        got.append((len(r), r.subgraph.n_edges))
    elapsed = time.perf_counter() - t
    note(request, f"nodes/edges {got} in {elapsed:.3f}s")
    assert got == [(31, 67), (22, 27), (10, 12)]
    assert elapsed < 1.0


def _points_table(request, path, base, step, expected, limit):
    ps = read_points_file(path)
    counts = []
    t = time.perf_counter()
    for radius, want in expected:
        counts.append(len(sample(ps, SamplerConfig(base, radius=radius, step=step), n_jobs=1)))
    elapsed = time.perf_counter() - t
    note(request, f"{len(ps)} points -> {counts} vs {[w for _, w in expected]} in {elapsed:.1f}s")
    for got, (_, want) in zip(counts, expected):
        assert abs(got - want) <= 0.02 * want
    assert elapsed < limit


@acceptance("Birch3 counts")
def test_birch3(request):
    path = os.environ.get("NNREP_BIRCH3", str(HERE / "data" / "birch3.txt"))
    if not os.path.exists(path):
        note(request, "birch3 data not available; set NNREP_BIRCH3")
        pytest.fail(f"Birch3 dataset not found at {path}")
    _points_table(request, path, 4, 100, [(50, 44_098), (100, 24_745), (200, 14_835)], 30)


@pytest.fixture(scope="module")
def scaling_sets():
    return {n: clustered_points(n) for n in (250_000, 500_000, 1_000_000, 2_000_000)}


@acceptance("Czech map counts or 2M substitute")
def test_czech(request, scaling_sets):
    path = os.environ.get("NNREP_CZECH")
    if path:
        _points_table(request, path, 1.3, 10, [(50, 206_603), (100, 55_641), (200, 21_965)], float("inf"))
        return
    ps = scaling_sets[2_000_000]
    t = time.perf_counter()
    result = sample(ps, SamplerConfig(1.3, radius=10, step=1))
    elapsed = time.perf_counter() - t
    note(request, f"substitute: {len(ps)} points sampled to {len(result)} in {elapsed:.1f}s")
    assert elapsed < 60


@acceptance("Linear scaling")
def test_linear_scaling(request, scaling_sets):
    times = []
    for n, ps in scaling_sets.items():
        provider = as_provider(ps, 10, 1)
        times.append(best_of(3, lambda: score(provider)))
    ratios = [b / a for a, b in zip(times, times[1:])]
    note(request, "times " + " ".join(f"{t:.2f}" for t in times) + " ratios " + " ".join(f"{r:.2f}" for r in ratios))
    assert all(r <= 2.5 for r in ratios)


def scale_free_summary():
    g = scale_free_graph(100_000)
    deg, wt = cumulative_degree_distribution(g), cumulative_weight_distribution(g)
    rows = []
    for base in (2, 1.5, 1.3):
        s = sample(g, SamplerConfig(base)).subgraph
        rows.append({
            "log_base": base,
            "nodes": s.n_nodes,
            "edges": s.n_edges,
            "ks_degree": ks_distance(deg, cumulative_degree_distribution(s)),
            "ks_weight": ks_distance(wt, cumulative_weight_distribution(s)),
        })
    return {"n_nodes": g.n_nodes, "n_edges": g.n_edges, "samples": rows}


@acceptance("Scale-free substitute")
def test_scale_free(request):
    got = scale_free_summary()
    frozen = json.loads(BASELINE.read_text())
    rows = got["samples"]
    note(request, " ".join(f"x={r['log_base']}:{r['nodes']}/{r['edges']} ks={r['ks_degree']:.3f},{r['ks_weight']:.3f}"
                           for r in rows))
    nodes = [r["nodes"] for r in rows]
    edges = [r["edges"] for r in rows]
    assert nodes == sorted(nodes, reverse=True) and len(set(nodes)) == 3
    assert edges == sorted(edges, reverse=True) and len(set(edges)) == 3
    assert (got["n_nodes"], got["n_edges"]) == (frozen["n_nodes"], frozen["n_edges"])
    for r, f in zip(rows, frozen["samples"]):
        assert (r["log_base"], r["nodes"], r["edges"]) == (f["log_base"], f["nodes"], f["edges"])
        assert r["ks_degree"] == pytest.approx(f["ks_degree"], abs=1e-12)
        assert r["ks_weight"] == pytest.approx(f["ks_weight"], abs=1e-12)


@acceptance("Oracle equivalence")
def test_oracle_equivalence(request):
    rng = random.Random(2024)
    graphs = points = 0
    for _ in range(120):
        n, edges = random_graph(rng)
        t = score(graph_of(n, edges))
        d, k = oracle.graph_scores(n, edges)
        assert t.degree.tolist() == d and t.rank.tolist() == k
        graphs += 1
    for _ in range(120):
        coords, radius, step = random_points(rng)
        t = score(as_provider(PointSet(coords), radius, step))
        d, k = oracle.point_scores(coords.tolist(), radius, step)
        assert t.degree.tolist() == d and t.rank.tolist() == k
        base = rng.choice([1.3, 2, 4])
        assert sample(PointSet(coords), SamplerConfig(base, radius=radius, step=step)).indices.tolist() \
            == oracle.sample_ids(d, k, base)
        points += 1
    note(request, f"{graphs} graphs, {points} point sets identical")


@acceptance("Nesting")
def test_nesting(request):
    rng = random.Random(77)
    checked = 0
    for _ in range(40):
        inst = random_instance(rng)
        x2, x1 = sorted(rng.sample([1.1, 1.3, 1.5, 2, 3, 4, 10], 2))
        data, c1 = config_for(inst, x1)
        _, c2 = config_for(inst, x2)
        assert set(sample(data, c2).indices.tolist()) <= set(sample(data, c1).indices.tolist())
        checked += 1
    note(request, f"{checked} instances, 0 violations")


@acceptance("Locality")
def test_locality(request):
    rng = random.Random(55)
    checked = 0
    for _ in range(80):
        inst = random_instance(rng)
        data, cfg = config_for(inst, rng.choice([1.3, 2, 3]))
        n = data.n_objects if isinstance(data, WeightedGraph) else len(data)
        region = rng.sample(range(n), rng.randint(0, n)) if n else []
        full = set(sample(data, cfg).indices.tolist())
        assert set(local_sample(data, region, cfg).indices.tolist()) == full & set(region)
        checked += 1
    note(request, f"{checked} pairs, 0 violations")


@acceptance("Determinism")
def test_determinism(request, tmp_path):
    rng = np.random.default_rng(5)
    pts = tmp_path / "points.csv"
    pts.write_text("".join(f"{x:.2f},{y:.2f}\n" for x, y in rng.normal(0, 30, size=(20_000, 2))))
    graph = tmp_path / "graph.csv"
    graph.write_bytes(Path(les_miserables_path()).read_bytes())
    env = dict(os.environ, NUMBA_NUM_THREADS="4")
    jobs = {
        "graph": ["sample-graph", str(graph), "--log-base", "1.8"],
        "points": ["sample-points", str(pts), "--log-base", "1.5", "--radius", "3", "--step", "0.5"],
    }
    runs = 0
    for name, argv in jobs.items():
        outputs = set()
        for threads in ("1", "2", "4"):
            for i in range(3):
                out = tmp_path / f"{name}.{threads}.{i}.txt"
                subprocess.run([sys.executable, "-m", "nnrep", *argv, "--threads", threads, "-o", str(out)],
                               env=env, check=True, capture_output=True)
                outputs.add(out.read_bytes())
                runs += 1
        assert len(outputs) == 1, name
    note(request, f"{runs} CLI runs byte-identical")


if __name__ == "__main__":
    BASELINE.parent.mkdir(exist_ok=True)
    BASELINE.write_text(json.dumps(scale_free_summary(), indent=2) + "\n")
    print(f"wrote {BASELINE}")
