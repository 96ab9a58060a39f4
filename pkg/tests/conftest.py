import random

import numpy as np
import pytest

from nnrep.datasets import les_miserables
from nnrep.graph import build_graph

_acceptance = []


@pytest.fixture
def four_graph():
    """a-b:3, b-c:1, c-d:2, a-c:1 with ids a=0, b=1, c=2, d=3."""
    return build_graph([("a", "b", 3), ("b", "c", 1), ("c", "d", 2), ("a", "c", 1)])


@pytest.fixture(scope="session")
def lesmis():
    return les_miserables()


def random_graph(rng: random.Random, max_nodes=50):
    n = rng.randint(1, max_nodes)
    p = rng.choice([0.05, 0.1, 0.3, 0.6])
    ties = rng.random() < 0.5
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                w = rng.randint(1, 4) if ties else round(rng.uniform(0.1, 10), 3)
                edges.append((u, v, w) if rng.random() < 0.5 else (v, u, w))
    rng.shuffle(edges)
    return n, edges


def random_points(rng: random.Random, max_points=200):
    n = rng.randint(0, max_points)
    dim = rng.choice([1, 2, 2, 3])
    if rng.random() < 0.5:
        # integer lattice: duplicates and exact-boundary distances
        coords = [[float(rng.randint(0, 30)) for _ in range(dim)] for _ in range(n)]
        radius = float(rng.choice([1, 2, 3, 5, 8]))
    else:
        coords = [[round(rng.uniform(-50, 50), 4) for _ in range(dim)] for _ in range(n)]
        radius = rng.uniform(1, 25)
    step = rng.choice([None, radius / 10, radius / 3, radius, 2 * radius, 0.7])
    return np.array(coords, dtype=float).reshape(n, dim), radius, step


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): exit criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    _acceptance.append((marker.args[0], report.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _acceptance:
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
