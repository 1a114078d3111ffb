import numpy as np
import pytest

from gsp.graph import build_from_edges, laplacian, random_weighted_graph
from gsp.spectral import eigendecompose


def complete_graph(n):
    return build_from_edges(
        [(f"v{i:02d}", f"v{j:02d}", 1.0) for i in range(n) for j in range(i + 1, n)]
    )


def path_graph(n):
    return build_from_edges([(f"v{i:02d}", f"v{i + 1:02d}", 1.0) for i in range(n - 1)])


def random_connected_graph(n, rng, p=0.5):
    while True:
        g = random_weighted_graph(n, p, rng)
        if g.is_connected():
            return g


def basis_of(g):
    return eigendecompose(laplacian(g), g.vertex_ids)


def random_subset(rng, n, size=None):
    if size is None:
        size = int(rng.integers(0, n + 1))
    return sorted(int(i) for i in rng.choice(n, size=size, replace=False))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
