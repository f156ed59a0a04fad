import numpy as np
import pytest

from equihyper.hypergraph import build_hypergraph
from equihyper.utils import clear_operator_cache


def _random_edges(rng: np.random.Generator, node_count: int, edge_count: int, max_size: int):
    edges = []
    for _ in range(edge_count):
        size = int(rng.integers(1, min(max_size, node_count) + 1))
        edges.append(rng.choice(node_count, size=size, replace=False).tolist())
    return edges


@pytest.fixture
def random_hypergraph():
    """
    Factory fixture: `random_hypergraph(seed, node_count, edge_count, max_size)`
    returns a random hypergraph. Isolated nodes are possible.
    """

    def build(seed: int, node_count: int = 12, edge_count: int = 8, max_size: int = 4):
        rng = np.random.default_rng(seed)
        return build_hypergraph(node_count, _random_edges(rng, node_count, edge_count, max_size))

    return build


@pytest.fixture
def toy_hypergraph():
    """Four nodes, three hyperedges, every node covered."""
    return build_hypergraph(4, [[0, 1], [1, 2, 3], [0, 3]])


@pytest.fixture(autouse=True)
def fresh_operator_cache():
    clear_operator_cache()
    yield
    clear_operator_cache()
