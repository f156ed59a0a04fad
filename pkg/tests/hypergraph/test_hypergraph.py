import numpy as np
import pytest

from equihyper.hypergraph import (
    DENSE_ORACLE_MAX_NODES,
    build_hypergraph,
    dense_laplacian_oracle,
    edge_inverse_sqrt_degrees,
    node_inverse_sqrt_degrees,
)
from equihyper.utils import ValidationError


def test_build_hypergraph(toy_hypergraph) -> None:
    hg = toy_hypergraph
    assert hg.node_count == 4
    assert hg.edge_count == 3
    assert hg.total_incidence == 7
    assert hg.max_edge_size == 3
    np.testing.assert_array_equal(hg.node_degrees, [2, 2, 1, 2])
    np.testing.assert_array_equal(hg.edge_degrees, [2, 3, 2])
    assert hg.node_to_edges[3] == (1, 2)
    np.testing.assert_array_equal(
        hg.incidence.toarray(),
        [[1, 0, 1], [1, 1, 0], [0, 1, 0], [0, 1, 1]],
    )


def test_degrees_match_incidence(random_hypergraph) -> None:
    for seed in range(100):
        hg = random_hypergraph(seed, node_count=5 + seed % 40, edge_count=1 + seed % 50, max_size=7)
        h = hg.incidence.toarray()
        np.testing.assert_array_equal(h.sum(axis=1), hg.node_degrees)
        np.testing.assert_array_equal(h.sum(axis=0), hg.edge_degrees)
        np.testing.assert_array_equal([len(e) for e in hg.hyperedges], hg.edge_degrees)
        np.testing.assert_array_equal([len(e) for e in hg.node_to_edges], hg.node_degrees)
        assert hg.incidence.nnz == hg.total_incidence == hg.node_degrees.sum()
        assert set(np.unique(h)) <= {0.0, 1.0}


def test_duplicate_members_are_dropped() -> None:
    hg = build_hypergraph(3, [[2, 0, 2]])
    assert hg.hyperedges == ((0, 2),)
    assert hg.total_incidence == 2


def test_duplicate_hyperedges_are_kept() -> None:
    hg = build_hypergraph(3, [[0, 1], [1, 0]])
    assert hg.edge_count == 2
    np.testing.assert_array_equal(hg.node_degrees, [2, 2, 0])


@pytest.mark.parametrize("edges", [[[]], [[0, 3]], [[-1, 0]]])
def test_invalid_hyperedges(edges) -> None:
    with pytest.raises(ValidationError):
        build_hypergraph(3, edges)


def test_invalid_node_count() -> None:
    with pytest.raises(ValidationError):
        build_hypergraph(0, [])


def test_arrays_are_read_only(toy_hypergraph) -> None:
    with pytest.raises(ValueError):
        toy_hypergraph.node_degrees[0] = 5


def test_fingerprint() -> None:
    a = build_hypergraph(4, [[0, 1], [2, 3]])
    b = build_hypergraph(4, [[1, 0], [3, 2]])
    c = build_hypergraph(5, [[0, 1], [2, 3]])
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()


def test_isolated_nodes_get_zero_inverse_degree() -> None:
    hg = build_hypergraph(3, [[0, 1]])
    np.testing.assert_allclose(node_inverse_sqrt_degrees(hg), [1.0, 1.0, 0.0])
    np.testing.assert_allclose(edge_inverse_sqrt_degrees(hg), [1.0 / np.sqrt(2.0)])


def test_dense_oracle_on_single_edge() -> None:
    """One hyperedge over all n nodes gives the all-1/n matrix."""
    hg = build_hypergraph(3, [[0, 1, 2]])
    np.testing.assert_allclose(dense_laplacian_oracle(hg), np.full((3, 3), 1.0 / 3.0), rtol=1e-15)


def test_dense_oracle_size_guard() -> None:
    hg = build_hypergraph(DENSE_ORACLE_MAX_NODES + 1, [[0, 1]])
    with pytest.raises(ValidationError):
        dense_laplacian_oracle(hg)


if __name__ == "__main__":
    pytest.main([__file__])
