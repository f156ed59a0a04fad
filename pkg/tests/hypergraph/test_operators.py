import numpy as np
import pytest

from equihyper.hypergraph import (
    build_block_operator,
    build_hypergraph,
    build_lve,
    build_operators,
    dense_laplacian_oracle,
)
from equihyper.linalg import as_sparse, check_sparse
from equihyper.utils import ValidationError


def test_lve_entries(toy_hypergraph) -> None:
    hg = toy_hypergraph
    l_ve = build_lve(hg).toarray()
    h = hg.incidence.toarray()
    expected = h / np.sqrt(np.outer(hg.node_degrees, hg.edge_degrees))
    np.testing.assert_allclose(l_ve, expected, rtol=1e-15)


def test_factorization_identity(random_hypergraph) -> None:
    """L_ve L_ve^T reproduces the dense normalized Laplacian on 200 random hypergraphs."""
    rng = np.random.default_rng(0)
    for seed in range(200):
        n = int(rng.integers(2, 30))
        e = int(rng.integers(1, 40))
        hg = random_hypergraph(seed, n, e, max_size=6)
        l_ve = build_lve(hg)
        product = (l_ve @ l_ve.T).toarray()
        assert np.max(np.abs(product - dense_laplacian_oracle(hg))) <= 1e-12


def test_opnorm_bounded_without_isolated_nodes() -> None:
    """Every node covered: sigma_max(A) is exactly 1 and the estimate never exceeds it."""
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 60))
        edges = [
            rng.choice(n, size=int(rng.integers(1, min(8, n) + 1)), replace=False).tolist()
            for _ in range(int(rng.integers(1, 80)))
        ]
        covered = {v for edge in edges for v in edge}
        edges.extend([v] for v in range(n) if v not in covered)
        hg = build_hypergraph(n, edges)
        assert hg.node_degrees.min() >= 1
        ops = build_operators(hg, kappa=0.95, use_cache=False)
        assert ops.opnorm_a <= 1.0 + 1e-8
        assert np.linalg.norm(ops.a_block.toarray(), 2) == pytest.approx(1.0, abs=1e-10)


def test_block_layout(toy_hypergraph) -> None:
    hg = toy_hypergraph
    ops = build_operators(hg, kappa=0.9, use_cache=False)
    a = ops.a_block.toarray()
    n = hg.node_count
    check_sparse(ops.a_block)
    np.testing.assert_array_equal(a, a.T)
    np.testing.assert_array_equal(a[:n, n:], ops.l_ve.toarray())
    np.testing.assert_array_equal(a[:n, :n], 0.0)
    np.testing.assert_array_equal(a[n:, n:], 0.0)
    assert ops.state_rows == n + hg.edge_count


def test_opnorm_and_radius(random_hypergraph) -> None:
    hg = random_hypergraph(3, 20, 15)
    ops = build_operators(hg, kappa=0.8, use_cache=False)
    assert ops.opnorm_a == pytest.approx(np.linalg.norm(ops.a_block.toarray(), 2), rel=1e-6)
    assert ops.kappa_radius == pytest.approx(0.8 / ops.opnorm_a, rel=1e-15)


def test_laplacian_operator(toy_hypergraph) -> None:
    ops = build_operators(toy_hypergraph, kind="laplacian", use_cache=False)
    assert ops.kind == "laplacian"
    assert ops.state_rows == toy_hypergraph.node_count
    np.testing.assert_allclose(ops.a_block.toarray(), dense_laplacian_oracle(toy_hypergraph), atol=1e-15)
    z = np.random.default_rng(0).standard_normal((4, 2))
    np.testing.assert_allclose(ops.laplacian_apply(z), ops.propagate(z), atol=1e-14)


def test_isolated_node_rows_are_zero() -> None:
    hg = build_hypergraph(3, [[0, 1]])
    ops = build_operators(hg, use_cache=False)
    np.testing.assert_array_equal(ops.a_block.toarray()[2], 0.0)


@pytest.mark.parametrize("kappa", [0.0, 1.0, 1.5, -0.1])
def test_invalid_kappa(toy_hypergraph, kappa: float) -> None:
    with pytest.raises(ValidationError):
        build_operators(toy_hypergraph, kappa=kappa, use_cache=False)


def test_invalid_kind(toy_hypergraph) -> None:
    with pytest.raises(ValidationError):
        build_operators(toy_hypergraph, kind="star")


def test_no_hyperedges() -> None:
    with pytest.raises(ValidationError):
        build_block_operator(as_sparse(np.zeros((3, 0))))


def test_operator_cache(toy_hypergraph) -> None:
    first = build_operators(toy_hypergraph, kappa=0.9)
    second = build_operators(build_hypergraph(4, [[1, 0], [3, 2, 1], [3, 0]]), kappa=0.9)
    other_kappa = build_operators(toy_hypergraph, kappa=0.5)
    uncached = build_operators(toy_hypergraph, kappa=0.9, use_cache=False)
    assert first is second
    assert other_kappa is not first
    assert uncached is not first


if __name__ == "__main__":
    pytest.main([__file__])
