import numpy as np
import pytest

from equihyper.hypergraph import build_hypergraph
from equihyper.model import (
    MembershipBatch,
    affine_bias,
    build_edge_features,
    classification_loss,
    classify,
    head_gradients,
    membership_loss,
    pooling_matrix,
)
from equihyper.utils import ShapeMismatchError


def test_edge_features_are_member_means(toy_hypergraph) -> None:
    x = np.arange(8, dtype=np.float64).reshape(4, 2)
    x_e = build_edge_features(toy_hypergraph, x)
    np.testing.assert_allclose(x_e[0], x[[0, 1]].mean(axis=0))
    np.testing.assert_allclose(x_e[1], x[[1, 2, 3]].mean(axis=0))
    np.testing.assert_allclose(x_e[2], x[[0, 3]].mean(axis=0))


def test_pooling_matrix_rows() -> None:
    hg = build_hypergraph(3, [[0, 1], [1]])
    pool = pooling_matrix(hg).toarray()
    np.testing.assert_allclose(pool, [[1.0, 0.0], [0.5, 0.5], [0.0, 0.0]])


def test_classify_gives_isolated_nodes_zero_context() -> None:
    hg = build_hypergraph(3, [[0, 1]])
    z = np.array([[1.0], [2.0], [3.0], [5.0]])
    theta_w = np.eye(2)
    output = classify(hg, z, theta_w, np.zeros(2))
    np.testing.assert_allclose(output.hidden, [[1.0, 5.0], [2.0, 5.0], [3.0, 0.0]])


def test_classify_node_only() -> None:
    hg = build_hypergraph(2, [[0, 1]])
    z = np.array([[1.0, 2.0], [3.0, 4.0]])
    output = classify(hg, z, np.eye(2), np.array([1.0, 0.0]), node_only=True)
    np.testing.assert_allclose(output.logits, [[2.0, 2.0], [4.0, 4.0]])


def test_affine_bias_checks_shapes() -> None:
    with pytest.raises(ShapeMismatchError):
        affine_bias(np.zeros((3, 2)), np.zeros((3, 4)), np.zeros(4))
    with pytest.raises(ShapeMismatchError):
        affine_bias(np.zeros((3, 2)), np.zeros((2, 4)), np.zeros(3))


@pytest.mark.parametrize("gamma", [0.0, 0.7])
def test_head_gradients_match_finite_differences(toy_hypergraph, gamma: float) -> None:
    """Direct gradient of l1 + gamma * l2 with respect to the embeddings."""
    rng = np.random.default_rng(4)
    n, d, classes = 4, 2, 3
    z = rng.standard_normal((n + toy_hypergraph.edge_count, d))
    theta_w = rng.standard_normal((2 * d, classes))
    theta_b = rng.standard_normal(classes)
    phi_w = rng.standard_normal(2 * d)
    phi_b = rng.standard_normal(1)
    labels = np.array([0, 2, 1, 2])
    mask = np.array([True, True, False, True])
    batch = MembershipBatch(np.array([0, 1, 2]), np.array([1, 0, 3]), np.array([1, 0, 1]))

    def loss(z_):
        l1, _ = classification_loss(classify(toy_hypergraph, z_, theta_w, theta_b).logits, labels, mask)
        return l1 + gamma * membership_loss(z_, n, batch, phi_w, phi_b).loss

    output = classify(toy_hypergraph, z, theta_w, theta_b)
    _, d_logits = classification_loss(output.logits, labels, mask)
    membership = membership_loss(z, n, batch, phi_w, phi_b)
    grads = head_gradients(toy_hypergraph, z, output, d_logits, theta_w, membership, gamma)

    numeric = np.zeros_like(z)
    eps = 1e-6
    for index in np.ndindex(*z.shape):
        shifted = z.copy()
        shifted[index] += eps
        up = loss(shifted)
        shifted[index] -= 2 * eps
        numeric[index] = (up - loss(shifted)) / (2 * eps)
    np.testing.assert_allclose(grads.grad_z, numeric, atol=1e-8)

    np.testing.assert_allclose(grads.grad_theta_w, output.hidden.T @ d_logits)
    if gamma == 0.0:
        np.testing.assert_array_equal(grads.grad_phi_w, 0.0)
        np.testing.assert_array_equal(grads.grad_phi_b, 0.0)
    else:
        np.testing.assert_allclose(grads.grad_phi_w, gamma * membership.grad_phi_w)


if __name__ == "__main__":
    pytest.main([__file__])
