import numpy as np
import pytest
import torch

from equihyper.equilibrium import (
    SolverConfig,
    backward_adjoint,
    check_kink_distance,
    column_norm_sum,
    coupled_fixed_point,
    forward_fixed_point,
    param_gradients,
)
from equihyper.hypergraph import build_hypergraph, build_operators
from equihyper.linalg import inf_norm, project_rows_l1
from equihyper.utils import (
    ContractionError,
    ConvergenceError,
    KinkProximityError,
    ShapeMismatchError,
    ValidationError,
)


TIGHT = SolverConfig(tol=1e-14, max_iter=20000)


def make_instance(random_hypergraph, seed: int, n: int = 10, e: int = 8, d: int = 3, kappa: float = 0.5):
    """Operators, a feasible W and a random bias on a random hypergraph."""
    hg = random_hypergraph(seed, n, e)
    ops = build_operators(hg, kappa=kappa, use_cache=False)
    rng = np.random.default_rng(seed + 1000)
    w = project_rows_l1(rng.standard_normal((d, d)), ops.kappa_radius)
    b = rng.standard_normal((ops.state_rows, d))
    return hg, ops, w, b


def test_zero_weight_gives_activation_of_bias(random_hypergraph) -> None:
    _, ops, _, b = make_instance(random_hypergraph, 0)
    state = forward_fixed_point(ops, np.zeros((3, 3)), b, "relu")
    np.testing.assert_array_equal(state.z, np.maximum(b, 0.0))
    assert state.iterations_used == 2
    assert state.final_residual == 0.0


def test_identity_activation_matches_linear_solve(random_hypergraph) -> None:
    """With sigma = identity, vec(Z) solves (I - W^T kron A) vec(Z) = vec(B)."""
    _, ops, w, b = make_instance(random_hypergraph, 1)
    state = forward_fixed_point(ops, w, b, "identity", TIGHT)
    a = ops.a_block.toarray()
    system = np.eye(a.shape[0] * w.shape[0]) - np.kron(w.T, a)
    expected = np.linalg.solve(system, b.flatten(order="F")).reshape(b.shape, order="F")
    np.testing.assert_allclose(state.z, expected, atol=1e-12)


ENVELOPES = [
    (60, 80, 8),
    pytest.param(200, 400, 32, marks=pytest.mark.slow),
]


@pytest.mark.parametrize("max_n, max_e, max_d", ENVELOPES)
def test_geometric_convergence(random_hypergraph, max_n: int, max_e: int, max_d: int) -> None:
    """
    On 100 random projected models the change per iteration shrinks at least by
    inf_norm(W) * opnorm(A) <= kappa, measured in the sum of column norms.
    """
    rng = np.random.default_rng(42)
    config = SolverConfig(tol=1e-10, max_iter=5000)
    for seed in range(100):
        n = int(rng.integers(5, max_n + 1))
        e = int(rng.integers(3, max_e + 1))
        d = int(rng.integers(1, max_d + 1))
        _, ops, w, b = make_instance(random_hypergraph, seed, n, e, d, kappa=0.95)
        factor = inf_norm(w) * np.linalg.norm(ops.a_block.toarray(), 2)
        assert factor <= 0.95 * (1 + 1e-4)

        state = forward_fixed_point(ops, w, b, "relu", config)
        trace = state.contraction_history
        assert state.final_residual <= config.tol
        # rounding of the differences grows with the size of Z
        slack = 1e-13 + 1e-15 * column_norm_sum(state.z)
        for previous, current in zip(trace, trace[1:]):
            assert current <= factor * previous + slack


def test_start_point_does_not_matter(random_hypergraph) -> None:
    config = SolverConfig(tol=1e-10, max_iter=5000)
    rng = np.random.default_rng(5)
    for seed in range(20):
        _, ops, w, b = make_instance(random_hypergraph, seed, 15, 12, 4)
        from_zero = forward_fixed_point(ops, w, b, "relu", config)
        from_random = forward_fixed_point(ops, w, b, "relu", config, z0=10 * rng.standard_normal(b.shape))
        assert np.max(np.abs(from_zero.z - from_random.z)) <= 10 * config.tol


def test_block_and_coupled_iterations_agree(random_hypergraph) -> None:
    for seed in range(50):
        _, ops, w, b = make_instance(random_hypergraph, seed, 9, 7, 3)
        block = forward_fixed_point(ops, w, b, "relu", TIGHT)
        jacobi = coupled_fixed_point(ops, w, b, "relu", TIGHT, alternating=False)
        gauss_seidel = coupled_fixed_point(ops, w, b, "relu", TIGHT, alternating=True)
        assert np.max(np.abs(block.z - jacobi.z)) <= 1e-12
        assert np.max(np.abs(block.z - gauss_seidel.z)) <= 1e-12
        assert jacobi.iterations_used == block.iterations_used


def test_coupled_needs_block_operator(random_hypergraph) -> None:
    hg = random_hypergraph(0)
    ops = build_operators(hg, kind="laplacian", use_cache=False)
    w = np.zeros((2, 2))
    with pytest.raises(ValidationError):
        coupled_fixed_point(ops, w, np.zeros((hg.node_count, 2)))


def test_non_contractive_weight(random_hypergraph) -> None:
    _, ops, _, b = make_instance(random_hypergraph, 0)
    w = np.eye(3) * (1.5 / ops.opnorm_a)
    with pytest.raises(ContractionError) as error:
        forward_fixed_point(ops, w, b)
    assert error.value.weight_norm * error.value.operator_norm >= 1.0


def test_iteration_budget(random_hypergraph) -> None:
    _, ops, w, b = make_instance(random_hypergraph, 0)
    with pytest.raises(ConvergenceError) as error:
        forward_fixed_point(ops, w, b, "relu", SolverConfig(tol=1e-12, max_iter=1))
    assert error.value.iterations == 1
    assert len(error.value.residual_history) == 1


def test_shape_checks(random_hypergraph) -> None:
    _, ops, w, b = make_instance(random_hypergraph, 0)
    with pytest.raises(ShapeMismatchError):
        forward_fixed_point(ops, w, b[:-1])
    with pytest.raises(ShapeMismatchError):
        forward_fixed_point(ops, np.zeros((3, 2)), b)
    with pytest.raises(ShapeMismatchError):
        forward_fixed_point(ops, w, b, z0=np.zeros((2, 3)))


def _torch_unrolled(a, w, u, c, x, activation, iterations=200):
    z = torch.zeros(a.shape[0], w.shape[0], dtype=torch.float64)
    for _ in range(iterations):
        z = activation(a @ z @ w + x @ u + c)
    return z


@pytest.mark.parametrize("name", ["relu", "sigmoid"])
def test_implicit_gradients_match_autograd(random_hypergraph, name: str) -> None:
    """Adjoint gradients equal autograd through a long unrolled iteration."""
    _, ops, w, _ = make_instance(random_hypergraph, 3, 8, 6, 3)
    rng = np.random.default_rng(11)
    x = rng.standard_normal((ops.state_rows, 4))
    u = rng.standard_normal((4, 3))
    c = rng.standard_normal(3)
    weights = rng.standard_normal((ops.state_rows, 3))
    b = x @ u + c

    state = forward_fixed_point(ops, w, b, name, TIGHT)
    adjoint = backward_adjoint(ops, w, b, state.z, weights, name, TIGHT)
    grads = param_gradients(ops, state.z, adjoint.g, adjoint.d_mask, x)

    activation = torch.relu if name == "relu" else torch.sigmoid
    a_t = torch.from_numpy(ops.a_block.toarray())
    w_t = torch.tensor(w, requires_grad=True)
    u_t = torch.tensor(u, requires_grad=True)
    c_t = torch.tensor(c, requires_grad=True)
    z_t = _torch_unrolled(a_t, w_t, u_t, c_t, torch.from_numpy(x), activation)
    (z_t * torch.from_numpy(weights)).sum().backward()

    np.testing.assert_allclose(state.z, z_t.detach().numpy(), atol=1e-12)
    np.testing.assert_allclose(grads.grad_w, w_t.grad.numpy(), rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(grads.grad_u, u_t.grad.numpy(), rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(grads.grad_c, c_t.grad.numpy(), rtol=1e-8, atol=1e-10)


def test_adjoint_with_zero_weight_is_direct_gradient(random_hypergraph) -> None:
    _, ops, _, b = make_instance(random_hypergraph, 2)
    w = np.zeros((3, 3))
    z = forward_fixed_point(ops, w, b).z
    direct = np.random.default_rng(0).standard_normal(b.shape)
    adjoint = backward_adjoint(ops, w, b, z, direct)
    np.testing.assert_array_equal(adjoint.g, direct)


def test_scalar_adjoint_matches_finite_differences() -> None:
    """One node in one hyperedge: A = [[0, 1], [1, 0]], loss 0.5 * (z_v - 3)^2."""
    ops = build_operators(build_hypergraph(1, [[0]]), kappa=0.9, use_cache=False)
    w = np.array([[0.6]])
    b = np.array([[0.7], [0.2]])

    def loss(w_, b_):
        z = forward_fixed_point(ops, w_, b_, "sigmoid", TIGHT).z
        return 0.5 * (z[0, 0] - 3.0) ** 2

    z = forward_fixed_point(ops, w, b, "sigmoid", TIGHT).z
    direct = np.array([[z[0, 0] - 3.0], [0.0]])
    adjoint = backward_adjoint(ops, w, b, z, direct, "sigmoid", TIGHT)
    grads = param_gradients(ops, z, adjoint.g, adjoint.d_mask, np.eye(2))

    h = 1e-5
    numeric_w = (loss(w + h, b) - loss(w - h, b)) / (2 * h)
    assert grads.grad_w[0, 0] == pytest.approx(numeric_w, rel=1e-6)
    for row in range(2):
        shift = np.zeros_like(b)
        shift[row] = h
        numeric_b = (loss(w, b + shift) - loss(w, b - shift)) / (2 * h)
        # with X = I, dL/dU row i is dL/db_i
        assert grads.grad_u[row, 0] == pytest.approx(numeric_b, rel=1e-6)


def test_zero_direct_gradient_gives_zero_adjoint(random_hypergraph) -> None:
    _, ops, w, b = make_instance(random_hypergraph, 6)
    z = forward_fixed_point(ops, w, b).z
    adjoint = backward_adjoint(ops, w, b, z, np.zeros_like(z))
    np.testing.assert_array_equal(adjoint.g, 0.0)
    grads = param_gradients(ops, z, adjoint.g, adjoint.d_mask, np.ones((b.shape[0], 2)))
    np.testing.assert_array_equal(grads.grad_w, 0.0)
    np.testing.assert_array_equal(grads.grad_u, 0.0)
    np.testing.assert_array_equal(grads.grad_c, 0.0)


def test_kink_distance() -> None:
    check_kink_distance(np.array([[0.5, -0.2]]))
    with pytest.raises(KinkProximityError) as error:
        check_kink_distance(np.array([[0.5, 1e-5]]))
    assert error.value.min_abs_preactivation == pytest.approx(1e-5)


def test_column_norm_sum() -> None:
    assert column_norm_sum(np.array([[3.0, 0.0], [4.0, 1.0]])) == pytest.approx(6.0)


def test_param_gradient_shape_checks(random_hypergraph) -> None:
    _, ops, w, b = make_instance(random_hypergraph, 0)
    z = np.zeros_like(b)
    with pytest.raises(ShapeMismatchError):
        param_gradients(ops, z, z[:-1], z, np.zeros((b.shape[0], 2)))
    with pytest.raises(ShapeMismatchError):
        param_gradients(ops, z, z, z, np.zeros((2, 2)))


if __name__ == "__main__":
    pytest.main([__file__])
