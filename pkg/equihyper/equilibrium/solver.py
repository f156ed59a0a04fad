import logging
import numpy as np

from dataclasses import dataclass, field
from typing import List, Optional, Union

from equihyper.equilibrium.activations import Activation, get_activation
from equihyper.hypergraph import NormalizedOperators
from equihyper.linalg import inf_norm, spmm
from equihyper.typing import ActivationName, DenseMatrix
from equihyper.utils import (
    ContractionError,
    ConvergenceError,
    KinkProximityError,
    ShapeMismatchError,
    ValidationError,
)

logger = logging.getLogger(__name__)


# Pre-activations closer than this to the ReLU kink make finite differences unreliable.
KINK_THRESHOLD = 1e-3


@dataclass(frozen=True)
class SolverConfig:
    """
    Stopping rule of a fixed-point iteration.

    Attributes
    ----------
    tol: float
        Stop once the max-abs entrywise change between successive iterates is at
        most `tol`.
    max_iter: int
        Iteration budget.
    """

    tol: float = 1e-6
    max_iter: int = 300

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ValidationError(f"`tol` must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValidationError(f"`max_iter` must be at least 1, got {self.max_iter}")


FORWARD_SOLVER = SolverConfig(tol=1e-6, max_iter=300)
BACKWARD_SOLVER = SolverConfig(tol=1e-8, max_iter=300)


@dataclass(eq=False)
class EmbeddingState:
    """
    Result of a forward fixed-point solve.

    Attributes
    ----------
    z: DenseMatrix
        Stacked embeddings; rows [0, node_count) are node embeddings and the
        remaining rows hyperedge embeddings.
    node_count: int
        Number of node rows in `z`.
    iterations_used: int
        Number of map evaluations performed.
    final_residual: float
        Max-abs change at the last iteration.
    residual_history: List[float]
        Max-abs change per iteration.
    contraction_history: List[float]
        Change per iteration measured in the sum of column 2-norms, the norm in
        which inf_norm(W) * opnorm(A) bounds the contraction factor.
    """

    z: DenseMatrix
    node_count: int
    iterations_used: int
    final_residual: float
    residual_history: List[float] = field(default_factory=list)
    contraction_history: List[float] = field(default_factory=list)

    @property
    def z_v(self) -> DenseMatrix:
        return self.z[: self.node_count]

    @property
    def z_e(self) -> DenseMatrix:
        return self.z[self.node_count :]


@dataclass(eq=False)
class AdjointState:
    """
    Result of the backward (adjoint) fixed-point solve.

    Attributes
    ----------
    g: DenseMatrix
        dL/dZ at the fixed point, same shape as the embeddings.
    d_mask: DenseMatrix
        sigma' evaluated at the fixed-point pre-activation.
    preactivation: DenseMatrix
        A Z W + B at the fixed point.
    iterations_used: int
        Number of adjoint map evaluations.
    final_residual: float
        Max-abs change at the last iteration.
    residual_history: List[float]
        Max-abs change per iteration.
    """

    g: DenseMatrix
    d_mask: DenseMatrix
    preactivation: DenseMatrix
    iterations_used: int
    final_residual: float
    residual_history: List[float] = field(default_factory=list)


@dataclass(eq=False)
class ParamGradients:
    """Gradients of the loss with respect to W, U and c."""

    grad_w: DenseMatrix
    grad_u: DenseMatrix
    grad_c: np.ndarray


def column_norm_sum(z: DenseMatrix) -> float:
    """Sum over columns of the column Euclidean norms."""
    return float(np.linalg.norm(z, axis=0).sum())


def check_contraction(ops: NormalizedOperators, w: DenseMatrix) -> None:
    """Raise `ContractionError` unless inf_norm(w) * opnorm(A) < 1."""
    weight_norm = inf_norm(w)
    if not weight_norm * ops.opnorm_a < 1.0:
        raise ContractionError(weight_norm, ops.opnorm_a)


def _check_shapes(ops: NormalizedOperators, w: DenseMatrix, b: DenseMatrix) -> None:
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ShapeMismatchError("forward_fixed_point", w.shape, w.shape, "`W` must be square")
    if b.ndim != 2 or b.shape != (ops.state_rows, w.shape[0]):
        raise ShapeMismatchError(
            "forward_fixed_point",
            b.shape,
            (ops.state_rows, w.shape[0]),
            "`B` must have one row per embedding and one column per W row",
        )
    if not np.all(np.isfinite(w)) or not np.all(np.isfinite(b)):
        raise ValidationError("`W` and `B` must be finite")


def forward_fixed_point(
    ops: NormalizedOperators,
    w: DenseMatrix,
    b: DenseMatrix,
    activation: Union[ActivationName, Activation] = "relu",
    config: Optional[SolverConfig] = None,
    z0: Optional[DenseMatrix] = None,
) -> EmbeddingState:
    """
    Solve Z = sigma(A Z W + B) by fixed-point iteration.

    Parameters
    ----------
    ops: NormalizedOperators
        Operators of the hypergraph; `ops.a_block` plays the role of A.
    w: DenseMatrix
        d x d equilibrium weight, with inf_norm(w) * ops.opnorm_a < 1.
    b: DenseMatrix
        Bias term b(X), one row per embedding row.
    activation: Union[ActivationName, Activation]
        Entrywise non-expansive activation.
    config: Optional[SolverConfig]
        Stopping rule, defaults to `FORWARD_SOLVER`.
    z0: Optional[DenseMatrix]
        Start iterate, zero when omitted.

    Returns
    -------
    EmbeddingState
        The fixed point and its convergence trace.
    """
    config = config or FORWARD_SOLVER
    sigma = get_activation(activation)
    w = np.asarray(w, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_shapes(ops, w, b)
    check_contraction(ops, w)

    z = np.zeros_like(b) if z0 is None else np.array(z0, dtype=np.float64, copy=True)
    if z.shape != b.shape:
        raise ShapeMismatchError("forward_fixed_point", z.shape, b.shape, "`z0` must match `B`")

    residuals: List[float] = []
    contractions: List[float] = []
    for iteration in range(1, config.max_iter + 1):
        z_next = sigma(ops.propagate(z) @ w + b)
        step = z_next - z
        residual = float(np.max(np.abs(step))) if step.size else 0.0
        residuals.append(residual)
        contractions.append(column_norm_sum(step))
        z = z_next
        if residual <= config.tol:
            return EmbeddingState(
                z=z,
                node_count=ops.node_count,
                iterations_used=iteration,
                final_residual=residual,
                residual_history=residuals,
                contraction_history=contractions,
            )

    logger.warning(
        "Forward solve did not converge in %d iterations (residual %.3g)",
        config.max_iter,
        residuals[-1],
    )
    raise ConvergenceError(
        f"Forward fixed point did not reach tol {config.tol} within {config.max_iter} iterations",
        iterations=config.max_iter,
        residual=residuals[-1],
        residual_history=residuals,
    )


def coupled_fixed_point(
    ops: NormalizedOperators,
    w: DenseMatrix,
    b: DenseMatrix,
    activation: Union[ActivationName, Activation] = "relu",
    config: Optional[SolverConfig] = None,
    alternating: bool = False,
) -> EmbeddingState:
    """
    Solve the fixed point through the two coupled node / hyperedge updates.

        Z_v <- sigma(L_ve Z_e W + B_v)
        Z_e <- sigma(L_ve^T Z_v W + B_e)

    With `alternating=False` both halves are computed from the previous iterate,
    which reproduces the block iteration. With `alternating=True` the fresh node
    embeddings feed the hyperedge update of the same sweep.

    Parameters
    ----------
    ops: NormalizedOperators
        Block operators (`ops.kind == "block"`).
    w: DenseMatrix
        d x d equilibrium weight.
    b: DenseMatrix
        Stacked bias, (n + E) x d.
    activation: Union[ActivationName, Activation]
        Entrywise non-expansive activation.
    config: Optional[SolverConfig]
        Stopping rule, defaults to `FORWARD_SOLVER`.
    alternating: bool
        Use the fresh node rows in the hyperedge update.

    Returns
    -------
    EmbeddingState
        The fixed point and its convergence trace.
    """
    if ops.kind != "block":
        raise ValidationError("`coupled_fixed_point` needs block operators")
    config = config or FORWARD_SOLVER
    sigma = get_activation(activation)
    w = np.asarray(w, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_shapes(ops, w, b)
    check_contraction(ops, w)

    n = ops.node_count
    b_v, b_e = b[:n], b[n:]
    z_v = np.zeros_like(b_v)
    z_e = np.zeros_like(b_e)

    residuals: List[float] = []
    contractions: List[float] = []
    for iteration in range(1, config.max_iter + 1):
        next_v = sigma(spmm(ops.l_ve, z_e) @ w + b_v)
        source_v = next_v if alternating else z_v
        next_e = sigma(spmm(ops.l_ev, source_v) @ w + b_e)
        step = np.vstack([next_v - z_v, next_e - z_e])
        residual = float(np.max(np.abs(step)))
        residuals.append(residual)
        contractions.append(column_norm_sum(step))
        z_v, z_e = next_v, next_e
        if residual <= config.tol:
            return EmbeddingState(
                z=np.vstack([z_v, z_e]),
                node_count=n,
                iterations_used=iteration,
                final_residual=residual,
                residual_history=residuals,
                contraction_history=contractions,
            )

    logger.warning(
        "Coupled solve did not converge in %d iterations (residual %.3g)",
        config.max_iter,
        residuals[-1],
    )
    raise ConvergenceError(
        f"Coupled fixed point did not reach tol {config.tol} within {config.max_iter} iterations",
        iterations=config.max_iter,
        residual=residuals[-1],
        residual_history=residuals,
    )


def preactivation(
    ops: NormalizedOperators, w: DenseMatrix, b: DenseMatrix, z: DenseMatrix
) -> DenseMatrix:
    """A Z W + B."""
    return ops.propagate(z) @ w + b


def check_kink_distance(pre: DenseMatrix, threshold: float = KINK_THRESHOLD) -> None:
    """Raise `KinkProximityError` if any pre-activation is within `threshold` of 0."""
    smallest = float(np.min(np.abs(pre))) if pre.size else np.inf
    if smallest < threshold:
        raise KinkProximityError(smallest, threshold)


def backward_adjoint(
    ops: NormalizedOperators,
    w: DenseMatrix,
    b: DenseMatrix,
    z: DenseMatrix,
    grad_direct: DenseMatrix,
    activation: Union[ActivationName, Activation] = "relu",
    config: Optional[SolverConfig] = None,
) -> AdjointState:
    """
    Solve the adjoint equation G = A^T (D * G) W^T + grad_direct.

    D = sigma'(A Z W + B) at the fixed point Z, and grad_direct is the gradient of
    the loss heads with respect to Z with the fixed point held fixed. The map
    contracts with the same factor as the forward map, so the iteration starts at
    G = grad_direct and runs until the max-abs change is at most `config.tol`.

    Parameters
    ----------
    ops: NormalizedOperators
        Operators used in the forward solve.
    w: DenseMatrix
        d x d equilibrium weight.
    b: DenseMatrix
        Bias term used in the forward solve.
    z: DenseMatrix
        Converged forward fixed point.
    grad_direct: DenseMatrix
        dL/dZ through the heads only.
    activation: Union[ActivationName, Activation]
        Activation used in the forward solve.
    config: Optional[SolverConfig]
        Stopping rule, defaults to `BACKWARD_SOLVER`.

    Returns
    -------
    AdjointState
        The total gradient dL/dZ and the activation mask.
    """
    config = config or BACKWARD_SOLVER
    sigma = get_activation(activation)
    w = np.asarray(w, dtype=np.float64)
    _check_shapes(ops, w, np.asarray(b, dtype=np.float64))
    check_contraction(ops, w)
    if grad_direct.shape != z.shape or z.shape != b.shape:
        raise ShapeMismatchError("backward_adjoint", grad_direct.shape, z.shape)

    pre = preactivation(ops, w, b, z)
    d_mask = sigma.derivative(pre)
    w_t = w.T

    g = np.array(grad_direct, dtype=np.float64, copy=True)
    residuals: List[float] = []
    for iteration in range(1, config.max_iter + 1):
        # A is symmetric, so A^T products reuse `propagate`.
        g_next = ops.propagate(d_mask * g) @ w_t + grad_direct
        residual = float(np.max(np.abs(g_next - g))) if g.size else 0.0
        residuals.append(residual)
        g = g_next
        if residual <= config.tol:
            return AdjointState(
                g=g,
                d_mask=d_mask,
                preactivation=pre,
                iterations_used=iteration,
                final_residual=residual,
                residual_history=residuals,
            )

    logger.warning(
        "Adjoint solve did not converge in %d iterations (residual %.3g)",
        config.max_iter,
        residuals[-1],
    )
    raise ConvergenceError(
        f"Adjoint fixed point did not reach tol {config.tol} within {config.max_iter} iterations",
        iterations=config.max_iter,
        residual=residuals[-1],
        residual_history=residuals,
    )


def param_gradients(
    ops: NormalizedOperators,
    z: DenseMatrix,
    g: DenseMatrix,
    d_mask: DenseMatrix,
    x_hat: DenseMatrix,
) -> ParamGradients:
    """
    Gradients of the equilibrium parameters from the adjoint solution.

    With P = A Z W + X U + 1 c^T and dL/dP = D * G:

        dL/dW = (A Z)^T (D * G)
        dL/dU = X^T (D * G)
        dL/dc = column sums of (D * G)

    Parameters
    ----------
    ops: NormalizedOperators
        Operators used in the forward solve.
    z: DenseMatrix
        Fixed point.
    g: DenseMatrix
        Adjoint solution from `backward_adjoint`.
    d_mask: DenseMatrix
        sigma' at the fixed point.
    x_hat: DenseMatrix
        Stacked input features, one row per embedding row.

    Returns
    -------
    ParamGradients
        Gradients for W, U and c.
    """
    if not (z.shape == g.shape == d_mask.shape):
        raise ShapeMismatchError("param_gradients", z.shape, g.shape, "`D` must match too")
    if x_hat.shape[0] != z.shape[0]:
        raise ShapeMismatchError("param_gradients", x_hat.shape, z.shape, "row counts differ")
    dp = d_mask * g
    return ParamGradients(
        grad_w=ops.propagate(z).T @ dp,
        grad_u=x_hat.T @ dp,
        grad_c=dp.sum(axis=0),
    )
