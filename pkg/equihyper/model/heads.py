import numpy as np
import scipy.sparse as sp

from dataclasses import dataclass
from typing import Optional

from equihyper.hypergraph import Hypergraph, edge_inverse_degrees, node_inverse_degrees
from equihyper.linalg import as_dense, as_sparse, spmm
from equihyper.model.losses import MembershipOutput
from equihyper.typing import DenseMatrix, Vector
from equihyper.utils import ShapeMismatchError


@dataclass(eq=False)
class ClassifierOutput:
    """Class scores together with the per-node representation they were read from."""

    logits: DenseMatrix
    hidden: DenseMatrix


@dataclass(eq=False)
class HeadGradients:
    """
    Gradients of l1 + gamma * l2 through the two linear heads, the fixed point
    held fixed.
    """

    grad_z: DenseMatrix
    grad_theta_w: DenseMatrix
    grad_theta_b: Vector
    grad_phi_w: Vector
    grad_phi_b: Vector


def affine_bias(x_hat: DenseMatrix, u: DenseMatrix, c: Vector) -> DenseMatrix:
    """
    The affine input map b(X) = X U + 1 c^T.

    Parameters
    ----------
    x_hat: DenseMatrix
        Stacked input features, rows x d_in.
    u: DenseMatrix
        d_in x d weight.
    c: Vector
        Length-d offset.

    Returns
    -------
    DenseMatrix
        rows x d bias.
    """
    if x_hat.shape[1] != u.shape[0]:
        raise ShapeMismatchError("affine_bias", x_hat.shape, u.shape, "feature width must match `U` rows")
    if c.shape != (u.shape[1],):
        raise ShapeMismatchError("affine_bias", u.shape, c.shape, "`c` must have one entry per `U` column")
    return x_hat @ u + c


def build_edge_features(hg: Hypergraph, x_v: DenseMatrix) -> DenseMatrix:
    """
    Hyperedge features as the mean of their member-node features.

    Parameters
    ----------
    hg: Hypergraph
        Input hypergraph.
    x_v: DenseMatrix
        n x d_in node features.

    Returns
    -------
    DenseMatrix
        E x d_in hyperedge features.
    """
    x_v = as_dense(x_v)
    if x_v.shape[0] != hg.node_count:
        raise ShapeMismatchError("build_edge_features", x_v.shape, (hg.node_count, x_v.shape[1]))
    averaging = as_sparse(sp.diags(edge_inverse_degrees(hg)) @ hg.incidence.T)
    return spmm(averaging, x_v)


def random_edge_features(hg: Hypergraph, dim: int, rng: np.random.Generator) -> DenseMatrix:
    """Standard-normal hyperedge features, the ablation alternative to mean pooling."""
    return rng.standard_normal((hg.edge_count, dim))


def pooling_matrix(hg: Hypergraph) -> sp.csr_matrix:
    """
    n x E matrix averaging, for every node, the hyperedges that contain it.

    Isolated nodes get an all-zero row.
    """
    return as_sparse(sp.diags(node_inverse_degrees(hg)) @ hg.incidence)


def classify(
    hg: Hypergraph,
    z: DenseMatrix,
    theta_w: DenseMatrix,
    theta_b: Vector,
    pool: Optional[sp.csr_matrix] = None,
    node_only: bool = False,
) -> ClassifierOutput:
    """
    Linear classifier on pooled node representations.

    For every node v, h_v = concat(z_v, mean of z_e over the hyperedges
    containing v); isolated nodes get a zero context. With `node_only` the
    embeddings have node rows only and h_v = z_v.

    Parameters
    ----------
    hg: Hypergraph
        Hypergraph the embeddings belong to.
    z: DenseMatrix
        Stacked embeddings, node rows first.
    theta_w: DenseMatrix
        Classifier weights, (2d) x C or d x C with `node_only`.
    theta_b: Vector
        Classifier bias, length C.
    pool: Optional[sp.csr_matrix]
        Precomputed `pooling_matrix(hg)`.
    node_only: bool
        Embeddings carry node rows only.

    Returns
    -------
    ClassifierOutput
        n x C logits and the n x (2d) representation.
    """
    n = hg.node_count
    if node_only:
        hidden = z[:n]
    else:
        pool = pooling_matrix(hg) if pool is None else pool
        hidden = np.hstack([z[:n], spmm(pool, z[n:])])
    if hidden.shape[1] != theta_w.shape[0]:
        raise ShapeMismatchError("classify", hidden.shape, theta_w.shape)
    return ClassifierOutput(logits=hidden @ theta_w + theta_b, hidden=hidden)


def head_gradients(
    hg: Hypergraph,
    z: DenseMatrix,
    classifier: ClassifierOutput,
    d_logits: DenseMatrix,
    theta_w: DenseMatrix,
    membership: Optional[MembershipOutput],
    gamma: float,
    pool: Optional[sp.csr_matrix] = None,
    node_only: bool = False,
) -> HeadGradients:
    """
    Chain rule through the classifier and membership heads.

    Parameters
    ----------
    hg: Hypergraph
        Hypergraph the embeddings belong to.
    z: DenseMatrix
        Stacked embeddings.
    classifier: ClassifierOutput
        Output of `classify` on `z`.
    d_logits: DenseMatrix
        Gradient of the classification loss with respect to the logits.
    theta_w: DenseMatrix
        Classifier weights.
    membership: Optional[MembershipOutput]
        Membership loss output, ignored when `gamma` is 0.
    gamma: float
        Weight of the membership loss.
    pool: Optional[sp.csr_matrix]
        Precomputed `pooling_matrix(hg)`.
    node_only: bool
        Embeddings carry node rows only.

    Returns
    -------
    HeadGradients
        Direct gradient with respect to `z` and the head parameter gradients.
    """
    n = hg.node_count
    d = z.shape[1]
    grad_z = np.zeros_like(z)
    d_hidden = d_logits @ theta_w.T
    grad_z[:n] += d_hidden[:, :d]
    if not node_only:
        pool = pooling_matrix(hg) if pool is None else pool
        grad_z[n:] += spmm(pool.T.tocsr(), d_hidden[:, d:])

    grad_phi_w = np.zeros(2 * d)
    grad_phi_b = np.zeros(1)
    if gamma != 0.0 and membership is not None:
        grad_z += gamma * membership.grad_z
        grad_phi_w = gamma * membership.grad_phi_w
        grad_phi_b = gamma * membership.grad_phi_b

    return HeadGradients(
        grad_z=grad_z,
        grad_theta_w=classifier.hidden.T @ d_logits,
        grad_theta_b=d_logits.sum(axis=0),
        grad_phi_w=grad_phi_w,
        grad_phi_b=grad_phi_b,
    )
