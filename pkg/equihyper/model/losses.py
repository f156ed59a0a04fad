import numpy as np

from dataclasses import dataclass
from scipy.special import expit, log_softmax, softmax

from equihyper.model.sampler import MembershipBatch
from equihyper.typing import DenseMatrix, Vector
from equihyper.utils import ShapeMismatchError, ValidationError


@dataclass(eq=False)
class MembershipOutput:
    """Membership loss with its gradients (before scaling by gamma)."""

    loss: float
    grad_z: DenseMatrix
    grad_phi_w: Vector
    grad_phi_b: Vector


def classification_loss(logits: DenseMatrix, labels: np.ndarray, mask: np.ndarray):
    """
    Mean softmax cross-entropy over the masked nodes.

    Parameters
    ----------
    logits: DenseMatrix
        n x C class scores.
    labels: np.ndarray
        Length-n class ids in [0, C).
    mask: np.ndarray
        Boolean length-n mask of the nodes that contribute.

    Returns
    -------
    Tuple[float, DenseMatrix]
        The loss and its gradient with respect to `logits` (zero outside the mask).
    """
    mask = np.asarray(mask, dtype=bool)
    if logits.shape[0] != labels.shape[0] or mask.shape[0] != labels.shape[0]:
        raise ShapeMismatchError("classification_loss", logits.shape, labels.shape)
    count = int(mask.sum())
    if count == 0:
        raise ValidationError("`mask` selects no node; the classification loss is undefined")

    selected = logits[mask]
    targets = labels[mask]
    rows = np.arange(count)
    log_p = log_softmax(selected, axis=1)
    loss = float(-log_p[rows, targets].mean())

    grad_selected = softmax(selected, axis=1)
    grad_selected[rows, targets] -= 1.0
    grad = np.zeros_like(logits)
    grad[mask] = grad_selected / count
    return loss, grad


def membership_loss(
    z: DenseMatrix,
    node_count: int,
    batch: MembershipBatch,
    phi_w: Vector,
    phi_b: Vector,
) -> MembershipOutput:
    """
    Mean binary cross-entropy of the logistic membership head.

    The head scores concat(z_e, z_v) . phi_w + phi_b for every sampled pair.

    Parameters
    ----------
    z: DenseMatrix
        Stacked embeddings, node rows first.
    node_count: int
        Number of node rows in `z`.
    batch: MembershipBatch
        Sampled pairs.
    phi_w: Vector
        Length-2d head weights.
    phi_b: Vector
        Length-1 head bias.

    Returns
    -------
    MembershipOutput
        The loss, its gradient scattered into the rows of `z`, and head gradients.
    """
    if len(batch) == 0:
        raise ValidationError("Membership batch is empty")
    d = z.shape[1]
    if phi_w.shape != (2 * d,):
        raise ShapeMismatchError("membership_loss", phi_w.shape, (2 * d,))

    edge_rows = node_count + batch.edge_ids
    z_e = z[edge_rows]
    z_v = z[batch.node_ids]
    labels = batch.labels.astype(np.float64)

    scores = z_e @ phi_w[:d] + z_v @ phi_w[d:] + phi_b[0]
    loss = float(np.mean(np.logaddexp(0.0, scores) - labels * scores))

    d_scores = (expit(scores) - labels) / len(batch)
    grad_z = np.zeros_like(z)
    np.add.at(grad_z, edge_rows, np.outer(d_scores, phi_w[:d]))
    np.add.at(grad_z, batch.node_ids, np.outer(d_scores, phi_w[d:]))
    return MembershipOutput(
        loss=loss,
        grad_z=grad_z,
        grad_phi_w=np.concatenate([z_e.T @ d_scores, z_v.T @ d_scores]),
        grad_phi_b=np.array([d_scores.sum()]),
    )


def accuracy(logits: DenseMatrix, labels: np.ndarray, mask: np.ndarray) -> float:
    """Fraction of masked nodes whose arg-max class is correct; NaN for an empty mask."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return float("nan")
    return float(np.mean(np.argmax(logits[mask], axis=1) == labels[mask]))
