import numpy as np

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Mapping, Optional

from equihyper.model.losses import accuracy, classification_loss
from equihyper.model.sampler import MembershipBatch
from equihyper.typing import DenseMatrix
from equihyper.utils import ShapeMismatchError, ValidationError


@dataclass
class LossBreakdown:
    """Total loss and its two components; `membership` is 0 when no batch is scored."""

    total: float
    classification: float
    membership: float = 0.0


@dataclass(eq=False)
class StepResult:
    """
    Everything one loss evaluation produces.

    Attributes
    ----------
    losses: LossBreakdown
        Loss values at the current parameters.
    gradients: Dict[str, np.ndarray]
        Gradient of `losses.total` for every entry of `parameters()`.
    logits: DenseMatrix
        n x C class scores at the current parameters.
    forward_iterations: int
        Fixed-point iterations of the forward solve (0 for explicit models).
    backward_iterations: int
        Fixed-point iterations of the adjoint solve (0 for explicit models).
    """

    losses: LossBreakdown
    gradients: Dict[str, np.ndarray]
    logits: DenseMatrix
    forward_iterations: int = 0
    backward_iterations: int = 0


class BaseModel(ABC):
    """
    Node classifier trained by gradient descent on hand-derived gradients.

    Subclasses hold their parameters as a name -> array mapping returned by
    `parameters()`. The arrays are live: optimizers update them in place.
    """

    def __init__(self, node_count: int, num_classes: int, seed: int = 0) -> None:
        if num_classes < 1:
            raise ValidationError(f"`num_classes` must be positive, got {num_classes}")
        if seed < 0:
            raise ValidationError(f"`seed` must be non-negative, got {seed}")
        self.node_count: int = node_count
        self.num_classes: int = num_classes
        self.seed: int = seed

    @abstractmethod
    def parameters(self) -> Dict[str, np.ndarray]:
        """
        Abstract method returning live references to every trainable array. This
        method must be implemented by all subclasses.
        """
        pass

    @abstractmethod
    def forward(self) -> DenseMatrix:
        """
        Abstract method computing the n x C logits at the current parameters.
        This method must be implemented by all subclasses.
        """
        pass

    @abstractmethod
    def loss_and_gradients(
        self,
        labels: np.ndarray,
        mask: np.ndarray,
        batch: Optional[MembershipBatch] = None,
        gamma: float = 0.0,
    ) -> StepResult:
        """
        Abstract method evaluating the training loss and its exact gradient. This
        method must be implemented by all subclasses.
        """
        pass

    def total_loss(
        self,
        labels: np.ndarray,
        mask: np.ndarray,
        batch: Optional[MembershipBatch] = None,
        gamma: float = 0.0,
    ) -> float:
        """
        Training loss without gradients, used by finite-difference checks.

        Parameters
        ----------
        labels: np.ndarray
            Class id of every node.
        mask: np.ndarray
            Nodes that contribute to the loss.
        batch: Optional[MembershipBatch]
            Membership pairs, ignored by models without a membership head.
        gamma: float
            Weight of the membership loss.

        Returns
        -------
        float
            The scalar loss.
        """
        loss, _ = classification_loss(self.forward(), labels, mask)
        return loss

    def sample_batch(self, rng: np.random.Generator) -> Optional[MembershipBatch]:
        """Membership pairs for one epoch; None for models without a membership head."""
        return None

    def project(self) -> None:
        """Restore parameter constraints after a gradient step. No-op by default."""
        pass

    def check_finite_difference_safety(self) -> None:
        """Raise if central differences around the current parameters are unreliable."""
        pass

    def load_parameters(self, arrays: Mapping[str, np.ndarray]) -> None:
        """
        Overwrite the parameters in place.

        Parameters
        ----------
        arrays: Mapping[str, np.ndarray]
            Values for every name in `parameters()`, with matching shapes.
        """
        current = self.parameters()
        missing = sorted(set(current) - set(arrays))
        if missing:
            raise ValidationError(f"Missing parameters {missing}")
        for name, value in current.items():
            incoming = np.asarray(arrays[name], dtype=np.float64)
            if incoming.shape != value.shape:
                raise ShapeMismatchError("load_parameters", value.shape, incoming.shape, name)
            value[...] = incoming

    def num_parameters(self) -> int:
        return int(sum(value.size for value in self.parameters().values()))

    def evaluate(self, labels: np.ndarray, mask: np.ndarray) -> float:
        """Accuracy on the masked nodes at the current parameters."""
        return accuracy(self.forward(), labels, mask)

    def validate_input(self, labels: np.ndarray, mask: np.ndarray) -> None:
        """
        Validate a label vector and a node mask against the model.

        Parameters
        ----------
        labels: np.ndarray
            Class id of every node.
        mask: np.ndarray
            Boolean node mask.
        """
        if labels.shape != (self.node_count,):
            raise ShapeMismatchError("validate_input", labels.shape, (self.node_count,), "labels")
        if mask.shape != (self.node_count,):
            raise ShapeMismatchError("validate_input", mask.shape, (self.node_count,), "mask")
        if labels.size and (labels.min() < 0 or labels.max() >= self.num_classes):
            raise ValidationError(f"`labels` must lie in [0, {self.num_classes - 1}]")

    def __call__(self) -> np.ndarray:
        """Predicted class of every node."""
        return np.argmax(self.forward(), axis=1)
