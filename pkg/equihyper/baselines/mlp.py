import numpy as np

from typing import Dict, Mapping, Optional, Union

from equihyper.equilibrium import Activation, check_kink_distance, get_activation
from equihyper.linalg import as_dense
from equihyper.model import BaseModel, LossBreakdown, StepResult, classification_loss
from equihyper.typing import ActivationName, DenseMatrix
from equihyper.utils import ShapeMismatchError, ValidationError, seed_stream


class FeatureMLP(BaseModel):
    """One-hidden-layer network on the node features alone; the hypergraph is ignored."""

    def __init__(
        self,
        features: DenseMatrix,
        num_classes: int,
        hidden_dim: int = 64,
        activation: Union[ActivationName, Activation] = "relu",
        seed: int = 0,
        params: Optional[Mapping[str, np.ndarray]] = None,
    ) -> None:
        features = as_dense(features)
        super().__init__(features.shape[0], num_classes, seed)
        if hidden_dim < 1:
            raise ValidationError(f"`hidden_dim` must be at least 1, got {hidden_dim}")
        self.features: DenseMatrix = features
        self.hidden_dim: int = hidden_dim
        self.activation: Activation = get_activation(activation)

        if params is None:
            rng = seed_stream(seed, "init")
            input_dim = features.shape[1]
            bound = np.sqrt(6.0 / input_dim)
            head_bound = 1.0 / np.sqrt(hidden_dim)
            params = {
                "w1": rng.uniform(-bound, bound, size=(input_dim, hidden_dim)),
                "b1": np.zeros(hidden_dim),
                "theta_w": rng.uniform(-head_bound, head_bound, size=(hidden_dim, num_classes)),
                "theta_b": np.zeros(num_classes),
            }
        self.weights = {name: np.array(value, dtype=np.float64) for name, value in params.items()}

        expected = {
            "w1": (features.shape[1], hidden_dim),
            "b1": (hidden_dim,),
            "theta_w": (hidden_dim, num_classes),
            "theta_b": (num_classes,),
        }
        for name, shape in expected.items():
            if name not in self.weights:
                raise ValidationError(f"Missing parameter `{name}`")
            if self.weights[name].shape != shape:
                raise ShapeMismatchError("FeatureMLP", self.weights[name].shape, shape, name)

    def parameters(self) -> Dict[str, np.ndarray]:
        return self.weights

    def _hidden(self):
        pre = self.features @ self.weights["w1"] + self.weights["b1"]
        return pre, self.activation(pre)

    def forward(self) -> DenseMatrix:
        _, hidden = self._hidden()
        return hidden @ self.weights["theta_w"] + self.weights["theta_b"]

    def loss_and_gradients(self, labels, mask, batch=None, gamma=0.0) -> StepResult:
        self.validate_input(labels, mask)
        pre, hidden = self._hidden()
        logits = hidden @ self.weights["theta_w"] + self.weights["theta_b"]
        loss, d_logits = classification_loss(logits, labels, mask)

        d_pre = (d_logits @ self.weights["theta_w"].T) * self.activation.derivative(pre)
        gradients = {
            "w1": self.features.T @ d_pre,
            "b1": d_pre.sum(axis=0),
            "theta_w": hidden.T @ d_logits,
            "theta_b": d_logits.sum(axis=0),
        }
        return StepResult(
            losses=LossBreakdown(total=loss, classification=loss),
            gradients=gradients,
            logits=logits,
        )

    def check_finite_difference_safety(self) -> None:
        if self.activation.has_kink:
            check_kink_distance(self._hidden()[0])
