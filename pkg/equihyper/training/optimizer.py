import numpy as np

from typing import Dict, Mapping

from equihyper.utils import ShapeMismatchError, ValidationError


class GradientDescent:
    """
    Gradient descent with optional heavy-ball momentum, updating arrays in place.

        v <- momentum * v + g
        p <- p - learning_rate * v

    Parameters
    ----------
    params: Mapping[str, np.ndarray]
        Live parameter arrays, updated in place by `step`.
    learning_rate: float
        Step size; 0 leaves the parameters bitwise unchanged.
    momentum: float
        Momentum coefficient in [0, 1).
    """

    def __init__(self, params: Mapping[str, np.ndarray], learning_rate: float, momentum: float = 0.0) -> None:
        if not learning_rate >= 0:
            raise ValidationError(f"`learning_rate` must be non-negative, got {learning_rate}")
        if not 0.0 <= momentum < 1.0:
            raise ValidationError(f"`momentum` must lie in [0, 1), got {momentum}")
        self.params = params
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.velocity: Dict[str, np.ndarray] = {name: np.zeros_like(value) for name, value in params.items()}

    def step(self, gradients: Mapping[str, np.ndarray]) -> None:
        for name, param in self.params.items():
            grad = gradients[name]
            if grad.shape != param.shape:
                raise ShapeMismatchError("GradientDescent.step", param.shape, grad.shape, name)
            if self.learning_rate == 0.0:
                continue
            if self.momentum > 0.0:
                velocity = self.velocity[name]
                velocity *= self.momentum
                velocity += grad
                param -= self.learning_rate * velocity
            else:
                param -= self.learning_rate * grad
