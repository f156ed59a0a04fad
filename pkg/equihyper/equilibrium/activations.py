import numpy as np

from abc import ABC, abstractmethod
from scipy.special import expit
from typing import Dict, Union

from equihyper.typing import ActivationName, DenseMatrix
from equihyper.utils import ValidationError


class Activation(ABC):
    """An entrywise, 1-Lipschitz, monotone activation and its derivative."""

    name: str = ""

    @abstractmethod
    def __call__(self, x: DenseMatrix) -> DenseMatrix:
        pass

    @abstractmethod
    def derivative(self, x: DenseMatrix) -> DenseMatrix:
        """Derivative evaluated at the pre-activation `x`."""
        pass

    @property
    def has_kink(self) -> bool:
        """Whether the derivative is discontinuous somewhere."""
        return False

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class ReLU(Activation):
    name = "relu"

    def __call__(self, x: DenseMatrix) -> DenseMatrix:
        return np.maximum(x, 0.0)

    def derivative(self, x: DenseMatrix) -> DenseMatrix:
        # sigma'(0) := 0
        return np.where(x > 0.0, 1.0, 0.0)

    @property
    def has_kink(self) -> bool:
        return True


class Sigmoid(Activation):
    name = "sigmoid"

    def __call__(self, x: DenseMatrix) -> DenseMatrix:
        return expit(x)

    def derivative(self, x: DenseMatrix) -> DenseMatrix:
        s = expit(x)
        return s * (1.0 - s)


class Identity(Activation):
    name = "identity"

    def __call__(self, x: DenseMatrix) -> DenseMatrix:
        return np.array(x, dtype=np.float64, copy=True)

    def derivative(self, x: DenseMatrix) -> DenseMatrix:
        return np.ones_like(x, dtype=np.float64)


ACTIVATIONS: Dict[str, Activation] = {
    "relu": ReLU(),
    "sigmoid": Sigmoid(),
    "identity": Identity(),
}


def get_activation(activation: Union[ActivationName, Activation]) -> Activation:
    """
    Resolve an activation by name.

    Parameters
    ----------
    activation: Union[ActivationName, Activation]
        One of ["relu", "sigmoid", "identity"], or an `Activation` instance.

    Returns
    -------
    Activation
        The activation object.
    """
    if isinstance(activation, Activation):
        return activation
    if activation not in ACTIVATIONS:
        raise ValidationError(
            f"`activation` must be one of {list(ACTIVATIONS)}, got {activation}"
        )
    return ACTIVATIONS[activation]
