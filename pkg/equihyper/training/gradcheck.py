import logging
import numpy as np

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from equihyper.model import BaseModel, MembershipBatch
from equihyper.utils import ValidationError

logger = logging.getLogger(__name__)


# Finite differences over every scalar parameter are only affordable on small models.
MAX_GRADCHECK_PARAMETERS = 5000

# Below this magnitude the error is measured absolutely, scaled by the floor.
ABSOLUTE_FLOOR = 1e-3

DEFAULT_THRESHOLD = 1e-5


def gradient_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = ABSOLUTE_FLOOR) -> np.ndarray:
    """
    |analytic - numeric| / max(|numeric|, floor), entrywise.

    An error of at most t means relative agreement t for large entries and
    absolute agreement t * floor for small ones.
    """
    return np.abs(analytic - numeric) / np.maximum(np.abs(numeric), floor)


@dataclass
class GradcheckReport:
    """
    Outcome of a finite-difference check.

    Attributes
    ----------
    max_error: float
        Worst `gradient_error` over all checked scalars.
    worst_parameter: str
        Parameter holding the worst scalar.
    worst_index: Tuple[int, ...]
        Index of the worst scalar inside that parameter.
    checked: int
        Number of scalars checked.
    epsilon: float
        Central-difference step.
    errors: Dict[str, np.ndarray]
        Entrywise errors per parameter.
    """

    max_error: float
    worst_parameter: str
    worst_index: Tuple[int, ...]
    checked: int
    epsilon: float
    errors: Dict[str, np.ndarray] = field(default_factory=dict)

    def passed(self, threshold: float = DEFAULT_THRESHOLD) -> bool:
        return self.max_error <= threshold

    def summary(self) -> dict:
        return {
            "max_error": self.max_error,
            "worst_parameter": self.worst_parameter,
            "worst_index": list(self.worst_index),
            "checked": self.checked,
            "epsilon": self.epsilon,
            "per_parameter": {name: float(err.max()) if err.size else 0.0 for name, err in self.errors.items()},
        }


def numeric_gradient(
    model: BaseModel,
    name: str,
    labels: np.ndarray,
    mask: np.ndarray,
    batch: Optional[MembershipBatch] = None,
    gamma: float = 0.0,
    epsilon: float = 1e-6,
) -> np.ndarray:
    """Central differences of `model.total_loss` with respect to one parameter."""
    param = model.parameters()[name]
    numeric = np.zeros_like(param)
    for index in np.ndindex(*param.shape):
        original = param[index]
        param[index] = original + epsilon
        plus = model.total_loss(labels, mask, batch, gamma)
        param[index] = original - epsilon
        minus = model.total_loss(labels, mask, batch, gamma)
        param[index] = original
        numeric[index] = (plus - minus) / (2.0 * epsilon)
    return numeric


def gradient_check(
    model: BaseModel,
    labels: np.ndarray,
    mask: np.ndarray,
    batch: Optional[MembershipBatch] = None,
    gamma: float = 0.0,
    epsilon: float = 1e-6,
) -> GradcheckReport:
    """
    Compare the model's gradients with central differences on every parameter.

    Parameters
    ----------
    model: BaseModel
        Model with at most `MAX_GRADCHECK_PARAMETERS` scalars. Its solver
        tolerances should not exceed `epsilon**2`.
    labels: np.ndarray
        Class id of every node.
    mask: np.ndarray
        Nodes in the classification loss.
    batch: Optional[MembershipBatch]
        Fixed membership pairs.
    gamma: float
        Weight of the membership loss.
    epsilon: float
        Central-difference step.

    Returns
    -------
    GradcheckReport
        Worst error and per-parameter errors.
    """
    total = model.num_parameters()
    if total > MAX_GRADCHECK_PARAMETERS:
        raise ValidationError(
            f"Gradient check is limited to {MAX_GRADCHECK_PARAMETERS} parameters, model has {total}"
        )
    if not epsilon > 0:
        raise ValidationError(f"`epsilon` must be positive, got {epsilon}")
    model.check_finite_difference_safety()

    analytic = model.loss_and_gradients(labels, mask, batch, gamma).gradients
    errors: Dict[str, np.ndarray] = {}
    worst = (-1.0, "", ())
    for name in model.parameters():
        numeric = numeric_gradient(model, name, labels, mask, batch, gamma, epsilon)
        err = gradient_error(analytic[name], numeric)
        errors[name] = err
        if err.size:
            index = np.unravel_index(int(np.argmax(err)), err.shape)
            if err[index] > worst[0]:
                worst = (float(err[index]), name, tuple(int(i) for i in index))
        logger.debug("gradcheck %s: max error %.3g", name, float(err.max()) if err.size else 0.0)

    report = GradcheckReport(
        max_error=max(worst[0], 0.0),
        worst_parameter=worst[1],
        worst_index=worst[2],
        checked=total,
        epsilon=epsilon,
        errors=errors,
    )
    logger.info(
        "Gradient check over %d parameters: max error %.3g at %s%s",
        total,
        report.max_error,
        report.worst_parameter,
        list(report.worst_index),
    )
    return report
