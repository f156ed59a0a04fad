from typing import Optional, Sequence, Tuple


class EquihyperError(Exception):
    """Root of every error raised by equihyper."""


class ValidationError(EquihyperError, ValueError):
    """Invalid input, configuration or file content."""


class ShapeMismatchError(ValidationError):
    """
    Raised when two operands of a matrix operation have incompatible shapes.

    Parameters
    ----------
    operation: str
        Name of the operation that rejected the operands.
    left_shape: Tuple[int, ...]
        Shape of the left operand.
    right_shape: Tuple[int, ...]
        Shape of the right operand.
    """

    def __init__(
        self,
        operation: str,
        left_shape: Tuple[int, ...],
        right_shape: Tuple[int, ...],
        detail: str = "",
    ) -> None:
        self.operation = operation
        self.left_shape = tuple(left_shape)
        self.right_shape = tuple(right_shape)
        message = f"`{operation}` got incompatible shapes {self.left_shape} and {self.right_shape}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class NumericalError(EquihyperError, ArithmeticError):
    """A numerical procedure failed (non-convergence, non-contraction, NaN)."""


class ConvergenceError(NumericalError):
    """
    Raised when an iterative procedure exhausts its iteration budget.

    Parameters
    ----------
    message: str
        Human readable description.
    iterations: int
        Number of iterations performed.
    residual: float
        Residual at the last iteration.
    last_estimate: Optional[float]
        Last scalar estimate, for procedures that produce one.
    residual_history: Sequence[float]
        Residual trace, oldest first.
    """

    def __init__(
        self,
        message: str,
        iterations: int,
        residual: float,
        last_estimate: Optional[float] = None,
        residual_history: Sequence[float] = (),
    ) -> None:
        self.iterations = iterations
        self.residual = residual
        self.last_estimate = last_estimate
        self.residual_history = list(residual_history)
        super().__init__(message)


class ContractionError(NumericalError):
    """Raised when ‖W‖∞ · ‖A‖op >= 1, so the fixed-point map is not a contraction."""

    def __init__(self, weight_norm: float, operator_norm: float) -> None:
        self.weight_norm = weight_norm
        self.operator_norm = operator_norm
        super().__init__(
            f"Fixed-point map is not contractive: inf_norm(W)={weight_norm:.6g} times "
            f"opnorm(A)={operator_norm:.6g} is {weight_norm * operator_norm:.6g}, expected < 1"
        )


class KinkProximityError(NumericalError):
    """Raised when a ReLU pre-activation sits too close to 0 for finite differences."""

    def __init__(self, min_abs_preactivation: float, threshold: float) -> None:
        self.min_abs_preactivation = min_abs_preactivation
        self.threshold = threshold
        super().__init__(
            f"A pre-activation at the fixed point has magnitude {min_abs_preactivation:.3g} "
            f"< {threshold:.3g}; finite differences are unreliable near the ReLU kink. "
            "Re-seed the instance and retry."
        )


class TrainingError(NumericalError):
    """Raised when a solver fails during a training epoch."""

    def __init__(self, epoch: int, cause: NumericalError) -> None:
        self.epoch = epoch
        self.cause = cause
        super().__init__(f"Training failed at epoch {epoch}: {cause}")
