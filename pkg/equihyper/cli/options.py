from dataclasses import dataclass

from equihyper.data import DEFAULT_FEATURE_DIM
from equihyper.utils import ValidationError


@dataclass(frozen=True)
class DataOptions:
    """
    How a dataset directory is read.

    Attributes
    ----------
    dataset: str
        Dataset directory.
    feature_dim: int
        Width of the random features of datasets without features.csv.
    split_ratio: float
        Share of training nodes.
    data_seed: int
        Seed of the random features and of the split.
    """

    dataset: str = ""
    feature_dim: int = DEFAULT_FEATURE_DIM
    split_ratio: float = 0.3
    data_seed: int = 0

    def __post_init__(self) -> None:
        if self.feature_dim < 1:
            raise ValidationError(f"`feature_dim` must be at least 1, got {self.feature_dim}")
        if not 0.0 < self.split_ratio < 1.0:
            raise ValidationError(f"`split_ratio` must lie in (0, 1), got {self.split_ratio}")
        if self.data_seed < 0:
            raise ValidationError(f"`data_seed` must be non-negative, got {self.data_seed}")


@dataclass(frozen=True)
class OutputOptions:
    """Where a command writes its results."""

    out: str = ""


@dataclass(frozen=True)
class ModelOptions:
    """Model file to read."""

    model: str = ""


@dataclass(frozen=True)
class GradcheckOptions:
    """
    Finite-difference settings.

    Attributes
    ----------
    epsilon: float
        Central-difference step.
    threshold: float
        Largest accepted gradient error.
    """

    epsilon: float = 1e-6
    threshold: float = 1e-5

    def __post_init__(self) -> None:
        if not self.epsilon > 0 or not self.threshold > 0:
            raise ValidationError("`epsilon` and `threshold` must be positive")
