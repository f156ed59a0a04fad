from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Tuple

from equihyper.equilibrium import ACTIVATIONS, SolverConfig
from equihyper.linalg import OpnormConfig
from equihyper.typing import ActivationName, EdgeFeatureMode, OperatorKind
from equihyper.utils import ValidationError


@dataclass(frozen=True)
class TrainConfig:
    """
    Hyperparameters of one training run.

    Attributes
    ----------
    epochs: int
        Number of full-graph gradient steps T.
    learning_rate: float
        Gradient-descent step size.
    momentum: float
        Heavy-ball momentum in [0, 1).
    gamma: float
        Weight of the membership loss.
    kappa: float
        Contraction target in (0, 1).
    hidden_dim: int
        Embedding dimension d.
    activation: ActivationName
        Entrywise activation.
    batch_size: int
        Membership pairs per epoch.
    forward_tol, forward_max_iter: float, int
        Forward solver stopping rule.
    backward_tol, backward_max_iter: float, int
        Adjoint solver stopping rule.
    opnorm_tol, opnorm_max_iter: float, int
        Power-iteration stopping rule for opnorm(A).
    seed: int
        Master seed.
    validation_fraction: float
        Share of training nodes held out for monitoring.
    edge_features: EdgeFeatureMode
        How hyperedge input features are formed.
    operator: OperatorKind
        Block node/hyperedge fixed point or the node-only variant.
    """

    epochs: int = 200
    learning_rate: float = 0.01
    momentum: float = 0.0
    gamma: float = 0.1
    kappa: float = 0.95
    hidden_dim: int = 128
    activation: ActivationName = "relu"
    batch_size: int = 256
    forward_tol: float = 1e-6
    forward_max_iter: int = 300
    backward_tol: float = 1e-8
    backward_max_iter: int = 300
    opnorm_tol: float = 1e-9
    opnorm_max_iter: int = 5000
    seed: int = 0
    validation_fraction: float = 0.1
    edge_features: EdgeFeatureMode = "mean"
    operator: OperatorKind = "block"

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise ValidationError(f"`epochs` must be non-negative, got {self.epochs}")
        # 0 is allowed: parameters stay put and losses are still reported.
        if not self.learning_rate >= 0:
            raise ValidationError(f"`learning_rate` must be non-negative, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValidationError(f"`momentum` must lie in [0, 1), got {self.momentum}")
        if not self.gamma >= 0:
            raise ValidationError(f"`gamma` must be non-negative, got {self.gamma}")
        if not 0.0 < self.kappa < 1.0:
            raise ValidationError(f"`kappa` must lie in (0, 1), got {self.kappa}")
        if self.hidden_dim < 1:
            raise ValidationError(f"`hidden_dim` must be at least 1, got {self.hidden_dim}")
        if self.activation not in ACTIVATIONS:
            raise ValidationError(f"`activation` must be one of {sorted(ACTIVATIONS)}, got {self.activation}")
        if self.batch_size < 1:
            raise ValidationError(f"`batch_size` must be at least 1, got {self.batch_size}")
        if self.seed < 0:
            raise ValidationError(f"`seed` must be non-negative, got {self.seed}")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ValidationError(
                f"`validation_fraction` must lie in [0, 1), got {self.validation_fraction}"
            )
        if self.edge_features not in ("mean", "random"):
            raise ValidationError(f"`edge_features` must be one of ['mean', 'random'], got {self.edge_features}")
        if self.operator not in ("block", "laplacian"):
            raise ValidationError(f"`operator` must be one of ['block', 'laplacian'], got {self.operator}")
        # Constructing these validates the solver settings.
        self.forward_solver()
        self.backward_solver()
        self.opnorm_config()

    def forward_solver(self) -> SolverConfig:
        return SolverConfig(tol=self.forward_tol, max_iter=self.forward_max_iter)

    def backward_solver(self) -> SolverConfig:
        return SolverConfig(tol=self.backward_tol, max_iter=self.backward_max_iter)

    def opnorm_config(self) -> OpnormConfig:
        return OpnormConfig(tol=self.opnorm_tol, max_iter=self.opnorm_max_iter)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ValidationError(f"Unknown TrainConfig keys {unknown}")
        return cls(**values)


@dataclass(frozen=True)
class BaselineConfig:
    """
    Hyperparameters of an explicit baseline run.

    Attributes
    ----------
    model: str
        "hgnn" or "mlp".
    depth: int
        Number of convolution layers (HGNN only).
    hidden_dim: int
        Layer width.
    epochs, learning_rate, momentum, activation, seed, validation_fraction
        As in `TrainConfig`.
    """

    model: str = "hgnn"
    depth: int = 2
    hidden_dim: int = 128
    epochs: int = 200
    learning_rate: float = 0.01
    momentum: float = 0.0
    activation: ActivationName = "relu"
    seed: int = 0
    validation_fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.model not in ("hgnn", "mlp"):
            raise ValidationError(f"`model` must be one of ['hgnn', 'mlp'], got {self.model}")
        if self.depth < 1:
            raise ValidationError(f"`depth` must be at least 1, got {self.depth}")
        if self.hidden_dim < 1:
            raise ValidationError(f"`hidden_dim` must be at least 1, got {self.hidden_dim}")
        if self.epochs < 0:
            raise ValidationError(f"`epochs` must be non-negative, got {self.epochs}")
        if not self.learning_rate >= 0:
            raise ValidationError(f"`learning_rate` must be non-negative, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValidationError(f"`momentum` must lie in [0, 1), got {self.momentum}")
        if self.activation not in ACTIVATIONS:
            raise ValidationError(f"`activation` must be one of {sorted(ACTIVATIONS)}, got {self.activation}")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ValidationError(
                f"`validation_fraction` must lie in [0, 1), got {self.validation_fraction}"
            )

    @classmethod
    def from_train_config(cls, config: TrainConfig, model: str = "hgnn", depth: int = 2) -> "BaselineConfig":
        """Baseline sharing the optimizer, width and seed of an equilibrium run."""
        return cls(
            model=model,
            depth=depth,
            hidden_dim=config.hidden_dim,
            epochs=config.epochs,
            learning_rate=config.learning_rate,
            momentum=config.momentum,
            activation=config.activation,
            seed=config.seed,
            validation_fraction=config.validation_fraction,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Sweep settings shared by the over-smoothing, ablation and sensitivity runs.

    Attributes
    ----------
    num_seeds: int
        Repetitions R; run r uses seed `first_seed + r`.
    first_seed: int
        Seed of the first repetition.
    depths: Tuple[int, ...]
        HGNN depths of the over-smoothing sweep.
    hidden_dims: Tuple[int, ...]
        Embedding sizes of the sensitivity grid.
    learning_rates: Tuple[float, ...]
        Step sizes of the sensitivity grid.
    train_ratio: float
        When positive, every repetition draws a fresh split with this train
        share from its own seed; 0 keeps the dataset's split.
    """

    num_seeds: int = 5
    first_seed: int = 0
    depths: Tuple[int, ...] = (2, 3, 4, 5, 6)
    hidden_dims: Tuple[int, ...] = (16, 32, 64, 128)
    learning_rates: Tuple[float, ...] = (0.1, 0.01, 0.001)
    train_ratio: float = 0.0

    def __post_init__(self) -> None:
        if self.num_seeds < 1:
            raise ValidationError(f"`num_seeds` must be at least 1, got {self.num_seeds}")
        if self.first_seed < 0:
            raise ValidationError(f"`first_seed` must be non-negative, got {self.first_seed}")
        if not self.depths or min(self.depths) < 1:
            raise ValidationError(f"`depths` must be positive integers, got {self.depths}")
        if not self.hidden_dims or min(self.hidden_dims) < 1:
            raise ValidationError(f"`hidden_dims` must be positive integers, got {self.hidden_dims}")
        if not self.learning_rates or min(self.learning_rates) < 0:
            raise ValidationError(f"`learning_rates` must be non-negative, got {self.learning_rates}")
        if not 0.0 <= self.train_ratio < 1.0:
            raise ValidationError(f"`train_ratio` must lie in [0, 1), got {self.train_ratio}")

    @property
    def seeds(self) -> Tuple[int, ...]:
        return tuple(range(self.first_seed, self.first_seed + self.num_seeds))
