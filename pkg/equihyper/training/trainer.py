import logging
import time
import numpy as np

from dataclasses import asdict, dataclass, field
from tqdm.auto import tqdm
from typing import Dict, List, Optional, Tuple

from equihyper.baselines import FeatureMLP, HypergraphConvolutionModel
from equihyper.data import Dataset, split_validation
from equihyper.model import BaseModel, EquilibriumHypergraphModel, ModelParams, accuracy
from equihyper.training.config import BaselineConfig, TrainConfig
from equihyper.training.optimizer import GradientDescent
from equihyper.utils import NumericalError, TrainingError, seed_stream

logger = logging.getLogger(__name__)


# Columns of metrics.csv. Wall time is left out so that reruns are byte-identical.
METRIC_FIELDS = (
    "epoch",
    "total_loss",
    "classification_loss",
    "membership_loss",
    "train_accuracy",
    "validation_accuracy",
    "forward_iterations",
    "backward_iterations",
    "feasibility",
)


@dataclass
class EpochRecord:
    """
    Summary of one training epoch.

    Losses and accuracies are measured at the parameters the epoch started
    from; `feasibility` is inf_norm(W) * opnorm(A) after the projection (NaN for
    explicit models).
    """

    epoch: int
    total_loss: float
    classification_loss: float
    membership_loss: float
    train_accuracy: float
    validation_accuracy: float
    forward_iterations: int
    backward_iterations: int
    feasibility: float
    wall_time: float

    def metrics(self) -> Dict[str, float]:
        values = asdict(self)
        return {name: values[name] for name in METRIC_FIELDS}


@dataclass(eq=False)
class TrainReport:
    """Per-epoch records of a run and a reference to the trained parameters."""

    records: List[EpochRecord] = field(default_factory=list)
    params: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def epochs(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(record, name) for record in self.records], dtype=np.float64)


def build_equilibrium_model(
    dataset: Dataset,
    config: TrainConfig,
    params: Optional[ModelParams] = None,
    use_cache: bool = True,
) -> EquilibriumHypergraphModel:
    """Equilibrium model for `dataset` configured by `config`."""
    return EquilibriumHypergraphModel(
        dataset.hypergraph,
        dataset.features,
        dataset.num_classes,
        hidden_dim=config.hidden_dim,
        kappa=config.kappa,
        activation=config.activation,
        edge_features=config.edge_features,
        operator=config.operator,
        membership_batch_size=config.batch_size,
        forward_solver=config.forward_solver(),
        backward_solver=config.backward_solver(),
        opnorm_config=config.opnorm_config(),
        seed=config.seed,
        params=params,
        use_cache=use_cache,
    )


def build_baseline_model(dataset: Dataset, config: BaselineConfig) -> BaseModel:
    """HGNN or MLP baseline for `dataset` configured by `config`."""
    if config.model == "mlp":
        return FeatureMLP(
            dataset.features,
            dataset.num_classes,
            hidden_dim=config.hidden_dim,
            activation=config.activation,
            seed=config.seed,
        )
    return HypergraphConvolutionModel(
        dataset.hypergraph,
        dataset.features,
        dataset.num_classes,
        depth=config.depth,
        hidden_dim=config.hidden_dim,
        activation=config.activation,
        seed=config.seed,
    )


def train_epoch(
    model: BaseModel,
    optimizer: GradientDescent,
    labels: np.ndarray,
    fit_mask: np.ndarray,
    validation_mask: np.ndarray,
    gamma: float,
    rng: np.random.Generator,
    epoch: int,
) -> EpochRecord:
    """
    One full-graph step: solve, evaluate losses, differentiate, step, project.

    Parameters
    ----------
    model: BaseModel
        Model to update in place.
    optimizer: GradientDescent
        Optimizer bound to `model.parameters()`.
    labels: np.ndarray
        Class id of every node.
    fit_mask: np.ndarray
        Nodes the classification loss is averaged over.
    validation_mask: np.ndarray
        Held-out nodes, reported only.
    gamma: float
        Weight of the membership loss.
    rng: np.random.Generator
        Membership sampler stream.
    epoch: int
        1-based epoch index, used in error reports.

    Returns
    -------
    EpochRecord
        Losses and accuracies at the start of the epoch.
    """
    start = time.perf_counter()
    batch = model.sample_batch(rng)
    try:
        step = model.loss_and_gradients(labels, fit_mask, batch, gamma)
    except NumericalError as error:
        raise TrainingError(epoch, error) from error
    if not np.isfinite(step.losses.total):
        raise TrainingError(epoch, NumericalError(f"loss is {step.losses.total}"))

    optimizer.step(step.gradients)
    model.project()
    feasibility = model.feasibility() if isinstance(model, EquilibriumHypergraphModel) else float("nan")

    return EpochRecord(
        epoch=epoch,
        total_loss=step.losses.total,
        classification_loss=step.losses.classification,
        membership_loss=step.losses.membership,
        train_accuracy=accuracy(step.logits, labels, fit_mask),
        validation_accuracy=accuracy(step.logits, labels, validation_mask),
        forward_iterations=step.forward_iterations,
        backward_iterations=step.backward_iterations,
        feasibility=feasibility,
        wall_time=time.perf_counter() - start,
    )


def train(
    model: BaseModel,
    dataset: Dataset,
    epochs: int,
    learning_rate: float,
    momentum: float = 0.0,
    gamma: float = 0.0,
    seed: int = 0,
    validation_fraction: float = 0.1,
    show_progress: bool = True,
) -> TrainReport:
    """
    Train `model` on the training nodes of `dataset` by projected gradient descent.

    Parameters
    ----------
    model: BaseModel
        Model to train in place.
    dataset: Dataset
        Data and split.
    epochs: int
        Number of epochs; 0 leaves the model at its initialization.
    learning_rate: float
        Step size.
    momentum: float
        Heavy-ball momentum.
    gamma: float
        Weight of the membership loss.
    seed: int
        Master seed of the validation hold-out and the membership sampler.
    validation_fraction: float
        Share of training nodes held out for monitoring.
    show_progress: bool
        Show a progress bar.

    Returns
    -------
    TrainReport
        One record per executed epoch.
    """
    model.validate_input(dataset.labels, dataset.train_mask)
    fit_mask, validation_mask = split_validation(dataset.train_mask, validation_fraction, seed)
    optimizer = GradientDescent(model.parameters(), learning_rate, momentum)
    sampler_rng = seed_stream(seed, "sampler")
    report = TrainReport(params=model.parameters())

    for epoch in tqdm(range(1, epochs + 1), desc=type(model).__name__, disable=not show_progress):
        record = train_epoch(
            model, optimizer, dataset.labels, fit_mask, validation_mask, gamma, sampler_rng, epoch
        )
        report.records.append(record)
        logger.info(
            "epoch %d: loss %.6f (l1 %.6f, l2 %.6f), train acc %.4f, val acc %.4f, "
            "fwd %d, bwd %d, %.3fs",
            record.epoch,
            record.total_loss,
            record.classification_loss,
            record.membership_loss,
            record.train_accuracy,
            record.validation_accuracy,
            record.forward_iterations,
            record.backward_iterations,
            record.wall_time,
        )
    return report


def train_equilibrium(
    dataset: Dataset,
    config: TrainConfig,
    show_progress: bool = True,
) -> Tuple[EquilibriumHypergraphModel, TrainReport]:
    """Build and train an equilibrium model from a `TrainConfig`."""
    model = build_equilibrium_model(dataset, config)
    report = train(
        model,
        dataset,
        epochs=config.epochs,
        learning_rate=config.learning_rate,
        momentum=config.momentum,
        gamma=config.gamma,
        seed=config.seed,
        validation_fraction=config.validation_fraction,
        show_progress=show_progress,
    )
    return model, report


def train_baseline(
    dataset: Dataset,
    config: BaselineConfig,
    show_progress: bool = True,
) -> Tuple[BaseModel, TrainReport]:
    """Build and train an explicit baseline from a `BaselineConfig`."""
    model = build_baseline_model(dataset, config)
    report = train(
        model,
        dataset,
        epochs=config.epochs,
        learning_rate=config.learning_rate,
        momentum=config.momentum,
        seed=config.seed,
        validation_fraction=config.validation_fraction,
        show_progress=show_progress,
    )
    return model, report
