import logging
import numpy as np

from dataclasses import replace
from tqdm.auto import tqdm
from typing import Any, Callable, Dict, List

from equihyper.data import Dataset, make_split
from equihyper.training.config import BaselineConfig, ExperimentConfig, TrainConfig
from equihyper.training.trainer import train_baseline, train_equilibrium
from equihyper.utils import EquihyperError

logger = logging.getLogger(__name__)


OVERSMOOTH_COLUMNS = ("model", "depth", "seed", "accuracy")
ABLATION_COLUMNS = ("variant", "seed", "accuracy")
SENSITIVITY_COLUMNS = ("hidden_dim", "learning_rate", "seed", "accuracy")

# Depth label of the implicit model, which stacks infinitely many layers.
IMPLICIT_DEPTH = "inf"

ABLATION_VARIANTS: Dict[str, Dict[str, Any]] = {
    "full": {},
    "no_membership": {"gamma": 0.0},
    "random_edge_features": {"edge_features": "random"},
    "node_only": {"operator": "laplacian"},
}


def dataset_for_seed(dataset: Dataset, experiment: ExperimentConfig, seed: int) -> Dataset:
    """The dataset with a split drawn from `seed` when the experiment asks for resplits."""
    if experiment.train_ratio > 0.0:
        return dataset.with_split(*make_split(dataset.node_count, experiment.train_ratio, seed))
    return dataset


def run_cell(description: str, fit: Callable[[], float]) -> float:
    """Run one sweep cell; a failure is logged and recorded as NaN accuracy."""
    try:
        return fit()
    except EquihyperError as error:
        logger.error("%s failed: %s", description, error)
        return float("nan")


def _equilibrium_accuracy(dataset: Dataset, config: TrainConfig) -> float:
    model, _ = train_equilibrium(dataset, config, show_progress=False)
    return model.evaluate(dataset.labels, dataset.test_mask)


def _baseline_accuracy(dataset: Dataset, config: BaselineConfig) -> float:
    model, _ = train_baseline(dataset, config, show_progress=False)
    return model.evaluate(dataset.labels, dataset.test_mask)


def oversmooth(
    dataset: Dataset,
    train_config: TrainConfig,
    experiment: ExperimentConfig,
    show_progress: bool = True,
) -> List[Dict[str, Any]]:
    """
    Test accuracy of the explicit HGNN at every depth and of the implicit model.

    Every seed yields one row per HGNN depth followed by one implicit-model row
    with depth "inf". Baselines share the optimizer, width and seed of
    `train_config`, so depth is the only factor that varies.

    Parameters
    ----------
    dataset: Dataset
        Data and default split.
    train_config: TrainConfig
        Settings of the implicit model; its seed is replaced per repetition.
    experiment: ExperimentConfig
        Seeds, depths and split policy.
    show_progress: bool
        Show a progress bar over cells.

    Returns
    -------
    List[Dict[str, Any]]
        Rows keyed by `OVERSMOOTH_COLUMNS`.
    """
    rows = []
    cells = len(experiment.seeds) * (len(experiment.depths) + 1)
    with tqdm(total=cells, desc="oversmooth", disable=not show_progress) as progress:
        for seed in experiment.seeds:
            data = dataset_for_seed(dataset, experiment, seed)
            config = replace(train_config, seed=seed)
            for depth in experiment.depths:
                baseline = BaselineConfig.from_train_config(config, model="hgnn", depth=depth)
                acc = run_cell(
                    f"HGNN depth {depth}, seed {seed}", lambda: _baseline_accuracy(data, baseline)
                )
                rows.append({"model": "hgnn", "depth": str(depth), "seed": seed, "accuracy": acc})
                progress.update(1)
            acc = run_cell(f"Implicit model, seed {seed}", lambda: _equilibrium_accuracy(data, config))
            rows.append({"model": "ihnn", "depth": IMPLICIT_DEPTH, "seed": seed, "accuracy": acc})
            progress.update(1)
    return rows


def ablation(
    dataset: Dataset,
    train_config: TrainConfig,
    experiment: ExperimentConfig,
    show_progress: bool = True,
) -> List[Dict[str, Any]]:
    """
    Test accuracy of the implicit model with one component removed at a time.

    Variants are `ABLATION_VARIANTS`: the full model, no membership loss, random
    hyperedge features, and the node-only fixed point.

    Returns
    -------
    List[Dict[str, Any]]
        Rows keyed by `ABLATION_COLUMNS`.
    """
    rows = []
    cells = len(experiment.seeds) * len(ABLATION_VARIANTS)
    with tqdm(total=cells, desc="ablation", disable=not show_progress) as progress:
        for seed in experiment.seeds:
            data = dataset_for_seed(dataset, experiment, seed)
            for variant, overrides in ABLATION_VARIANTS.items():
                config = replace(train_config, seed=seed, **overrides)
                acc = run_cell(f"Variant {variant}, seed {seed}", lambda: _equilibrium_accuracy(data, config))
                rows.append({"variant": variant, "seed": seed, "accuracy": acc})
                progress.update(1)
    return rows


def sensitivity(
    dataset: Dataset,
    train_config: TrainConfig,
    experiment: ExperimentConfig,
    show_progress: bool = True,
) -> List[Dict[str, Any]]:
    """
    Test accuracy over the grid of embedding sizes and learning rates.

    Returns
    -------
    List[Dict[str, Any]]
        Rows keyed by `SENSITIVITY_COLUMNS`.
    """
    rows = []
    cells = len(experiment.seeds) * len(experiment.hidden_dims) * len(experiment.learning_rates)
    with tqdm(total=cells, desc="sensitivity", disable=not show_progress) as progress:
        for hidden_dim in experiment.hidden_dims:
            for learning_rate in experiment.learning_rates:
                for seed in experiment.seeds:
                    data = dataset_for_seed(dataset, experiment, seed)
                    config = replace(
                        train_config, hidden_dim=hidden_dim, learning_rate=learning_rate, seed=seed
                    )
                    acc = run_cell(
                        f"hidden_dim {hidden_dim}, learning_rate {learning_rate}, seed {seed}",
                        lambda: _equilibrium_accuracy(data, config),
                    )
                    rows.append(
                        {"hidden_dim": hidden_dim, "learning_rate": learning_rate, "seed": seed, "accuracy": acc}
                    )
                    progress.update(1)
    return rows


def mean_accuracy(rows: List[Dict[str, Any]], **match: Any) -> float:
    """Mean accuracy over the rows whose fields equal `match`, ignoring failed cells."""
    values = [row["accuracy"] for row in rows if all(row[key] == value for key, value in match.items())]
    values = [value for value in values if not np.isnan(value)]
    return float(np.mean(values)) if values else float("nan")
