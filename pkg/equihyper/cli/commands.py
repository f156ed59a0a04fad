import argparse
import json
import logging

from dataclasses import asdict
from pathlib import Path
from typing import Mapping, Optional

from equihyper.cli.config_file import ConfigEntry, format_config, resolve_config
from equihyper.cli.model_file import load_model_file, restore_model, save_model
from equihyper.cli.options import DataOptions, GradcheckOptions, ModelOptions, OutputOptions
from equihyper.cli.outputs import ensure_parent, write_csv, write_json, write_matrix
from equihyper.data import Dataset, SynthConfig, generate_synthetic, load_dataset, write_dataset
from equihyper.training import (
    ABLATION_COLUMNS,
    METRIC_FIELDS,
    OVERSMOOTH_COLUMNS,
    SENSITIVITY_COLUMNS,
    ExperimentConfig,
    TrainConfig,
    ablation,
    build_equilibrium_model,
    evaluation_report,
    gradient_check,
    mean_accuracy,
    oversmooth,
    sensitivity,
    train,
)
from equihyper.utils import ValidationError, seed_stream

logger = logging.getLogger(__name__)


# Small enough for finite differences over every parameter, with solvers tight
# enough that solver error stays far below the difference quotient error.
GRADCHECK_TRAIN_DEFAULTS = {
    "hidden_dim": 3,
    "kappa": 0.5,
    "batch_size": 16,
    "forward_tol": 1e-12,
    "forward_max_iter": 20000,
    "backward_tol": 1e-12,
    "backward_max_iter": 20000,
}
GRADCHECK_SYNTH = SynthConfig(
    n=12, communities=2, edges=8, mean_edge_size=3.0, informative_fraction=1.0, feature_dim=3, train_ratio=0.5
)

MODEL_FILE = "model.pt"
METRICS_FILE = "metrics.csv"
CONFIG_FILE = "config.txt"
NODE_EMBEDDINGS_FILE = "node_embeddings.csv"
EDGE_EMBEDDINGS_FILE = "hyperedge_embeddings.csv"
REPORT_FILE = "report.json"

Entries = Mapping[str, ConfigEntry]


def _require_out(options: OutputOptions) -> Path:
    if not options.out:
        raise ValidationError("`out` is required")
    return Path(options.out)


def _load_data(options: DataOptions) -> Dataset:
    if not options.dataset:
        raise ValidationError("`dataset` is required")
    return load_dataset(
        options.dataset,
        feature_dim=options.feature_dim,
        seed=options.data_seed,
        train_ratio=options.split_ratio,
    )


def _print(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_synth(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """Generate a synthetic dataset directory and print its statistics."""
    config = resolve_config(SynthConfig, entries, args, path)
    out = _require_out(resolve_config(OutputOptions, entries, args, path))
    dataset = generate_synthetic(config)
    write_dataset(dataset, out)
    _print(dataset.stats())
    return 0


def cmd_train(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """Train the equilibrium model; write model.pt, metrics.csv and the resolved config."""
    data_options = resolve_config(DataOptions, entries, args, path)
    config = resolve_config(TrainConfig, entries, args, path)
    out = _require_out(resolve_config(OutputOptions, entries, args, path))
    dataset = _load_data(data_options)

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
        show_progress=args.progress,
    )

    save_model(out / MODEL_FILE, model, config, data_options)
    write_csv(out / METRICS_FILE, METRIC_FIELDS, [record.metrics() for record in report.records])
    ensure_parent(out / CONFIG_FILE).write_text(
        "\n".join(format_config(data_options) + format_config(config)) + "\n", encoding="utf-8"
    )
    summary = {
        "epochs": report.epochs,
        "test_accuracy": model.evaluate(dataset.labels, dataset.test_mask),
        "train_accuracy": model.evaluate(dataset.labels, dataset.train_mask),
    }
    _print(summary)
    return 0


def _restore(args: argparse.Namespace, entries: Entries, path: Optional[str]):
    model_options = resolve_config(ModelOptions, entries, args, path)
    if not model_options.model:
        raise ValidationError("`model` is required")
    if not Path(model_options.model).exists():
        raise ValidationError(f"Model file `{model_options.model}` does not exist")
    model_file = load_model_file(model_options.model)
    saved = asdict(model_file.data_options) if model_file.data_options is not None else {}
    data_options = resolve_config(DataOptions, entries, args, path, defaults=saved)
    dataset = _load_data(data_options)
    return restore_model(model_file, dataset), dataset


def cmd_eval(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """
    Accuracy report of a saved model on the test nodes.

    The report is printed and written to `out`, by default report.json next to
    the model file.
    """
    output = resolve_config(OutputOptions, entries, args, path)
    model, dataset = _restore(args, entries, path)
    report = evaluation_report(model.forward(), dataset.labels, dataset.test_mask, model.num_classes)
    report["dataset"] = dataset.name
    model_path = resolve_config(ModelOptions, entries, args, path).model
    write_json(output.out or Path(model_path).parent / REPORT_FILE, report)
    _print(report)
    return 0


def cmd_embed(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """Write node and hyperedge embeddings of a saved model as CSV."""
    out = _require_out(resolve_config(OutputOptions, entries, args, path))
    model, _ = _restore(args, entries, path)
    state = model.embed()
    write_matrix(out / NODE_EMBEDDINGS_FILE, state.z_v)
    if not model.node_only:
        write_matrix(out / EDGE_EMBEDDINGS_FILE, state.z_e)
    return 0


def cmd_gradcheck(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """
    Check implicit gradients against central differences.

    Runs on a tiny synthetic instance unless `dataset` is given. Exits with 2
    when the worst error exceeds `threshold`.
    """
    data_options = resolve_config(DataOptions, entries, args, path)
    config = resolve_config(TrainConfig, entries, args, path, defaults=GRADCHECK_TRAIN_DEFAULTS)
    options = resolve_config(GradcheckOptions, entries, args, path)
    output = resolve_config(OutputOptions, entries, args, path)

    if data_options.dataset:
        dataset = _load_data(data_options)
    else:
        dataset = generate_synthetic(
            SynthConfig(**{**asdict(GRADCHECK_SYNTH), "seed": data_options.data_seed})
        )
    model = build_equilibrium_model(dataset, config, use_cache=False)
    batch = model.sample_batch(seed_stream(config.seed, "sampler"))
    report = gradient_check(
        model, dataset.labels, dataset.train_mask, batch, config.gamma, epsilon=options.epsilon
    )

    summary = report.summary()
    summary["threshold"] = options.threshold
    summary["passed"] = report.passed(options.threshold)
    if output.out:
        write_json(output.out, summary)
    _print(summary)
    if not summary["passed"]:
        logger.error("Gradient error %.3g exceeds %.3g", report.max_error, options.threshold)
        return 2
    return 0


def _experiment_inputs(args: argparse.Namespace, entries: Entries, path: Optional[str]):
    data_options = resolve_config(DataOptions, entries, args, path)
    config = resolve_config(TrainConfig, entries, args, path)
    experiment = resolve_config(ExperimentConfig, entries, args, path)
    out = _require_out(resolve_config(OutputOptions, entries, args, path))
    return _load_data(data_options), config, experiment, out


def cmd_oversmooth(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """HGNN depth sweep against the implicit model; CSV of (model, depth, seed, accuracy)."""
    dataset, config, experiment, out = _experiment_inputs(args, entries, path)
    rows = oversmooth(dataset, config, experiment, show_progress=args.progress)
    write_csv(out, OVERSMOOTH_COLUMNS, rows)
    for depth in experiment.depths:
        logger.info("HGNN depth %d: mean accuracy %.4f", depth, mean_accuracy(rows, model="hgnn", depth=str(depth)))
    logger.info("Implicit model: mean accuracy %.4f", mean_accuracy(rows, model="ihnn"))
    return 0


def cmd_ablation(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """Component ablation; CSV of (variant, seed, accuracy)."""
    dataset, config, experiment, out = _experiment_inputs(args, entries, path)
    rows = ablation(dataset, config, experiment, show_progress=args.progress)
    write_csv(out, ABLATION_COLUMNS, rows)
    return 0


def cmd_sensitivity(args: argparse.Namespace, entries: Entries, path: Optional[str]) -> int:
    """Embedding size / learning rate grid; CSV of (hidden_dim, learning_rate, seed, accuracy)."""
    dataset, config, experiment, out = _experiment_inputs(args, entries, path)
    rows = sensitivity(dataset, config, experiment, show_progress=args.progress)
    write_csv(out, SENSITIVITY_COLUMNS, rows)
    return 0
