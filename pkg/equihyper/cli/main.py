import argparse
import logging
import sys

from typing import List, Optional

from equihyper.cli.commands import (
    GRADCHECK_TRAIN_DEFAULTS,
    cmd_ablation,
    cmd_embed,
    cmd_eval,
    cmd_gradcheck,
    cmd_oversmooth,
    cmd_sensitivity,
    cmd_synth,
    cmd_train,
)
from equihyper.cli.config_file import add_config_arguments, check_known_keys, read_config_file
from equihyper.cli.options import DataOptions, GradcheckOptions, ModelOptions, OutputOptions
from equihyper.data import SynthConfig
from equihyper.training import ExperimentConfig, TrainConfig
from equihyper.utils import NumericalError, ValidationError, configure_logging

logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the validation exit code."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


# verb -> (handler, config sections, help, command-specific defaults)
COMMANDS = {
    "synth": (cmd_synth, (SynthConfig, OutputOptions), "Generate a synthetic dataset directory.", {}),
    "train": (
        cmd_train,
        (DataOptions, TrainConfig, OutputOptions),
        "Train the equilibrium model; writes model.pt and metrics.csv.",
        {},
    ),
    "eval": (
        cmd_eval,
        (ModelOptions, DataOptions, OutputOptions),
        "Evaluate a saved model on the test nodes.",
        {},
    ),
    "gradcheck": (
        cmd_gradcheck,
        (DataOptions, TrainConfig, GradcheckOptions, OutputOptions),
        "Compare implicit gradients with finite differences.",
        GRADCHECK_TRAIN_DEFAULTS,
    ),
    "oversmooth": (
        cmd_oversmooth,
        (DataOptions, TrainConfig, ExperimentConfig, OutputOptions),
        "HGNN depth sweep against the implicit model.",
        {},
    ),
    "embed": (
        cmd_embed,
        (ModelOptions, DataOptions, OutputOptions),
        "Export node and hyperedge embeddings of a saved model.",
        {},
    ),
    "ablation": (
        cmd_ablation,
        (DataOptions, TrainConfig, ExperimentConfig, OutputOptions),
        "Train model variants with one component removed.",
        {},
    ),
    "sensitivity": (
        cmd_sensitivity,
        (DataOptions, TrainConfig, ExperimentConfig, OutputOptions),
        "Grid over embedding size and learning rate.",
        {},
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(
        prog="equihyper",
        description="Implicit hypergraph neural networks: training, evaluation and experiments.",
    )
    parser.add_argument("--log-level", default="INFO", help="default: INFO")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (handler, sections, help_text, defaults) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--config", default=None, help="flat `key = value` file; flags override it")
        sub.add_argument(
            "--no-progress", dest="progress", action="store_false", help="hide progress bars"
        )
        for cls in sections:
            add_config_arguments(sub, cls, defaults if cls is TrainConfig else None)
        sub.set_defaults(handler=handler, sections=sections)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the `equihyper` command.

    Returns
    -------
    int
        0 on success, 1 for invalid input or configuration, 2 for numerical
        failures (non-convergence, non-contraction, failed gradient check).
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        configure_logging(args.log_level)
        entries = {}
        if args.config is not None:
            entries = read_config_file(args.config)
            check_known_keys(entries, args.sections, args.config)
        return args.handler(args, entries, args.config)
    except ValidationError as error:
        logger.error("%s", error)
        return EXIT_VALIDATION
    except NumericalError as error:
        logger.error("%s", error)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
