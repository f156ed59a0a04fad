import logging
import pickle
import torch

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Union

from equihyper.cli.options import DataOptions
from equihyper.data import Dataset
from equihyper.model import EquilibriumHypergraphModel, ModelParams
from equihyper.training import TrainConfig
from equihyper.utils import ShapeMismatchError, ValidationError, arrays_to_state_dict, state_dict_to_arrays

logger = logging.getLogger(__name__)


MODEL_FORMAT = "equihyper-model"
MODEL_VERSION = 1


@dataclass(eq=False)
class ModelFile:
    """Contents of a saved model."""

    params: ModelParams
    config: TrainConfig
    opnorm_a: float
    kappa_radius: float
    num_classes: int
    input_dim: int
    data_options: Optional[DataOptions] = None


def save_model(
    path: Union[str, Path],
    model: EquilibriumHypergraphModel,
    config: TrainConfig,
    data_options: Optional[DataOptions] = None,
) -> Path:
    """
    Save parameters, config and operator norm with `torch.save`.

    Parameters
    ----------
    path: str or Path
        Target file.
    model: EquilibriumHypergraphModel
        Trained model.
    config: TrainConfig
        Config the model was built and trained with.
    data_options: Optional[DataOptions]
        How the training dataset was read, reused as defaults when evaluating.

    Returns
    -------
    Path
        The file written.
    """
    path = Path(path)
    arrays = model.params.arrays()
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "params": arrays_to_state_dict(arrays),
        "shapes": {name: list(value.shape) for name, value in arrays.items()},
        "config": config.to_dict(),
        "opnorm_a": float(model.ops.opnorm_a),
        "kappa_radius": float(model.ops.kappa_radius),
        "num_classes": int(model.num_classes),
        "input_dim": int(model.params.input_dim),
        "data_options": asdict(data_options) if data_options is not None else None,
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        torch.save(payload, path)
    except OSError as error:
        raise ValidationError(f"Cannot write model file `{path}`: {error}") from error
    logger.info("Wrote model to %s", path)
    return path


def load_model_file(path: Union[str, Path]) -> ModelFile:
    """
    Read a file written by `save_model`.

    Parameters
    ----------
    path: str or Path
        Model file.

    Returns
    -------
    ModelFile
        Parameters and metadata.
    """
    path = Path(path)
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except (OSError, RuntimeError, EOFError, pickle.UnpicklingError) as error:
        raise ValidationError(f"Cannot read model file `{path}`: {error}") from error
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ValidationError(f"`{path}` is not an {MODEL_FORMAT} file")
    if payload.get("version") != MODEL_VERSION:
        raise ValidationError(
            f"`{path}` has model file version {payload.get('version')}, expected {MODEL_VERSION}"
        )

    arrays = state_dict_to_arrays(payload["params"])
    for name, shape in payload["shapes"].items():
        if name not in arrays or list(arrays[name].shape) != list(shape):
            raise ShapeMismatchError(
                "load_model_file", tuple(arrays[name].shape) if name in arrays else (), tuple(shape), name
            )
    data_options = payload.get("data_options")
    return ModelFile(
        params=ModelParams.from_arrays(arrays),
        config=TrainConfig.from_dict(payload["config"]),
        opnorm_a=float(payload["opnorm_a"]),
        kappa_radius=float(payload["kappa_radius"]),
        num_classes=int(payload["num_classes"]),
        input_dim=int(payload["input_dim"]),
        data_options=DataOptions(**data_options) if data_options else None,
    )


def restore_model(model_file: ModelFile, dataset: Dataset) -> EquilibriumHypergraphModel:
    """
    Rebuild the model from a saved file on `dataset`.

    The operators are rebuilt from the dataset's hypergraph; the parameters are
    used as saved.
    """
    if dataset.feature_dim != model_file.input_dim:
        raise ValidationError(
            f"Model expects {model_file.input_dim} input features, dataset `{dataset.name}` has "
            f"{dataset.feature_dim}"
        )
    if dataset.num_classes > model_file.num_classes:
        raise ValidationError(
            f"Model predicts {model_file.num_classes} classes, dataset `{dataset.name}` has "
            f"{dataset.num_classes}"
        )
    # Build with the saved class count, which may exceed the classes present.
    return EquilibriumHypergraphModel(
        dataset.hypergraph,
        dataset.features,
        model_file.num_classes,
        hidden_dim=model_file.params.hidden_dim,
        kappa=model_file.config.kappa,
        activation=model_file.config.activation,
        edge_features=model_file.config.edge_features,
        operator=model_file.config.operator,
        membership_batch_size=model_file.config.batch_size,
        forward_solver=model_file.config.forward_solver(),
        backward_solver=model_file.config.backward_solver(),
        opnorm_config=model_file.config.opnorm_config(),
        seed=model_file.config.seed,
        params=model_file.params,
    )
