from .config import BaselineConfig, ExperimentConfig, TrainConfig
from .experiments import (
    ABLATION_COLUMNS,
    ABLATION_VARIANTS,
    IMPLICIT_DEPTH,
    OVERSMOOTH_COLUMNS,
    SENSITIVITY_COLUMNS,
    ablation,
    dataset_for_seed,
    mean_accuracy,
    oversmooth,
    run_cell,
    sensitivity,
)
from .gradcheck import (
    ABSOLUTE_FLOOR,
    DEFAULT_THRESHOLD,
    MAX_GRADCHECK_PARAMETERS,
    GradcheckReport,
    gradient_check,
    gradient_error,
    numeric_gradient,
)
from .metrics import confusion_matrix, evaluation_report, roc_auc
from .optimizer import GradientDescent
from .trainer import (
    METRIC_FIELDS,
    EpochRecord,
    TrainReport,
    build_baseline_model,
    build_equilibrium_model,
    train,
    train_baseline,
    train_epoch,
    train_equilibrium,
)
