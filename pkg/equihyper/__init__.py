"""
.. include:: ../README.md
"""

from .baselines import (
    FeatureMLP,
    HypergraphConvolutionModel,
)

from .data import (
    LONG_RANGE_SYNTH,
    SMOKE_SYNTH,
    Dataset,
    SynthConfig,
    generate_synthetic,
    load_dataset,
    make_split,
    write_dataset,
)

from .equilibrium import (
    EmbeddingState,
    SolverConfig,
    backward_adjoint,
    coupled_fixed_point,
    forward_fixed_point,
    param_gradients,
)

from .hypergraph import (
    Hypergraph,
    NormalizedOperators,
    build_hypergraph,
    build_lve,
    build_operators,
)

from .linalg import (
    OpnormConfig,
    inf_norm,
    opnorm_power_iteration,
    project_row_l1,
    project_rows_l1,
    spmm,
)

from .model import (
    BaseModel,
    EquilibriumHypergraphModel,
    ModelParams,
    init_params,
)

from .training import (
    BaselineConfig,
    ExperimentConfig,
    TrainConfig,
    gradient_check,
    oversmooth,
    train,
    train_baseline,
    train_equilibrium,
)

from .typing import (
    ActivationName,
    DenseMatrix,
    SparseMatrix,
    Vector,
)

from .utils import (
    ContractionError,
    ConvergenceError,
    EquihyperError,
    KinkProximityError,
    NumericalError,
    ShapeMismatchError,
    TrainingError,
    ValidationError,
    configure_logging,
    seed_streams,
)
