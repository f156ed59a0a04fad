from .activations import ACTIVATIONS, Activation, Identity, ReLU, Sigmoid, get_activation
from .solver import (
    BACKWARD_SOLVER,
    FORWARD_SOLVER,
    KINK_THRESHOLD,
    AdjointState,
    EmbeddingState,
    ParamGradients,
    SolverConfig,
    backward_adjoint,
    check_contraction,
    check_kink_distance,
    column_norm_sum,
    coupled_fixed_point,
    forward_fixed_point,
    param_gradients,
    preactivation,
)
