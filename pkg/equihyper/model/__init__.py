from .base_model import BaseModel, LossBreakdown, StepResult
from .equilibrium_model import EquilibriumHypergraphModel
from .heads import (
    ClassifierOutput,
    HeadGradients,
    affine_bias,
    build_edge_features,
    classify,
    head_gradients,
    pooling_matrix,
    random_edge_features,
)
from .losses import MembershipOutput, accuracy, classification_loss, membership_loss
from .params import PARAM_NAMES, ModelParams, init_params
from .sampler import MembershipBatch, sample_membership
