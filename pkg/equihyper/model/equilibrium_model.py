import logging
import numpy as np

from typing import Dict, Optional, Union

from equihyper.equilibrium import (
    Activation,
    EmbeddingState,
    SolverConfig,
    backward_adjoint,
    check_kink_distance,
    forward_fixed_point,
    get_activation,
    param_gradients,
    preactivation,
)
from equihyper.hypergraph import Hypergraph, build_operators
from equihyper.linalg import OpnormConfig, as_dense, inf_norm, project_rows_l1
from equihyper.model.base_model import BaseModel, LossBreakdown, StepResult
from equihyper.model.heads import (
    affine_bias,
    build_edge_features,
    classify,
    head_gradients,
    pooling_matrix,
    random_edge_features,
)
from equihyper.model.losses import classification_loss, membership_loss
from equihyper.model.params import ModelParams, init_params
from equihyper.model.sampler import MembershipBatch, sample_membership
from equihyper.typing import ActivationName, DenseMatrix, EdgeFeatureMode, OperatorKind
from equihyper.utils import ShapeMismatchError, ValidationError, seed_stream

logger = logging.getLogger(__name__)


class EquilibriumHypergraphModel(BaseModel):
    """
    Implicit hypergraph model: node and hyperedge embeddings are the fixed point

        Z = sigma(A Z W + X U + 1 c^T),

    classified by a linear head on pooled node representations and regularized
    by a logistic membership head. `W` is kept in the l1-row ball of radius
    kappa / opnorm(A), which makes the map a contraction.

    Parameters
    ----------
    hypergraph: Hypergraph
        Input hypergraph.
    features: DenseMatrix
        n x d_in node features.
    num_classes: int
        Number of classes C.
    hidden_dim: int
        Embedding dimension d.
    kappa: float
        Contraction target in (0, 1).
    activation: ActivationName or Activation
        Entrywise non-expansive activation.
    edge_features: EdgeFeatureMode
        "mean" averages member-node features into hyperedge features, "random"
        draws them from a standard normal.
    operator: OperatorKind
        "block" for the node/hyperedge fixed point, "laplacian" for the node-only
        variant without membership head.
    membership_batch_size: int
        Pairs drawn by `sample_batch`.
    forward_solver: Optional[SolverConfig]
        Stopping rule of the forward solve.
    backward_solver: Optional[SolverConfig]
        Stopping rule of the adjoint solve.
    opnorm_config: Optional[OpnormConfig]
        Power-iteration settings for opnorm(A).
    seed: int
        Master seed for initialization and random edge features.
    params: Optional[ModelParams]
        Use these parameters instead of drawing new ones.
    use_cache: bool
        Reuse operators built earlier for the same hypergraph.
    """

    def __init__(
        self,
        hypergraph: Hypergraph,
        features: DenseMatrix,
        num_classes: int,
        hidden_dim: int = 128,
        kappa: float = 0.95,
        activation: Union[ActivationName, Activation] = "relu",
        edge_features: EdgeFeatureMode = "mean",
        operator: OperatorKind = "block",
        membership_batch_size: int = 256,
        forward_solver: Optional[SolverConfig] = None,
        backward_solver: Optional[SolverConfig] = None,
        opnorm_config: Optional[OpnormConfig] = None,
        seed: int = 0,
        params: Optional[ModelParams] = None,
        use_cache: bool = True,
    ) -> None:
        super().__init__(hypergraph.node_count, num_classes, seed)
        features = as_dense(features)
        if features.shape[0] != hypergraph.node_count:
            raise ShapeMismatchError(
                "EquilibriumHypergraphModel", features.shape, (hypergraph.node_count, features.shape[1])
            )
        if edge_features not in ("mean", "random"):
            raise ValidationError(f"`edge_features` must be one of ['mean', 'random'], got {edge_features}")
        if membership_batch_size < 1:
            raise ValidationError(f"`membership_batch_size` must be at least 1, got {membership_batch_size}")

        self.hypergraph: Hypergraph = hypergraph
        self.activation: Activation = get_activation(activation)
        self.edge_features: EdgeFeatureMode = edge_features
        self.membership_batch_size: int = membership_batch_size
        self.forward_solver: Optional[SolverConfig] = forward_solver
        self.backward_solver: Optional[SolverConfig] = backward_solver
        self.ops = build_operators(hypergraph, kappa, opnorm_config, kind=operator, use_cache=use_cache)
        self.node_only: bool = operator == "laplacian"

        if self.node_only:
            self.x_hat: DenseMatrix = features
            self.pool = None
        else:
            if edge_features == "mean":
                x_e = build_edge_features(hypergraph, features)
            else:
                x_e = random_edge_features(
                    hypergraph, features.shape[1], seed_stream(seed, "edge_features")
                )
            self.x_hat = np.vstack([features, x_e])
            self.pool = pooling_matrix(hypergraph)

        if params is None:
            params = init_params(
                features.shape[1],
                hidden_dim,
                num_classes,
                seed,
                self.ops.kappa_radius,
                node_only=self.node_only,
            )
        params.validate()
        head_width = params.hidden_dim if self.node_only else 2 * params.hidden_dim
        if params.input_dim != features.shape[1] or params.num_classes != num_classes:
            raise ShapeMismatchError(
                "EquilibriumHypergraphModel",
                (params.input_dim, params.num_classes),
                (features.shape[1], num_classes),
                "parameters do not match the feature width and class count",
            )
        if params.theta_w.shape[0] != head_width:
            raise ShapeMismatchError(
                "EquilibriumHypergraphModel", params.theta_w.shape, (head_width, num_classes)
            )
        self.params: ModelParams = params

        logger.debug(
            "Equilibrium model: n=%d, E=%d, d=%d, operator=%s, opnorm=%.6g",
            hypergraph.node_count,
            hypergraph.edge_count,
            params.hidden_dim,
            operator,
            self.ops.opnorm_a,
        )

    @property
    def hidden_dim(self) -> int:
        return self.params.hidden_dim

    @property
    def kappa(self) -> float:
        return self.ops.kappa

    def parameters(self) -> Dict[str, np.ndarray]:
        return self.params.arrays()

    def bias(self) -> DenseMatrix:
        """b(X) = X U + 1 c^T over the stacked features."""
        return affine_bias(self.x_hat, self.params.u, self.params.c)

    def embed(self, z0: Optional[DenseMatrix] = None) -> EmbeddingState:
        """
        Solve for the node and hyperedge embeddings at the current parameters.

        Parameters
        ----------
        z0: Optional[DenseMatrix]
            Start iterate, zero when omitted.

        Returns
        -------
        EmbeddingState
            The fixed point and its convergence trace.
        """
        return forward_fixed_point(
            self.ops, self.params.w, self.bias(), self.activation, self.forward_solver, z0
        )

    def _classify(self, z: DenseMatrix):
        return classify(
            self.hypergraph,
            z,
            self.params.theta_w,
            self.params.theta_b,
            pool=self.pool,
            node_only=self.node_only,
        )

    def forward(self) -> DenseMatrix:
        return self._classify(self.embed().z).logits

    def sample_batch(self, rng: np.random.Generator) -> Optional[MembershipBatch]:
        if self.node_only:
            return None
        return sample_membership(self.hypergraph, self.membership_batch_size, rng)

    def _membership(self, z: DenseMatrix, batch: Optional[MembershipBatch]):
        if batch is None or self.node_only:
            return None
        return membership_loss(z, self.node_count, batch, self.params.phi_w, self.params.phi_b)

    def total_loss(
        self,
        labels: np.ndarray,
        mask: np.ndarray,
        batch: Optional[MembershipBatch] = None,
        gamma: float = 0.0,
    ) -> float:
        z = self.embed().z
        loss, _ = classification_loss(self._classify(z).logits, labels, mask)
        membership = self._membership(z, batch)
        if membership is not None and gamma != 0.0:
            loss += gamma * membership.loss
        return loss

    def loss_and_gradients(
        self,
        labels: np.ndarray,
        mask: np.ndarray,
        batch: Optional[MembershipBatch] = None,
        gamma: float = 0.0,
    ) -> StepResult:
        """
        Evaluate l1 + gamma * l2 and its gradient by implicit differentiation.

        The membership loss l2 is reported whenever a batch is given, and only
        enters the total and the gradient when `gamma` is non-zero.

        Parameters
        ----------
        labels: np.ndarray
            Class id of every node.
        mask: np.ndarray
            Nodes that contribute to the classification loss.
        batch: Optional[MembershipBatch]
            Membership pairs.
        gamma: float
            Weight of the membership loss.

        Returns
        -------
        StepResult
            Losses, gradients for every parameter, logits and solver iterations.
        """
        self.validate_input(labels, mask)
        params = self.params
        b = self.bias()
        state = forward_fixed_point(
            self.ops, params.w, b, self.activation, self.forward_solver
        )
        z = state.z
        classifier = self._classify(z)
        l1, d_logits = classification_loss(classifier.logits, labels, mask)
        membership = self._membership(z, batch)
        l2 = membership.loss if membership is not None else 0.0
        total = l1 + gamma * l2 if gamma != 0.0 else l1

        heads = head_gradients(
            self.hypergraph,
            z,
            classifier,
            d_logits,
            params.theta_w,
            membership,
            gamma,
            pool=self.pool,
            node_only=self.node_only,
        )
        adjoint = backward_adjoint(
            self.ops, params.w, b, z, heads.grad_z, self.activation, self.backward_solver
        )
        implicit = param_gradients(self.ops, z, adjoint.g, adjoint.d_mask, self.x_hat)

        gradients = {
            "w": implicit.grad_w,
            "u": implicit.grad_u,
            "c": implicit.grad_c,
            "theta_w": heads.grad_theta_w,
            "theta_b": heads.grad_theta_b,
            "phi_w": heads.grad_phi_w,
            "phi_b": heads.grad_phi_b,
        }
        return StepResult(
            losses=LossBreakdown(total=total, classification=l1, membership=l2),
            gradients=gradients,
            logits=classifier.logits,
            forward_iterations=state.iterations_used,
            backward_iterations=adjoint.iterations_used,
        )

    def project(self) -> None:
        """Project every row of W onto the l1 ball of radius kappa / opnorm(A), in place."""
        self.params.w[...] = project_rows_l1(self.params.w, self.ops.kappa_radius)

    def feasibility(self) -> float:
        """inf_norm(W) * opnorm(A); at most kappa after `project`."""
        return inf_norm(self.params.w) * self.ops.opnorm_a

    def check_finite_difference_safety(self) -> None:
        if not self.activation.has_kink:
            return
        z = self.embed().z
        check_kink_distance(preactivation(self.ops, self.params.w, self.bias(), z))
