import numpy as np

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Union

from equihyper.equilibrium import Activation, check_kink_distance, get_activation
from equihyper.hypergraph import Hypergraph, build_lve
from equihyper.linalg import as_dense, as_sparse, spmm
from equihyper.model import BaseModel, LossBreakdown, StepResult, classification_loss
from equihyper.typing import ActivationName, DenseMatrix
from equihyper.utils import ShapeMismatchError, ValidationError, seed_stream


@dataclass(eq=False)
class LayerCache:
    """Activations of one explicit forward pass, kept for backpropagation."""

    propagated: List[DenseMatrix]
    preactivations: List[DenseMatrix]
    outputs: List[DenseMatrix]
    logits: DenseMatrix


def layer_names(depth: int) -> List[str]:
    return [f"w{i}" for i in range(1, depth + 1)]


class HypergraphConvolutionModel(BaseModel):
    """
    Explicit k-layer hypergraph convolution, Z_i = sigma(L Z_{i-1} W_i) with
    Z_0 = X, followed by a linear classifier on Z_k.

    L = L_ve L_ve^T is applied as two sparse products and never formed.

    Parameters
    ----------
    hypergraph: Hypergraph
        Input hypergraph.
    features: DenseMatrix
        n x d_in node features.
    num_classes: int
        Number of classes C.
    depth: int
        Number of convolution layers k.
    hidden_dim: int
        Width of every layer.
    activation: ActivationName or Activation
        Entrywise activation.
    seed: int
        Master seed; the "init" substream draws the weights.
    params: Optional[Mapping[str, np.ndarray]]
        Use these parameters instead of drawing new ones.
    """

    def __init__(
        self,
        hypergraph: Hypergraph,
        features: DenseMatrix,
        num_classes: int,
        depth: int = 2,
        hidden_dim: int = 64,
        activation: Union[ActivationName, Activation] = "relu",
        seed: int = 0,
        params: Optional[Mapping[str, np.ndarray]] = None,
    ) -> None:
        super().__init__(hypergraph.node_count, num_classes, seed)
        if depth < 1:
            raise ValidationError(f"`depth` must be at least 1, got {depth}")
        if hidden_dim < 1:
            raise ValidationError(f"`hidden_dim` must be at least 1, got {hidden_dim}")
        features = as_dense(features)
        if features.shape[0] != hypergraph.node_count:
            raise ShapeMismatchError(
                "HypergraphConvolutionModel", features.shape, (hypergraph.node_count, features.shape[1])
            )

        self.hypergraph: Hypergraph = hypergraph
        self.features: DenseMatrix = features
        self.depth: int = depth
        self.hidden_dim: int = hidden_dim
        self.activation: Activation = get_activation(activation)
        self.l_ve = build_lve(hypergraph)
        self.l_ev = as_sparse(self.l_ve.T)

        if params is None:
            self.weights = self._init_weights(features.shape[1], seed)
        else:
            self.weights = {name: np.array(value, dtype=np.float64) for name, value in params.items()}
        self._check_weights(features.shape[1])

    def _init_weights(self, input_dim: int, seed: int) -> Dict[str, np.ndarray]:
        rng = seed_stream(seed, "init")
        weights = {}
        fan_in = input_dim
        for name in layer_names(self.depth):
            bound = np.sqrt(6.0 / fan_in)
            weights[name] = rng.uniform(-bound, bound, size=(fan_in, self.hidden_dim))
            fan_in = self.hidden_dim
        bound = 1.0 / np.sqrt(self.hidden_dim)
        weights["theta_w"] = rng.uniform(-bound, bound, size=(self.hidden_dim, self.num_classes))
        weights["theta_b"] = np.zeros(self.num_classes)
        return weights

    def _check_weights(self, input_dim: int) -> None:
        expected = layer_names(self.depth) + ["theta_w", "theta_b"]
        if sorted(self.weights) != sorted(expected):
            raise ValidationError(f"Expected parameters {expected}, got {sorted(self.weights)}")
        rows = input_dim
        for name in layer_names(self.depth):
            weight = self.weights[name]
            if weight.ndim != 2 or weight.shape[0] != rows:
                raise ShapeMismatchError("HypergraphConvolutionModel", weight.shape, (rows, self.hidden_dim), name)
            rows = weight.shape[1]
        if self.weights["theta_w"].shape != (rows, self.num_classes):
            raise ShapeMismatchError(
                "HypergraphConvolutionModel", self.weights["theta_w"].shape, (rows, self.num_classes)
            )
        if self.weights["theta_b"].shape != (self.num_classes,):
            raise ShapeMismatchError(
                "HypergraphConvolutionModel", self.weights["theta_b"].shape, (self.num_classes,)
            )

    def laplacian_apply(self, z: DenseMatrix) -> DenseMatrix:
        """L z = L_ve (L_ve^T z)."""
        return spmm(self.l_ve, spmm(self.l_ev, z))

    def parameters(self) -> Dict[str, np.ndarray]:
        return self.weights

    def forward_cached(self) -> LayerCache:
        """Forward pass that keeps every intermediate needed by `backprop`."""
        propagated, preactivations, outputs = [], [], [self.features]
        z = self.features
        for name in layer_names(self.depth):
            m = self.laplacian_apply(z)
            p = m @ self.weights[name]
            z = self.activation(p)
            propagated.append(m)
            preactivations.append(p)
            outputs.append(z)
        logits = z @ self.weights["theta_w"] + self.weights["theta_b"]
        return LayerCache(propagated, preactivations, outputs, logits)

    def forward(self) -> DenseMatrix:
        return self.forward_cached().logits

    def backprop(self, cache: LayerCache, d_logits: DenseMatrix) -> Dict[str, np.ndarray]:
        """
        Chain rule through the classifier and every layer.

        Parameters
        ----------
        cache: LayerCache
            Output of `forward_cached` at the current parameters.
        d_logits: DenseMatrix
            Gradient of the loss with respect to the logits.

        Returns
        -------
        Dict[str, np.ndarray]
            Gradient for every parameter.
        """
        gradients = {
            "theta_w": cache.outputs[-1].T @ d_logits,
            "theta_b": d_logits.sum(axis=0),
        }
        d_z = d_logits @ self.weights["theta_w"].T
        names = layer_names(self.depth)
        for i in reversed(range(self.depth)):
            d_p = d_z * self.activation.derivative(cache.preactivations[i])
            gradients[names[i]] = cache.propagated[i].T @ d_p
            # L is symmetric.
            d_z = self.laplacian_apply(d_p @ self.weights[names[i]].T)
        return gradients

    def loss_and_gradients(self, labels, mask, batch=None, gamma=0.0) -> StepResult:
        self.validate_input(labels, mask)
        cache = self.forward_cached()
        loss, d_logits = classification_loss(cache.logits, labels, mask)
        return StepResult(
            losses=LossBreakdown(total=loss, classification=loss),
            gradients=self.backprop(cache, d_logits),
            logits=cache.logits,
        )

    def check_finite_difference_safety(self) -> None:
        if not self.activation.has_kink:
            return
        for pre in self.forward_cached().preactivations:
            check_kink_distance(pre)
