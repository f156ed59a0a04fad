import numpy as np

from dataclasses import dataclass
from typing import Dict, Mapping

from equihyper.linalg import project_rows_l1
from equihyper.typing import DenseMatrix, Vector
from equihyper.utils import ShapeMismatchError, ValidationError, seed_stream


PARAM_NAMES = ("w", "u", "c", "theta_w", "theta_b", "phi_w", "phi_b")


@dataclass(eq=False)
class ModelParams:
    """
    Parameters of the equilibrium model.

    Attributes
    ----------
    w: DenseMatrix
        d x d equilibrium weight, kept inside {inf_norm(w) <= kappa_radius}.
    u: DenseMatrix
        d_in x d weight of the affine input map.
    c: Vector
        Length-d bias of the affine input map.
    theta_w: DenseMatrix
        Classifier weights, (2d) x C (d x C for the node-only variant).
    theta_b: Vector
        Classifier bias, length C.
    phi_w: Vector
        Membership head weights, length 2d (hyperedge half first).
    phi_b: Vector
        Membership head bias, length 1.
    """

    w: DenseMatrix
    u: DenseMatrix
    c: Vector
    theta_w: DenseMatrix
    theta_b: Vector
    phi_w: Vector
    phi_b: Vector

    @property
    def hidden_dim(self) -> int:
        return self.w.shape[0]

    @property
    def input_dim(self) -> int:
        return self.u.shape[0]

    @property
    def num_classes(self) -> int:
        return self.theta_b.shape[0]

    def arrays(self) -> Dict[str, np.ndarray]:
        """Live references to every parameter array, in `PARAM_NAMES` order."""
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> "ModelParams":
        return ModelParams(**{name: value.copy() for name, value in self.arrays().items()})

    def num_scalars(self) -> int:
        return int(sum(value.size for value in self.arrays().values()))

    @classmethod
    def from_arrays(cls, arrays: Mapping[str, np.ndarray]) -> "ModelParams":
        missing = [name for name in PARAM_NAMES if name not in arrays]
        if missing:
            raise ValidationError(f"Missing model parameters {missing}")
        params = cls(**{name: np.array(arrays[name], dtype=np.float64) for name in PARAM_NAMES})
        params.validate()
        return params

    def validate(self) -> None:
        d = self.w.shape[0]
        if self.w.shape != (d, d):
            raise ShapeMismatchError("ModelParams", self.w.shape, (d, d), "`w` must be square")
        if self.u.ndim != 2 or self.u.shape[1] != d:
            raise ShapeMismatchError("ModelParams", self.u.shape, (self.u.shape[0], d))
        if self.c.shape != (d,):
            raise ShapeMismatchError("ModelParams", self.c.shape, (d,))
        if self.theta_w.ndim != 2 or self.theta_w.shape[0] not in (d, 2 * d):
            raise ShapeMismatchError("ModelParams", self.theta_w.shape, (2 * d, self.theta_b.shape[0]))
        if self.theta_b.shape != (self.theta_w.shape[1],):
            raise ShapeMismatchError("ModelParams", self.theta_b.shape, (self.theta_w.shape[1],))
        if self.phi_w.shape != (2 * d,) or self.phi_b.shape != (1,):
            raise ShapeMismatchError("ModelParams", self.phi_w.shape, (2 * d,))
        for name, value in self.arrays().items():
            if not np.all(np.isfinite(value)):
                raise ValidationError(f"Parameter `{name}` contains non-finite values")


def init_params(
    input_dim: int,
    hidden_dim: int,
    num_classes: int,
    seed: int,
    kappa_radius: float,
    node_only: bool = False,
) -> ModelParams:
    """
    Draw initial parameters.

    W is uniform in [-1/sqrt(d), 1/sqrt(d)] and then projected row-wise onto the
    l1 ball of radius `kappa_radius`; U and the heads are uniform with a
    1/sqrt(fan_in) scale; biases start at zero.

    Parameters
    ----------
    input_dim: int
        Feature dimension d_in.
    hidden_dim: int
        Embedding dimension d.
    num_classes: int
        Number of classes C.
    seed: int
        Master seed; the "init" substream is used.
    kappa_radius: float
        Bound on inf_norm(W).
    node_only: bool
        Size the classifier for node embeddings alone.

    Returns
    -------
    ModelParams
        Feasible initial parameters.
    """
    if input_dim < 1 or hidden_dim < 1 or num_classes < 1:
        raise ValidationError(
            f"`input_dim`, `hidden_dim` and `num_classes` must be positive, got "
            f"{input_dim}, {hidden_dim}, {num_classes}"
        )
    rng = seed_stream(seed, "init")
    head_width = hidden_dim if node_only else 2 * hidden_dim

    def uniform(shape, fan_in):
        scale = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-scale, scale, size=shape)

    w = project_rows_l1(uniform((hidden_dim, hidden_dim), hidden_dim), kappa_radius)
    return ModelParams(
        w=w,
        u=uniform((input_dim, hidden_dim), input_dim),
        c=np.zeros(hidden_dim),
        theta_w=uniform((head_width, num_classes), head_width),
        theta_b=np.zeros(num_classes),
        phi_w=uniform((2 * hidden_dim,), 2 * hidden_dim),
        phi_b=np.zeros(1),
    )
