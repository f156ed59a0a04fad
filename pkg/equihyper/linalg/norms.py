import logging
import numpy as np
import scipy.sparse as sp

from dataclasses import dataclass

from equihyper.typing import DenseMatrix, SparseMatrix
from equihyper.utils import ConvergenceError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OpnormConfig:
    """Stopping rule of the power iteration used to estimate operator norms."""

    tol: float = 1e-9
    max_iter: int = 5000
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ValidationError(f"`tol` must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValidationError(f"`max_iter` must be at least 1, got {self.max_iter}")
        if self.seed < 0:
            raise ValidationError(f"`seed` must be non-negative, got {self.seed}")


def inf_norm(w: DenseMatrix) -> float:
    """
    Matrix infinity norm: the largest absolute row sum.

    Parameters
    ----------
    w: DenseMatrix
        Matrix to measure.

    Returns
    -------
    float
        max_i sum_j |w_ij|, 0.0 for an empty matrix.
    """
    w = np.asarray(w, dtype=np.float64)
    if np.any(np.isnan(w)):
        raise ValidationError("`inf_norm` input contains NaN")
    if w.size == 0:
        return 0.0
    if w.ndim == 1:
        w = w[None, :]
    return float(np.abs(w).sum(axis=1).max())


def opnorm_power_iteration(
    a: SparseMatrix,
    tol: float = 1e-9,
    max_iter: int = 5000,
    seed: int = 0,
) -> float:
    """
    Estimate the largest singular value of `a` by power iteration on a^T a.

    The start vector is standard normal from `seed`. Iteration stops once the
    relative change of the estimate ||a x|| (x unit norm) drops below `tol`.

    Parameters
    ----------
    a: SparseMatrix
        Matrix whose operator 2-norm is estimated. Dense arrays are accepted too.
    tol: float
        Relative change threshold.
    max_iter: int
        Iteration budget.
    seed: int
        Seed of the start vector.

    Returns
    -------
    float
        Estimate of sigma_max(a), 0.0 when `a` is the zero matrix.
    """
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        raise ValidationError(f"`a` must be nonempty, got shape {a.shape}")
    if not tol > 0 or max_iter < 1:
        raise ValidationError(f"Invalid stopping rule: tol={tol}, max_iter={max_iter}")

    a_t = a.T.tocsr() if sp.issparse(a) else np.asarray(a).T
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(cols)
    x /= np.linalg.norm(x)

    sigma_old = np.inf
    sigma = 0.0
    change = np.inf
    for iteration in range(1, max_iter + 1):
        ax = a @ x
        sigma = float(np.linalg.norm(ax))
        if sigma == 0.0:
            # Either a is zero, or x landed exactly in its null space.
            if not np.any(a.data if sp.issparse(a) else a):
                return 0.0
            x = rng.standard_normal(cols)
            x /= np.linalg.norm(x)
            continue
        change = abs(sigma - sigma_old) / sigma
        if change < tol:
            logger.debug("Power iteration converged after %d iterations", iteration)
            logger.info("Estimated operator norm %.12g", sigma)
            return sigma
        sigma_old = sigma
        x = a_t @ ax
        x /= np.linalg.norm(x)

    logger.warning(
        "Power iteration did not converge in %d iterations (estimate %.12g, relative change %.3g)",
        max_iter,
        sigma,
        change,
    )
    raise ConvergenceError(
        f"Power iteration did not reach relative change {tol} within {max_iter} iterations",
        iterations=max_iter,
        residual=float(change),
        last_estimate=sigma,
    )
