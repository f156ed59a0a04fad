import numpy as np

from equihyper.typing import DenseMatrix, Vector
from equihyper.utils import ValidationError


# Relative slack on the l1 feasibility test. Projected rows land within a few
# ulps of the sphere, and must be recognized as feasible on the next pass.
FEASIBILITY_RTOL = 1e-12


def _check_radius(radius: float) -> None:
    if not radius > 0 or not np.isfinite(radius):
        raise ValidationError(f"`radius` must be a positive finite number, got {radius}")


def project_row_l1(v: Vector, radius: float) -> Vector:
    """
    Euclidean projection of a vector onto the l1 ball of the given radius.

    Feasible inputs are returned unchanged (as a copy). Otherwise the sort-based
    soft-thresholding method is used: find the threshold tau such that
    sum(max(|v| - tau, 0)) = radius and shrink every magnitude by tau.

    Parameters
    ----------
    v: Vector
        Input vector of length d.
    radius: float
        Ball radius, strictly positive.

    Returns
    -------
    Vector
        The point of the ball closest to `v`.
    """
    _check_radius(radius)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValidationError(f"`v` must be one dimensional, got shape {v.shape}")
    if np.any(np.isnan(v)):
        raise ValidationError("`v` contains NaN")

    magnitude = np.abs(v)
    if magnitude.sum() <= radius * (1.0 + FEASIBILITY_RTOL):
        return v.copy()

    ordered = np.sort(magnitude)[::-1]
    cumulative = np.cumsum(ordered)
    ranks = np.arange(1, v.shape[0] + 1)
    support = np.nonzero(ordered * ranks > cumulative - radius)[0][-1]
    tau = (cumulative[support] - radius) / (support + 1.0)
    return np.sign(v) * np.maximum(magnitude - tau, 0.0)


def project_rows_l1(w: DenseMatrix, radius: float) -> DenseMatrix:
    """
    Project every row of `w` onto the l1 ball of the given radius.

    The nearest point (in Frobenius norm) of {W : inf_norm(W) <= radius}
    factorizes over rows, so each row is projected independently. Rows that are
    already feasible are copied bit for bit.

    Parameters
    ----------
    w: DenseMatrix
        Matrix to project.
    radius: float
        Ball radius, strictly positive.

    Returns
    -------
    DenseMatrix
        Projected copy of `w`.
    """
    _check_radius(radius)
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2:
        raise ValidationError(f"`w` must be two dimensional, got shape {w.shape}")
    projected = w.copy()
    for i in range(w.shape[0]):
        projected[i] = project_row_l1(w[i], radius)
    return projected
