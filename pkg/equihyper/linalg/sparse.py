import numpy as np
import scipy.sparse as sp

from typing import Any

from equihyper.typing import DenseMatrix, SparseMatrix
from equihyper.utils import ShapeMismatchError, ValidationError


def as_sparse(matrix: Any) -> sp.csr_matrix:
    """
    Convert a matrix to canonical float64 CSR storage.

    Canonical means: column indices strictly increasing within each row, no
    duplicate entries and no explicitly stored zeros.

    Parameters
    ----------
    matrix: Any
        Dense array, nested list or any scipy sparse matrix.

    Returns
    -------
    sp.csr_matrix
        A new canonical CSR matrix.
    """
    if sp.issparse(matrix):
        result = sp.csr_matrix(matrix, dtype=np.float64, copy=True)
    else:
        dense = np.asarray(matrix, dtype=np.float64)
        if dense.ndim != 2:
            raise ValidationError(f"Expected a 2-D matrix, got an array with shape {dense.shape}")
        result = sp.csr_matrix(dense)
    result.sum_duplicates()
    result.eliminate_zeros()
    result.sort_indices()
    if not np.all(np.isfinite(result.data)):
        raise ValidationError("Sparse matrix contains non-finite values")
    return result


def check_sparse(matrix: SparseMatrix) -> None:
    """
    Check the CSR invariants, raising `ValidationError` on the first violation.

    Parameters
    ----------
    matrix: SparseMatrix
        Matrix to check.
    """
    if not sp.issparse(matrix) or matrix.format != "csr":
        raise ValidationError(f"Expected a CSR matrix, got {type(matrix).__name__}")
    rows, cols = matrix.shape
    if matrix.indptr.shape[0] != rows + 1 or matrix.indptr[-1] != matrix.nnz:
        raise ValidationError("CSR row pointer is inconsistent with the row count")
    if matrix.nnz and (matrix.indices.min() < 0 or matrix.indices.max() >= cols):
        raise ValidationError("CSR column index out of range")
    for row in range(rows):
        start, end = matrix.indptr[row], matrix.indptr[row + 1]
        if np.any(np.diff(matrix.indices[start:end]) <= 0):
            raise ValidationError(f"Column indices of row {row} are not strictly increasing")
    if np.any(matrix.data == 0.0):
        raise ValidationError("CSR matrix stores explicit zeros")
    if not np.all(np.isfinite(matrix.data)):
        raise ValidationError("Sparse matrix contains non-finite values")


def as_dense(matrix: Any) -> DenseMatrix:
    """
    Convert to a finite, C-contiguous float64 2-D array.

    Parameters
    ----------
    matrix: Any
        Array-like input, or a scipy sparse matrix.

    Returns
    -------
    DenseMatrix
        The converted matrix.
    """
    if sp.issparse(matrix):
        matrix = matrix.toarray()
    dense = np.ascontiguousarray(matrix, dtype=np.float64)
    if dense.ndim == 1:
        dense = dense[:, None]
    if dense.ndim != 2:
        raise ValidationError(f"Expected a 2-D matrix, got an array with shape {dense.shape}")
    if not np.all(np.isfinite(dense)):
        raise ValidationError("Dense matrix contains non-finite values")
    return dense


def spmm(a: SparseMatrix, b: DenseMatrix) -> DenseMatrix:
    """
    Sparse times dense product.

    Every output row is accumulated in the stored column order of the matching
    sparse row, so the result is reproducible for a fixed input.

    Parameters
    ----------
    a: SparseMatrix
        Left operand, m x n.
    b: DenseMatrix
        Right operand, n x d.

    Returns
    -------
    DenseMatrix
        The m x d product.
    """
    if b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatchError("spmm", a.shape, b.shape, "inner dimensions must match")
    if not np.all(np.isfinite(b)):
        raise ValidationError("`spmm` right operand contains non-finite values")
    return np.ascontiguousarray(a @ b, dtype=np.float64)


def sparse_identity(size: int) -> sp.csr_matrix:
    """Canonical CSR identity of the given size."""
    return sp.identity(size, dtype=np.float64, format="csr")
