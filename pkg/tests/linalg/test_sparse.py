import numpy as np
import pytest
import scipy.sparse as sp

from equihyper.linalg import as_dense, as_sparse, check_sparse, sparse_identity, spmm
from equihyper.utils import ShapeMismatchError, ValidationError


def test_as_sparse_is_canonical() -> None:
    """Duplicates are summed, explicit zeros dropped and column indices sorted."""
    data = np.array([1.0, 2.0, 0.0, 3.0])
    rows = np.array([0, 0, 1, 1])
    cols = np.array([2, 2, 0, 1])
    matrix = as_sparse(sp.coo_matrix((data, (rows, cols)), shape=(2, 3)))

    check_sparse(matrix)
    assert matrix.nnz == 2
    np.testing.assert_array_equal(matrix.toarray(), [[0.0, 0.0, 3.0], [0.0, 3.0, 0.0]])


def test_as_sparse_rejects_non_finite() -> None:
    with pytest.raises(ValidationError):
        as_sparse(np.array([[1.0, np.inf]]))


def test_check_sparse_detects_unsorted_indices() -> None:
    matrix = sp.csr_matrix((np.array([1.0, 2.0]), np.array([1, 0]), np.array([0, 2])), shape=(1, 2))
    with pytest.raises(ValidationError):
        check_sparse(matrix)


def test_check_sparse_detects_explicit_zero() -> None:
    matrix = sp.csr_matrix((np.array([0.0]), np.array([0]), np.array([0, 1])), shape=(1, 1))
    with pytest.raises(ValidationError):
        check_sparse(matrix)


def test_spmm_matches_dense_product() -> None:
    rng = np.random.default_rng(0)
    dense = rng.standard_normal((7, 5)) * (rng.random((7, 5)) < 0.4)
    b = rng.standard_normal((5, 3))
    np.testing.assert_allclose(spmm(as_sparse(dense), b), dense @ b, rtol=1e-14, atol=1e-14)


def test_spmm_shape_mismatch() -> None:
    with pytest.raises(ShapeMismatchError) as error:
        spmm(sparse_identity(3), np.ones((4, 2)))
    assert error.value.left_shape == (3, 3)
    assert error.value.right_shape == (4, 2)


def test_spmm_rejects_nan_operand() -> None:
    b = np.ones((3, 1))
    b[1, 0] = np.nan
    with pytest.raises(ValidationError):
        spmm(sparse_identity(3), b)


def test_sparse_identity_and_as_dense() -> None:
    identity = sparse_identity(4)
    check_sparse(identity)
    np.testing.assert_array_equal(as_dense(identity), np.eye(4))
    assert as_dense([1.0, 2.0]).shape == (2, 1)


if __name__ == "__main__":
    pytest.main([__file__])
