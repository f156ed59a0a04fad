import numpy as np
import scipy.sparse as sp

from typing import Union

try:
    from typing import Literal
except ImportError:  # pragma: no cover
    from typing_extensions import Literal


# Row-major float64 arrays. Shapes are documented at each use site.
DenseMatrix = np.ndarray
Vector = np.ndarray

# Compressed sparse row storage with canonical (sorted, duplicate-free) indices.
SparseMatrix = Union[sp.csr_matrix, sp.csr_array]

ActivationName = Literal["relu", "sigmoid", "identity"]

EdgeFeatureMode = Literal["mean", "random"]

OperatorKind = Literal["block", "laplacian"]
