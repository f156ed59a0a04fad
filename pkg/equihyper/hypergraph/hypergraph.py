import hashlib
import numpy as np
import scipy.sparse as sp

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from equihyper.typing import DenseMatrix, Vector
from equihyper.utils import ValidationError


# Guard for the dense Laplacian oracle, which is test-only.
DENSE_ORACLE_MAX_NODES = 2000


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _inverse_sqrt(degrees: np.ndarray) -> np.ndarray:
    # Zero degrees map to zero, isolating the corresponding rows/columns.
    result = np.zeros(degrees.shape[0], dtype=np.float64)
    positive = degrees > 0
    result[positive] = 1.0 / np.sqrt(degrees[positive])
    return result


def _inverse(degrees: np.ndarray) -> np.ndarray:
    result = np.zeros(degrees.shape[0], dtype=np.float64)
    positive = degrees > 0
    result[positive] = 1.0 / degrees[positive]
    return result


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """
    Immutable incidence structure.

    Attributes
    ----------
    node_count: int
        Number of nodes n; node ids are 0..n-1.
    hyperedges: Tuple[Tuple[int, ...], ...]
        Sorted, duplicate-free member lists, one per hyperedge.
    node_degrees: np.ndarray
        Number of hyperedges containing each node (diagonal of D_v).
    edge_degrees: np.ndarray
        Cardinality of each hyperedge (diagonal of D_e).
    incidence: sp.csr_matrix
        Binary n x E incidence matrix H.
    node_to_edges: Tuple[Tuple[int, ...], ...]
        For every node, the sorted ids of the hyperedges containing it.
    """

    node_count: int
    hyperedges: Tuple[Tuple[int, ...], ...]
    node_degrees: np.ndarray
    edge_degrees: np.ndarray
    incidence: sp.csr_matrix
    node_to_edges: Tuple[Tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return len(self.hyperedges)

    @property
    def total_incidence(self) -> int:
        """Sum of hyperedge cardinalities (number of nonzeros of H)."""
        return int(self.edge_degrees.sum())

    @property
    def max_edge_size(self) -> int:
        return int(self.edge_degrees.max()) if self.edge_count else 0

    def fingerprint(self) -> str:
        """Stable digest of the incidence structure, used as a cache key."""
        digest = hashlib.sha256()
        digest.update(np.int64(self.node_count).tobytes())
        digest.update(np.ascontiguousarray(self.incidence.indptr, dtype=np.int64).tobytes())
        digest.update(np.ascontiguousarray(self.incidence.indices, dtype=np.int64).tobytes())
        return digest.hexdigest()


def build_hypergraph(node_count: int, edges: Iterable[Sequence[int]]) -> Hypergraph:
    """
    Build a hypergraph from member lists.

    Duplicate node ids inside one hyperedge are dropped; duplicate hyperedges are
    kept as distinct hyperedges.

    Parameters
    ----------
    node_count: int
        Number of nodes, at least 1.
    edges: Iterable[Sequence[int]]
        Member node ids of every hyperedge.

    Returns
    -------
    Hypergraph
        The validated, immutable hypergraph.
    """
    if node_count < 1:
        raise ValidationError(f"`node_count` must be at least 1, got {node_count}")

    hyperedges: List[Tuple[int, ...]] = []
    for index, members in enumerate(edges):
        unique = sorted(set(int(v) for v in members))
        if not unique:
            raise ValidationError(f"Hyperedge {index} is empty")
        if unique[0] < 0 or unique[-1] >= node_count:
            bad = unique[0] if unique[0] < 0 else unique[-1]
            raise ValidationError(
                f"Hyperedge {index} references node {bad}, expected ids in [0, {node_count - 1}]"
            )
        hyperedges.append(tuple(unique))

    edge_count = len(hyperedges)
    edge_degrees = np.array([len(e) for e in hyperedges], dtype=np.int64)
    rows = np.fromiter((v for e in hyperedges for v in e), dtype=np.int64, count=int(edge_degrees.sum()))
    cols = np.repeat(np.arange(edge_count, dtype=np.int64), edge_degrees)
    incidence = sp.csr_matrix(
        (np.ones(rows.shape[0], dtype=np.float64), (rows, cols)),
        shape=(node_count, edge_count),
    )
    incidence.sum_duplicates()
    incidence.sort_indices()

    node_degrees = np.bincount(rows, minlength=node_count).astype(np.int64)
    node_to_edges = tuple(
        tuple(int(e) for e in incidence.indices[incidence.indptr[v] : incidence.indptr[v + 1]])
        for v in range(node_count)
    )

    return Hypergraph(
        node_count=node_count,
        hyperedges=tuple(hyperedges),
        node_degrees=_readonly(node_degrees),
        edge_degrees=_readonly(edge_degrees),
        incidence=incidence,
        node_to_edges=node_to_edges,
    )


def node_inverse_sqrt_degrees(hg: Hypergraph) -> Vector:
    """D_v^{-1/2} as a vector, with 0^{-1/2} := 0."""
    return _inverse_sqrt(hg.node_degrees.astype(np.float64))


def edge_inverse_sqrt_degrees(hg: Hypergraph) -> Vector:
    """D_e^{-1/2} as a vector."""
    return _inverse_sqrt(hg.edge_degrees.astype(np.float64))


def node_inverse_degrees(hg: Hypergraph) -> Vector:
    """D_v^{-1} as a vector, with 0^{-1} := 0."""
    return _inverse(hg.node_degrees.astype(np.float64))


def edge_inverse_degrees(hg: Hypergraph) -> Vector:
    """D_e^{-1} as a vector."""
    return _inverse(hg.edge_degrees.astype(np.float64))


def dense_laplacian_oracle(hg: Hypergraph) -> DenseMatrix:
    """
    Dense evaluation of D_v^{-1/2} H D_e^{-1} H^T D_v^{-1/2}.

    Meant for tests on small hypergraphs; refuses more than
    `DENSE_ORACLE_MAX_NODES` nodes.

    Parameters
    ----------
    hg: Hypergraph
        Input hypergraph.

    Returns
    -------
    DenseMatrix
        The n x n normalized Laplacian (message-passing form).
    """
    if hg.node_count > DENSE_ORACLE_MAX_NODES:
        raise ValidationError(
            f"Dense Laplacian oracle is limited to {DENSE_ORACLE_MAX_NODES} nodes, got {hg.node_count}"
        )
    h = hg.incidence.toarray()
    dv = np.diag(node_inverse_sqrt_degrees(hg))
    de = np.diag(edge_inverse_degrees(hg))
    return dv @ h @ de @ h.T @ dv
