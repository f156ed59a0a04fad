import numpy as np

from dataclasses import dataclass

from equihyper.hypergraph import Hypergraph
from equihyper.typing import DenseMatrix
from equihyper.utils import ShapeMismatchError, ValidationError


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    A labeled hypergraph with a transductive train/test split.

    Attributes
    ----------
    name: str
        Short dataset name.
    hypergraph: Hypergraph
        Incidence structure over n nodes.
    features: DenseMatrix
        n x d_in node features.
    labels: np.ndarray
        Class id in [0, num_classes) for every node.
    train_mask: np.ndarray
        Boolean mask of training nodes.
    test_mask: np.ndarray
        Boolean mask of test nodes, disjoint from `train_mask`.
    provenance: str
        Where the data came from (path, generator settings).
    """

    name: str
    hypergraph: Hypergraph
    features: DenseMatrix
    labels: np.ndarray
    train_mask: np.ndarray
    test_mask: np.ndarray
    provenance: str = ""

    def __post_init__(self) -> None:
        n = self.hypergraph.node_count
        if self.features.ndim != 2 or self.features.shape[0] != n:
            raise ShapeMismatchError("Dataset", self.features.shape, (n, -1), "one feature row per node")
        if self.labels.shape != (n,):
            raise ShapeMismatchError("Dataset", self.labels.shape, (n,), "one label per node")
        if self.train_mask.shape != (n,) or self.test_mask.shape != (n,):
            raise ShapeMismatchError("Dataset", self.train_mask.shape, self.test_mask.shape, "masks")
        if np.any(self.train_mask & self.test_mask):
            raise ValidationError("`train_mask` and `test_mask` overlap")
        if not np.all(np.isfinite(self.features)):
            raise ValidationError("Feature matrix contains non-finite values")
        if n and self.labels.min() < 0:
            raise ValidationError("Labels must be non-negative class ids")
        for array in (self.features, self.labels, self.train_mask, self.test_mask):
            array.setflags(write=False)

    @property
    def node_count(self) -> int:
        return self.hypergraph.node_count

    @property
    def num_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def with_split(self, train_mask: np.ndarray, test_mask: np.ndarray) -> "Dataset":
        """Same data with another split."""
        return Dataset(
            name=self.name,
            hypergraph=self.hypergraph,
            features=self.features,
            labels=self.labels,
            train_mask=np.array(train_mask, dtype=bool),
            test_mask=np.array(test_mask, dtype=bool),
            provenance=self.provenance,
        )

    def stats(self) -> dict:
        """Summary statistics as written to stats.json."""
        hg = self.hypergraph
        return {
            "name": self.name,
            "n": hg.node_count,
            "E": hg.edge_count,
            "C": self.num_classes,
            "max_edge_size": hg.max_edge_size,
            "total_incidence": hg.total_incidence,
            "provenance": self.provenance,
        }
