import json
import logging
import numpy as np

from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from equihyper.data.dataset import Dataset
from equihyper.data.split import make_split
from equihyper.hypergraph import build_hypergraph
from equihyper.utils import ValidationError, seed_stream

logger = logging.getLogger(__name__)


HYPEREDGES_FILE = "hyperedges.txt"
LABELS_FILE = "labels.txt"
FEATURES_FILE = "features.csv"
STATS_FILE = "stats.json"

# Width of the random features drawn for datasets shipped without features.
DEFAULT_FEATURE_DIM = 64


def _content_lines(path: Path) -> Iterator[Tuple[int, str]]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for number, raw in enumerate(handle, start=1):
                line = raw.strip()
                if line and not line.startswith("#"):
                    yield number, line
    except OSError as error:
        raise ValidationError(f"Cannot read `{path}`: {error}") from error


def _parse_ints(path: Path, number: int, line: str) -> List[int]:
    try:
        values = [int(token) for token in line.split()]
    except ValueError:
        raise ValidationError(f"{path}:{number}: expected whitespace-separated integers, got {line!r}")
    if any(value < 0 for value in values):
        raise ValidationError(f"{path}:{number}: node ids must be non-negative, got {line!r}")
    return values


def read_hyperedges(path: Union[str, Path]) -> List[List[int]]:
    """Parse a hyperedges.txt file into member lists."""
    path = Path(path)
    return [_parse_ints(path, number, line) for number, line in _content_lines(path)]


def read_labels(path: Union[str, Path]) -> Dict[int, int]:
    """Parse a labels.txt file into a node id -> class id mapping."""
    path = Path(path)
    labels: Dict[int, int] = {}
    for number, line in _content_lines(path):
        values = _parse_ints(path, number, line)
        if len(values) != 2:
            raise ValidationError(f"{path}:{number}: expected `node_id label_id`, got {line!r}")
        node, label = values
        if node in labels:
            raise ValidationError(f"{path}:{number}: node {node} is labeled twice")
        labels[node] = label
    return labels


def read_features(path: Union[str, Path]) -> np.ndarray:
    """Parse a header-free comma-separated features.csv file."""
    path = Path(path)
    rows = []
    for number, line in _content_lines(path):
        try:
            row = [float(token) for token in line.split(",")]
        except ValueError:
            raise ValidationError(f"{path}:{number}: expected comma-separated floats, got {line!r}")
        if rows and len(row) != len(rows[0]):
            raise ValidationError(f"{path}:{number}: expected {len(rows[0])} columns, got {len(row)}")
        rows.append(row)
    if not rows:
        raise ValidationError(f"`{path}` holds no feature rows")
    return np.array(rows, dtype=np.float64)


def _read_stats(path: Path) -> Optional[dict]:
    if not path.exists():
        return None
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as error:
        raise ValidationError(f"Cannot read `{path}`: {error}") from error


def load_dataset(
    path: Union[str, Path],
    feature_dim: int = DEFAULT_FEATURE_DIM,
    seed: int = 0,
    train_ratio: float = 0.3,
    name: Optional[str] = None,
) -> Dataset:
    """
    Load a dataset directory.

    The directory holds hyperedges.txt and labels.txt, and optionally
    features.csv and stats.json. The node count is taken from stats.json when
    present, otherwise it is one past the largest node id seen. Every node must
    be labeled exactly once.

    Parameters
    ----------
    path: str or Path
        Dataset directory.
    feature_dim: int
        Width of the standard-normal features drawn when features.csv is absent.
    seed: int
        Master seed for random features and the split.
    train_ratio: float
        Share of training nodes in (0, 1).
    name: Optional[str]
        Dataset name, the directory name by default.

    Returns
    -------
    Dataset
        The parsed dataset with a seeded train/test split.
    """
    root = Path(path)
    if not root.is_dir():
        raise ValidationError(f"Dataset directory `{root}` does not exist")
    for required in (HYPEREDGES_FILE, LABELS_FILE):
        if not (root / required).exists():
            raise ValidationError(f"Dataset directory `{root}` has no {required}")

    edges = read_hyperedges(root / HYPEREDGES_FILE)
    labels_by_node = read_labels(root / LABELS_FILE)
    stats = _read_stats(root / STATS_FILE)

    if stats is not None and "n" in stats:
        node_count = int(stats["n"])
    else:
        seen = [max(members) for members in edges if members] + list(labels_by_node)
        node_count = max(seen) + 1 if seen else 0
    if node_count < 1:
        raise ValidationError(f"Dataset `{root}` has no nodes")

    for node in labels_by_node:
        if node >= node_count:
            raise ValidationError(
                f"{root / LABELS_FILE}: label given for unknown node {node} (n={node_count})"
            )
    missing = [v for v in range(node_count) if v not in labels_by_node]
    if missing:
        raise ValidationError(
            f"{root / LABELS_FILE}: node ids are not contiguous, node {missing[0]} has no label "
            f"({len(missing)} unlabeled in total)"
        )
    labels = np.array([labels_by_node[v] for v in range(node_count)], dtype=np.int64)

    hypergraph = build_hypergraph(node_count, edges)

    features_path = root / FEATURES_FILE
    if features_path.exists():
        features = read_features(features_path)
        if features.shape[0] != node_count:
            raise ValidationError(
                f"`{features_path}` has {features.shape[0]} rows, expected one per node ({node_count})"
            )
        provenance = f"loaded from {root}"
    else:
        if feature_dim < 1:
            raise ValidationError(f"`feature_dim` must be at least 1, got {feature_dim}")
        features = seed_stream(seed, "features").standard_normal((node_count, feature_dim))
        provenance = f"loaded from {root}; random normal features (dim {feature_dim}, seed {seed})"

    train_mask, test_mask = make_split(node_count, train_ratio, seed)
    dataset = Dataset(
        name=name or root.name,
        hypergraph=hypergraph,
        features=features,
        labels=labels,
        train_mask=train_mask,
        test_mask=test_mask,
        provenance=provenance,
    )
    logger.info(
        "Loaded %s: n=%d, E=%d, C=%d, max edge size %d",
        dataset.name,
        hypergraph.node_count,
        hypergraph.edge_count,
        dataset.num_classes,
        hypergraph.max_edge_size,
    )
    return dataset


def write_dataset(dataset: Dataset, path: Union[str, Path]) -> Path:
    """
    Write a dataset directory readable by `load_dataset`.

    Emits hyperedges.txt, labels.txt, features.csv (17 significant digits, so
    values survive the round trip exactly) and stats.json.

    Parameters
    ----------
    dataset: Dataset
        Dataset to write.
    path: str or Path
        Target directory, created if needed.

    Returns
    -------
    Path
        The directory written to.
    """
    root = Path(path)
    try:
        root.mkdir(parents=True, exist_ok=True)
        with open(root / HYPEREDGES_FILE, "w", encoding="utf-8") as handle:
            for members in dataset.hypergraph.hyperedges:
                handle.write(" ".join(str(v) for v in members) + "\n")
        with open(root / LABELS_FILE, "w", encoding="utf-8") as handle:
            for node, label in enumerate(dataset.labels):
                handle.write(f"{node} {int(label)}\n")
        np.savetxt(root / FEATURES_FILE, dataset.features, fmt="%.17g", delimiter=",")
        with open(root / STATS_FILE, "w", encoding="utf-8") as handle:
            json.dump(dataset.stats(), handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as error:
        raise ValidationError(f"Cannot write dataset to `{root}`: {error}") from error
    logger.info("Wrote dataset %s to %s", dataset.name, root)
    return root
