import json
import os
import numpy as np
import pytest

from pathlib import Path

from equihyper.data import (
    SMOKE_SYNTH,
    generate_synthetic,
    load_dataset,
    read_features,
    read_hyperedges,
    read_labels,
    write_dataset,
)
from equihyper.utils import ValidationError


def write_files(root: Path, hyperedges: str, labels: str, **extra: str) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    (root / "hyperedges.txt").write_text(hyperedges)
    (root / "labels.txt").write_text(labels)
    for name, content in extra.items():
        (root / name.replace("_", ".")).write_text(content)
    return root


def test_load_small_directory(tmp_path) -> None:
    root = write_files(tmp_path / "toy", "0 1\n# comment\n\n1 2 3\n0 3\n", "0 0\n1 1\n2 1\n3 0\n")
    dataset = load_dataset(root, feature_dim=5, seed=1, train_ratio=0.5)
    assert dataset.name == "toy"
    assert dataset.node_count == 4
    assert dataset.hypergraph.edge_count == 3
    assert dataset.num_classes == 2
    assert dataset.features.shape == (4, 5)
    assert dataset.train_mask.sum() == 2
    assert "random normal features" in dataset.provenance


def test_random_features_follow_the_seed(tmp_path) -> None:
    root = write_files(tmp_path / "toy", "0 1\n", "0 0\n1 1\n")
    first = load_dataset(root, feature_dim=3, seed=4, train_ratio=0.5)
    second = load_dataset(root, feature_dim=3, seed=4, train_ratio=0.5)
    third = load_dataset(root, feature_dim=3, seed=5, train_ratio=0.5)
    np.testing.assert_array_equal(first.features, second.features)
    assert not np.array_equal(first.features, third.features)


def test_node_count_from_stats(tmp_path) -> None:
    root = write_files(
        tmp_path / "toy", "0 1\n", "0 0\n1 1\n2 0\n", stats_json=json.dumps({"n": 3})
    )
    dataset = load_dataset(root, feature_dim=2, train_ratio=0.5)
    assert dataset.node_count == 3
    assert dataset.hypergraph.node_degrees[2] == 0


def test_written_dataset_loads_back(tmp_path) -> None:
    dataset = generate_synthetic(SMOKE_SYNTH)
    root = write_dataset(dataset, tmp_path / "smoke")
    loaded = load_dataset(root, seed=SMOKE_SYNTH.seed, train_ratio=SMOKE_SYNTH.train_ratio)
    assert loaded.hypergraph.hyperedges == dataset.hypergraph.hyperedges
    np.testing.assert_array_equal(loaded.labels, dataset.labels)
    np.testing.assert_array_equal(loaded.features, dataset.features)
    np.testing.assert_array_equal(loaded.train_mask, dataset.train_mask)
    stats = json.loads((root / "stats.json").read_text())
    assert stats["n"] == SMOKE_SYNTH.n
    assert stats["total_incidence"] == dataset.hypergraph.total_incidence


def test_malformed_hyperedge_line_names_the_line(tmp_path) -> None:
    path = tmp_path / "hyperedges.txt"
    path.write_text("0 1\n2 x\n")
    with pytest.raises(ValidationError, match="hyperedges.txt:2"):
        read_hyperedges(path)


def test_label_errors(tmp_path) -> None:
    path = tmp_path / "labels.txt"
    path.write_text("0 1\n0 2\n")
    with pytest.raises(ValidationError, match="labeled twice"):
        read_labels(path)
    path.write_text("0 1 2\n")
    with pytest.raises(ValidationError, match="labels.txt:1"):
        read_labels(path)


def test_gap_in_node_ids(tmp_path) -> None:
    root = write_files(tmp_path / "gap", "0 2\n", "0 0\n2 1\n")
    with pytest.raises(ValidationError, match="node 1 has no label"):
        load_dataset(root, train_ratio=0.5)


def test_label_for_unknown_node(tmp_path) -> None:
    root = write_files(
        tmp_path / "extra", "0 1\n", "0 0\n1 1\n5 0\n", stats_json=json.dumps({"n": 2})
    )
    with pytest.raises(ValidationError, match="unknown node 5"):
        load_dataset(root, train_ratio=0.5)


def test_feature_errors(tmp_path) -> None:
    path = tmp_path / "features.csv"
    path.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(ValidationError, match="expected 2 columns"):
        read_features(path)
    root = write_files(tmp_path / "rows", "0 1\n", "0 0\n1 1\n", features_csv="1.0,2.0\n")
    with pytest.raises(ValidationError, match="one per node"):
        load_dataset(root, train_ratio=0.5)


def test_missing_files(tmp_path) -> None:
    with pytest.raises(ValidationError, match="does not exist"):
        load_dataset(tmp_path / "nowhere")
    (tmp_path / "partial").mkdir()
    (tmp_path / "partial" / "hyperedges.txt").write_text("0 1\n")
    with pytest.raises(ValidationError, match="labels.txt"):
        load_dataset(tmp_path / "partial")


@pytest.mark.slow
@pytest.mark.skipif("EQUIHYPER_HIGHSCHOOL_DIR" not in os.environ, reason="High-school files not available")
def test_highschool_statistics() -> None:
    dataset = load_dataset(os.environ["EQUIHYPER_HIGHSCHOOL_DIR"], feature_dim=64)
    assert dataset.node_count == 327
    assert dataset.hypergraph.edge_count == 7818
    assert dataset.num_classes == 9
    assert dataset.feature_dim == 64


if __name__ == "__main__":
    pytest.main([__file__])
