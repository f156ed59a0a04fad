import numpy as np
import pytest

from dataclasses import replace

from equihyper.data import LONG_RANGE_SYNTH, SMOKE_SYNTH, SynthConfig, generate_synthetic
from equihyper.utils import ValidationError


def test_shapes_and_classes() -> None:
    dataset = generate_synthetic(SMOKE_SYNTH)
    assert dataset.node_count == SMOKE_SYNTH.n
    assert dataset.hypergraph.edge_count == SMOKE_SYNTH.edges
    assert dataset.features.shape == (SMOKE_SYNTH.n, SMOKE_SYNTH.feature_dim)
    assert set(np.unique(dataset.labels)) <= set(range(SMOKE_SYNTH.communities))
    assert dataset.hypergraph.edge_degrees.min() >= 2


def test_generation_is_seeded() -> None:
    first = generate_synthetic(SMOKE_SYNTH)
    second = generate_synthetic(SMOKE_SYNTH)
    third = generate_synthetic(replace(SMOKE_SYNTH, seed=1))
    assert first.hypergraph.hyperedges == second.hypergraph.hyperedges
    np.testing.assert_array_equal(first.features, second.features)
    assert first.hypergraph.hyperedges != third.hypergraph.hyperedges


def test_pure_hyperedges_stay_inside_one_community() -> None:
    dataset = generate_synthetic(replace(SMOKE_SYNTH, impurity=0.0))
    for members in dataset.hypergraph.hyperedges:
        assert len(set(dataset.labels[list(members)])) == 1


def test_impurity_mixes_communities() -> None:
    dataset = generate_synthetic(replace(LONG_RANGE_SYNTH, impurity=0.5))
    mixed = sum(len(set(dataset.labels[list(members)])) > 1 for members in dataset.hypergraph.hyperedges)
    assert mixed > dataset.hypergraph.edge_count // 2


def test_informative_share_carries_the_signal() -> None:
    config = replace(SMOKE_SYNTH, noise_scale=0.0, informative_fraction=0.25)
    dataset = generate_synthetic(config)
    informative = np.abs(dataset.features).sum(axis=1) > 0
    for c in range(config.communities):
        members = dataset.labels == c
        assert informative[members].sum() == int(np.ceil(0.25 * members.sum()))
        np.testing.assert_array_equal(dataset.features[informative & members, c], config.signal_scale)


@pytest.mark.parametrize(
    "overrides",
    [
        {"communities": 1},
        {"n": 1},
        {"edges": 0},
        {"mean_edge_size": 1.5},
        {"mean_edge_size": 500.0},
        {"impurity": 1.0},
        {"informative_fraction": 0.0},
        {"feature_dim": 1},
        {"noise_scale": -1.0},
        {"seed": -1},
    ],
)
def test_invalid_configs(overrides) -> None:
    with pytest.raises(ValidationError):
        replace(SMOKE_SYNTH, **overrides)


if __name__ == "__main__":
    pytest.main([__file__])
