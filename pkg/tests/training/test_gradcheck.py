import numpy as np
import pytest

from equihyper.baselines import FeatureMLP, HypergraphConvolutionModel
from equihyper.data import SynthConfig, generate_synthetic
from equihyper.equilibrium import SolverConfig
from equihyper.model import EquilibriumHypergraphModel
from equihyper.training import gradient_check, gradient_error, numeric_gradient
from equihyper.utils import KinkProximityError, ValidationError, seed_stream

TIGHT = SolverConfig(tol=1e-14, max_iter=20000)


def tiny_dataset(seed: int, n: int = 6, edges: int = 4):
    return generate_synthetic(
        SynthConfig(
            n=n,
            communities=2,
            edges=edges,
            mean_edge_size=3.0,
            informative_fraction=1.0,
            feature_dim=3,
            train_ratio=0.5,
            seed=seed,
        )
    )


def tiny_model(dataset, activation: str, seed: int = 0, **kwargs) -> EquilibriumHypergraphModel:
    return EquilibriumHypergraphModel(
        dataset.hypergraph,
        dataset.features,
        max(dataset.num_classes, 2),
        hidden_dim=3,
        kappa=0.5,
        activation=activation,
        membership_batch_size=8,
        forward_solver=TIGHT,
        backward_solver=TIGHT,
        seed=seed,
        use_cache=False,
        **kwargs,
    )


def test_gradient_error_floor() -> None:
    errors = gradient_error(np.array([1.0 + 1e-6, 1e-5]), np.array([1.0, 0.0]))
    np.testing.assert_allclose(errors, [1e-6, 1e-2], rtol=1e-9)


def test_implicit_gradients_on_fifty_instances() -> None:
    """Every parameter gradient agrees with central differences."""
    for seed in range(50):
        dataset = tiny_dataset(seed)
        model = tiny_model(dataset, "sigmoid", seed)
        batch = model.sample_batch(seed_stream(seed, "sampler"))
        report = gradient_check(model, dataset.labels, dataset.train_mask, batch, gamma=0.3)
        assert report.passed(), (seed, report.summary())
        assert report.checked == model.num_parameters()


def test_relu_instances_away_from_the_kink() -> None:
    checked = 0
    for seed in range(30):
        dataset = tiny_dataset(seed, n=12, edges=8)
        model = tiny_model(dataset, "relu", seed)
        batch = model.sample_batch(seed_stream(seed, "sampler"))
        try:
            report = gradient_check(model, dataset.labels, dataset.train_mask, batch, gamma=0.1)
        except KinkProximityError:
            continue
        assert report.passed(), (seed, report.summary())
        checked += 1
    assert checked > 0


def test_zero_features_sit_on_the_kink() -> None:
    dataset = tiny_dataset(0)
    model = EquilibriumHypergraphModel(
        dataset.hypergraph, np.zeros_like(dataset.features), 2, hidden_dim=3, use_cache=False
    )
    with pytest.raises(KinkProximityError):
        gradient_check(model, dataset.labels, dataset.train_mask)


@pytest.mark.parametrize("kind", ["hgnn", "mlp"])
def test_baseline_gradients(kind: str) -> None:
    dataset = tiny_dataset(3, n=12, edges=8)
    if kind == "hgnn":
        model = HypergraphConvolutionModel(
            dataset.hypergraph, dataset.features, 2, depth=3, hidden_dim=4, activation="sigmoid"
        )
    else:
        model = FeatureMLP(dataset.features, 2, hidden_dim=4, activation="sigmoid")
    report = gradient_check(model, dataset.labels, dataset.train_mask)
    assert report.passed()
    assert set(report.errors) == set(model.parameters())


def test_numeric_gradient_restores_parameters() -> None:
    dataset = tiny_dataset(1)
    model = tiny_model(dataset, "sigmoid")
    before = {name: value.copy() for name, value in model.parameters().items()}
    numeric_gradient(model, "w", dataset.labels, dataset.train_mask)
    for name, value in model.parameters().items():
        np.testing.assert_array_equal(value, before[name])


def test_large_models_are_rejected() -> None:
    dataset = tiny_dataset(0)
    model = EquilibriumHypergraphModel(dataset.hypergraph, dataset.features, 2, hidden_dim=64, use_cache=False)
    with pytest.raises(ValidationError, match="limited"):
        gradient_check(model, dataset.labels, dataset.train_mask)


def test_report_summary() -> None:
    dataset = tiny_dataset(2)
    model = tiny_model(dataset, "sigmoid")
    summary = gradient_check(model, dataset.labels, dataset.train_mask).summary()
    assert set(summary) == {"max_error", "worst_parameter", "worst_index", "checked", "epsilon", "per_parameter"}
    assert summary["worst_parameter"] in model.parameters()


if __name__ == "__main__":
    pytest.main([__file__])
