import numpy as np
import pytest

from dataclasses import replace

from equihyper.data import SMOKE_SYNTH, generate_synthetic
from equihyper.linalg import FEASIBILITY_RTOL
from equihyper.training import (
    METRIC_FIELDS,
    BaselineConfig,
    TrainConfig,
    build_equilibrium_model,
    train,
    train_baseline,
    train_equilibrium,
)
from equihyper.utils import TrainingError, ValidationError


@pytest.fixture(scope="module")
def smoke_dataset():
    return generate_synthetic(SMOKE_SYNTH)


QUICK = TrainConfig(epochs=15, learning_rate=0.05, hidden_dim=8, batch_size=64, gamma=0.1)


def test_classification_loss_decreases(smoke_dataset) -> None:
    _, report = train_equilibrium(smoke_dataset, replace(QUICK, epochs=30, gamma=0.0), show_progress=False)
    losses = report.column("classification_loss")
    assert report.epochs == 30
    assert losses[-1] < losses[0]


def test_projection_keeps_contraction(smoke_dataset) -> None:
    model, report = train_equilibrium(smoke_dataset, replace(QUICK, learning_rate=0.2, epochs=100), show_progress=False)
    assert np.all(report.column("feasibility") <= QUICK.kappa * (1 + FEASIBILITY_RTOL))
    assert model.feasibility() <= QUICK.kappa * (1 + FEASIBILITY_RTOL)


def test_zero_learning_rate_keeps_initialization(smoke_dataset) -> None:
    config = replace(QUICK, learning_rate=0.0, epochs=3)
    initial = {name: value.copy() for name, value in build_equilibrium_model(smoke_dataset, config).parameters().items()}
    model, report = train_equilibrium(smoke_dataset, config, show_progress=False)
    for name, value in model.parameters().items():
        np.testing.assert_array_equal(value, initial[name])
    assert len(set(report.column("classification_loss"))) == 1


def test_zero_gamma_ignores_membership_head(smoke_dataset) -> None:
    config = replace(QUICK, gamma=0.0, epochs=5)
    initial = build_equilibrium_model(smoke_dataset, config).params.copy()
    model, report = train_equilibrium(smoke_dataset, config, show_progress=False)
    np.testing.assert_array_equal(model.params.phi_w, initial.phi_w)
    np.testing.assert_array_equal(model.params.phi_b, initial.phi_b)
    np.testing.assert_array_equal(report.column("total_loss"), report.column("classification_loss"))


def test_runs_are_reproducible(smoke_dataset) -> None:
    _, first = train_equilibrium(smoke_dataset, replace(QUICK, epochs=5), show_progress=False)
    _, second = train_equilibrium(smoke_dataset, replace(QUICK, epochs=5), show_progress=False)
    for name in METRIC_FIELDS:
        np.testing.assert_array_equal(first.column(name), second.column(name))
    for name, value in first.params.items():
        np.testing.assert_array_equal(value, second.params[name])


def test_epoch_records(smoke_dataset) -> None:
    _, report = train_equilibrium(smoke_dataset, replace(QUICK, epochs=2), show_progress=False)
    record = report.records[0]
    assert record.epoch == 1
    assert list(record.metrics()) == list(METRIC_FIELDS)
    assert record.forward_iterations > 0 and record.backward_iterations > 0
    assert record.membership_loss > 0.0
    assert 0.0 <= record.train_accuracy <= 1.0
    assert record.wall_time >= 0.0


def test_zero_epochs(smoke_dataset) -> None:
    _, report = train_equilibrium(smoke_dataset, replace(QUICK, epochs=0), show_progress=False)
    assert report.epochs == 0


def test_solver_failure_names_the_epoch(smoke_dataset) -> None:
    config = replace(QUICK, forward_max_iter=1, forward_tol=1e-12)
    with pytest.raises(TrainingError) as error:
        train_equilibrium(smoke_dataset, config, show_progress=False)
    assert error.value.epoch == 1
    assert type(error.value.cause).__name__ == "ConvergenceError"


@pytest.mark.parametrize("model", ["hgnn", "mlp"])
def test_baselines_train(smoke_dataset, model: str) -> None:
    config = BaselineConfig(model=model, depth=2, hidden_dim=8, epochs=20, learning_rate=0.1)
    trained, report = train_baseline(smoke_dataset, config, show_progress=False)
    losses = report.column("classification_loss")
    assert losses[-1] < losses[0]
    assert np.all(np.isnan(report.column("feasibility")))
    assert 0.0 <= trained.evaluate(smoke_dataset.labels, smoke_dataset.test_mask) <= 1.0


def test_train_rejects_bad_validation_fraction(smoke_dataset) -> None:
    model = build_equilibrium_model(smoke_dataset, QUICK)
    with pytest.raises(ValidationError):
        train(model, smoke_dataset, epochs=1, learning_rate=0.1, validation_fraction=1.0, show_progress=False)


if __name__ == "__main__":
    pytest.main([__file__])
