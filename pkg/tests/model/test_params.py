import numpy as np
import pytest

from equihyper.linalg import FEASIBILITY_RTOL, inf_norm
from equihyper.model import PARAM_NAMES, ModelParams, init_params
from equihyper.utils import ShapeMismatchError, ValidationError


def test_init_shapes_and_feasibility() -> None:
    params = init_params(input_dim=5, hidden_dim=4, num_classes=3, seed=0, kappa_radius=0.3)
    assert params.w.shape == (4, 4)
    assert params.u.shape == (5, 4)
    assert params.theta_w.shape == (8, 3)
    assert params.phi_w.shape == (8,)
    assert params.phi_b.shape == (1,)
    assert inf_norm(params.w) <= 0.3 * (1 + FEASIBILITY_RTOL)
    np.testing.assert_array_equal(params.c, 0.0)
    assert params.num_scalars() == 16 + 20 + 4 + 24 + 3 + 8 + 1


def test_node_only_classifier_width() -> None:
    params = init_params(5, 4, 3, seed=0, kappa_radius=1.0, node_only=True)
    assert params.theta_w.shape == (4, 3)
    params.validate()


def test_init_is_deterministic() -> None:
    first = init_params(3, 2, 2, seed=7, kappa_radius=1.0)
    second = init_params(3, 2, 2, seed=7, kappa_radius=1.0)
    third = init_params(3, 2, 2, seed=8, kappa_radius=1.0)
    for name in PARAM_NAMES:
        np.testing.assert_array_equal(getattr(first, name), getattr(second, name))
    assert not np.array_equal(first.u, third.u)


def test_copy_is_independent() -> None:
    params = init_params(3, 2, 2, seed=0, kappa_radius=1.0)
    copied = params.copy()
    copied.w[0, 0] += 1.0
    assert params.w[0, 0] != copied.w[0, 0]


def test_from_arrays() -> None:
    arrays = init_params(3, 2, 2, seed=0, kappa_radius=1.0).arrays()
    restored = ModelParams.from_arrays(arrays)
    np.testing.assert_array_equal(restored.theta_w, arrays["theta_w"])

    with pytest.raises(ValidationError, match="Missing"):
        ModelParams.from_arrays({name: arrays[name] for name in PARAM_NAMES[:-1]})

    broken = dict(arrays, c=np.zeros(5))
    with pytest.raises(ShapeMismatchError):
        ModelParams.from_arrays(broken)

    nan = dict(arrays, theta_b=np.array([0.0, np.nan]))
    with pytest.raises(ValidationError, match="non-finite"):
        ModelParams.from_arrays(nan)


@pytest.mark.parametrize("dims", [(0, 2, 2), (2, 0, 2), (2, 2, 0)])
def test_init_rejects_empty_dimensions(dims) -> None:
    with pytest.raises(ValidationError):
        init_params(*dims, seed=0, kappa_radius=1.0)


if __name__ == "__main__":
    pytest.main([__file__])
