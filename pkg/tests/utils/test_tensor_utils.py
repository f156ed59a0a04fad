import numpy as np
import pytest
import torch

from equihyper.utils import (
    arrays_to_state_dict,
    numpy_to_pt,
    pt_to_numpy,
    state_dict_to_arrays,
)


test_cases_conversion = [
    np.array([1.0, 2.0]),
    np.arange(6, dtype=np.int32).reshape(2, 3),
    np.array([[np.pi]], dtype=np.float32),
]


@pytest.mark.parametrize("array", test_cases_conversion)
def test_numpy_to_pt(array: np.ndarray) -> None:
    tensor = numpy_to_pt(array)
    assert tensor.dtype == torch.float64
    np.testing.assert_array_equal(tensor.numpy(), array.astype(np.float64))
    tensor[...] = 0.0
    assert np.any(array != 0)


def test_pt_to_numpy() -> None:
    tensor = torch.ones(2, 2, dtype=torch.float32, requires_grad=True)
    array = pt_to_numpy(tensor)
    assert array.dtype == np.float64
    assert array.flags["C_CONTIGUOUS"]
    np.testing.assert_array_equal(array, 1.0)


def test_state_dict_round_trip_is_exact() -> None:
    arrays = {"w": np.random.default_rng(0).standard_normal((3, 3)), "b": np.zeros(3)}
    restored = state_dict_to_arrays(arrays_to_state_dict(arrays))
    for name, value in arrays.items():
        np.testing.assert_array_equal(restored[name], value)


if __name__ == "__main__":
    pytest.main([__file__])
