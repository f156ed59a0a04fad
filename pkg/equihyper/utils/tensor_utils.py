import numpy as np
import torch

from typing import Dict, Mapping


def pt_to_numpy(tensor: torch.Tensor) -> np.ndarray:
    """
    Convert a pytorch tensor to a float64 numpy array.

    Parameters
    ----------
    tensor: torch.Tensor
        Tensor on any device and of any floating dtype.

    Returns
    -------
    np.ndarray
        Contiguous float64 copy of the tensor.
    """
    return np.ascontiguousarray(tensor.detach().cpu().to(torch.float64).numpy())


def numpy_to_pt(array: np.ndarray) -> torch.Tensor:
    """
    Convert a numpy array to a float64 pytorch tensor.

    Parameters
    ----------
    array: np.ndarray
        Array of any numeric dtype.

    Returns
    -------
    torch.Tensor
        float64 tensor that owns its memory.
    """
    return torch.from_numpy(np.array(array, dtype=np.float64, copy=True))


def arrays_to_state_dict(arrays: Mapping[str, np.ndarray]) -> Dict[str, torch.Tensor]:
    """Convert a name -> array mapping to a name -> float64 tensor mapping."""
    return {name: numpy_to_pt(value) for name, value in arrays.items()}


def state_dict_to_arrays(state: Mapping[str, torch.Tensor]) -> Dict[str, np.ndarray]:
    """Convert a name -> tensor mapping back to a name -> float64 array mapping."""
    return {name: pt_to_numpy(value) for name, value in state.items()}
