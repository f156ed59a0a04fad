import numpy as np

from typing import Tuple

from equihyper.utils import ValidationError, seed_stream


def make_split(node_count: int, train_ratio: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Transductive train/test split.

    Nodes are permuted uniformly with the "split" substream of `seed`; the first
    floor(train_ratio * n) become training nodes and the rest test nodes.

    Parameters
    ----------
    node_count: int
        Number of nodes n.
    train_ratio: float
        Share of training nodes in (0, 1).
    seed: int
        Master seed.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray]
        Disjoint boolean train and test masks covering every node.
    """
    if not 0.0 < train_ratio < 1.0:
        raise ValidationError(f"`train_ratio` must lie in (0, 1), got {train_ratio}")
    train_count = int(np.floor(train_ratio * node_count))
    if train_count == 0 or train_count == node_count:
        raise ValidationError(
            f"A train ratio of {train_ratio} over {node_count} nodes leaves an empty train or test set"
        )
    order = seed_stream(seed, "split").permutation(node_count)
    train_mask = np.zeros(node_count, dtype=bool)
    train_mask[order[:train_count]] = True
    return train_mask, ~train_mask


def split_validation(train_mask: np.ndarray, fraction: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Hold out a share of the training nodes for monitoring.

    Parameters
    ----------
    train_mask: np.ndarray
        Boolean training mask.
    fraction: float
        Share in [0, 1) of training nodes moved to validation, rounded down.
    seed: int
        Master seed; the "validation" substream is used.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray]
        Masks of the nodes fitted on and of the held-out nodes.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValidationError(f"`fraction` must lie in [0, 1), got {fraction}")
    train_ids = np.flatnonzero(train_mask)
    if train_ids.size == 0:
        raise ValidationError("`train_mask` selects no node")
    held_out = int(np.floor(fraction * train_ids.size))
    validation_mask = np.zeros_like(train_mask, dtype=bool)
    if held_out:
        chosen = seed_stream(seed, "validation").choice(train_ids, size=held_out, replace=False)
        validation_mask[chosen] = True
    fit_mask = np.asarray(train_mask, dtype=bool) & ~validation_mask
    return fit_mask, validation_mask
