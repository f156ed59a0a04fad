import numpy as np

from typing import Dict, Iterable

from equihyper.utils.errors import ValidationError


# Order is part of the reproducibility contract: appending is fine, reordering
# or removing changes every downstream draw.
SEED_STREAMS = (
    "structure",
    "features",
    "split",
    "validation",
    "sampler",
    "init",
    "edge_features",
)


def seed_streams(seed: int, names: Iterable[str] = SEED_STREAMS) -> Dict[str, np.random.Generator]:
    """
    Fan one master seed out into independent named random generators.

    Each name maps to a fixed child of `numpy.random.SeedSequence(seed)`, so a
    component can change how many numbers it draws without shifting the draws of
    any other component.

    Parameters
    ----------
    seed: int
        Master seed.
    names: Iterable[str]
        Subset of `SEED_STREAMS` to materialize.

    Returns
    -------
    Dict[str, np.random.Generator]
        One generator per requested name.
    """
    if seed < 0:
        raise ValidationError(f"`seed` must be non-negative, got {seed}")
    children = np.random.SeedSequence(seed).spawn(len(SEED_STREAMS))
    index = {name: i for i, name in enumerate(SEED_STREAMS)}
    streams = {}
    for name in names:
        if name not in index:
            raise ValidationError(f"Unknown seed stream `{name}`, expected one of {SEED_STREAMS}")
        streams[name] = np.random.default_rng(children[index[name]])
    return streams


def seed_stream(seed: int, name: str) -> np.random.Generator:
    """Return the single generator `name` of the fan-out of `seed`."""
    return seed_streams(seed, [name])[name]
