import logging
import numpy as np

from dataclasses import asdict, dataclass

from equihyper.data.dataset import Dataset
from equihyper.data.split import make_split
from equihyper.hypergraph import build_hypergraph
from equihyper.utils import ValidationError, seed_streams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthConfig:
    """
    Planted-partition hypergraph with a long-range-dependency knob.

    Attributes
    ----------
    n: int
        Number of nodes.
    communities: int
        Number of communities K, which are also the classes.
    edges: int
        Number of hyperedges E.
    mean_edge_size: float
        Mean hyperedge cardinality s; sizes are 2 + Poisson(s - 2), capped at n.
    impurity: float
        Probability rho in [0, 1) that a member is drawn from outside the
        hyperedge's community.
    informative_fraction: float
        Share eta in (0, 1] of every community whose features carry the label.
    feature_dim: int
        Feature width, at least K.
    signal_scale: float
        Scale of the one-hot label signal of informative nodes.
    noise_scale: float
        Standard deviation of the Gaussian feature noise.
    train_ratio: float
        Share of training nodes.
    seed: int
        Master seed.
    """

    n: int = 600
    communities: int = 3
    edges: int = 2400
    mean_edge_size: float = 5.0
    impurity: float = 0.05
    informative_fraction: float = 0.1
    feature_dim: int = 16
    signal_scale: float = 1.0
    noise_scale: float = 0.5
    train_ratio: float = 0.3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.communities < 2:
            raise ValidationError(f"`communities` must be at least 2, got {self.communities}")
        if self.n < self.communities:
            raise ValidationError(f"`n` must be at least `communities`, got n={self.n}")
        if self.edges < 1:
            raise ValidationError(f"`edges` must be at least 1, got {self.edges}")
        if not self.mean_edge_size >= 2:
            raise ValidationError(f"`mean_edge_size` must be at least 2, got {self.mean_edge_size}")
        if self.mean_edge_size > self.n:
            raise ValidationError(
                f"`mean_edge_size` ({self.mean_edge_size}) cannot exceed the node count ({self.n})"
            )
        if not 0.0 <= self.impurity < 1.0:
            raise ValidationError(f"`impurity` must lie in [0, 1), got {self.impurity}")
        if not 0.0 < self.informative_fraction <= 1.0:
            raise ValidationError(
                f"`informative_fraction` must lie in (0, 1], got {self.informative_fraction}"
            )
        if self.feature_dim < self.communities:
            raise ValidationError(
                f"`feature_dim` must be at least `communities` ({self.communities}), got {self.feature_dim}"
            )
        if self.noise_scale < 0 or self.signal_scale < 0:
            raise ValidationError("`noise_scale` and `signal_scale` must be non-negative")
        if self.seed < 0:
            raise ValidationError(f"`seed` must be non-negative, got {self.seed}")


# Small, quick to train, and still needs the hypergraph for good accuracy.
SMOKE_SYNTH = SynthConfig(
    n=120, communities=2, edges=240, mean_edge_size=4.0, impurity=0.05, informative_fraction=0.5, feature_dim=8
)

# Few informative nodes, so labels must travel along chains of hyperedges.
LONG_RANGE_SYNTH = SynthConfig(
    n=600, communities=3, edges=2400, mean_edge_size=5.0, impurity=0.05, informative_fraction=0.1
)


def _draw_without_replacement(rng: np.random.Generator, pool: np.ndarray, count: int) -> np.ndarray:
    count = min(count, pool.shape[0])
    if count == 0:
        return pool[:0]
    return rng.choice(pool, size=count, replace=False)


def generate_synthetic(config: SynthConfig) -> Dataset:
    """
    Generate a planted-partition hypergraph dataset.

    Labels are drawn uniformly from K communities. Every hyperedge picks a
    community uniformly among the non-empty ones; each of its members comes from
    outside that community with probability rho and from inside otherwise.
    Within every community a random eta-share of nodes gets the feature
    one_hot(label) * signal_scale + noise, the others noise alone.

    Parameters
    ----------
    config: SynthConfig
        Generator settings.

    Returns
    -------
    Dataset
        The generated dataset with a seeded train/test split.
    """
    streams = seed_streams(config.seed, ["structure", "features"])
    structure, feature_rng = streams["structure"], streams["features"]
    n, k = config.n, config.communities

    labels = structure.integers(0, k, size=n)
    members_of = [np.flatnonzero(labels == c) for c in range(k)]
    outside_of = [np.flatnonzero(labels != c) for c in range(k)]
    nonempty = np.array([c for c in range(k) if members_of[c].size > 0])

    sizes = np.minimum(2 + structure.poisson(config.mean_edge_size - 2.0, size=config.edges), n)
    edge_communities = nonempty[structure.integers(0, nonempty.size, size=config.edges)]
    outsider_counts = structure.binomial(sizes, config.impurity)

    edges = []
    for size, community, outsiders in zip(sizes, edge_communities, outsider_counts):
        inside = members_of[community]
        outside = outside_of[community]
        outsiders = min(int(outsiders), outside.size)
        # Community too small for the requested size: top up from outside.
        insiders = min(int(size) - outsiders, inside.size)
        outsiders = min(int(size) - insiders, outside.size)
        chosen = np.concatenate(
            [
                _draw_without_replacement(structure, inside, insiders),
                _draw_without_replacement(structure, outside, outsiders),
            ]
        )
        edges.append(chosen.tolist())

    features = config.noise_scale * feature_rng.standard_normal((n, config.feature_dim))
    for c in range(k):
        informative = int(np.ceil(config.informative_fraction * members_of[c].size))
        chosen = _draw_without_replacement(feature_rng, members_of[c], informative)
        features[chosen, c] += config.signal_scale

    hypergraph = build_hypergraph(n, edges)
    train_mask, test_mask = make_split(n, config.train_ratio, config.seed)
    logger.info(
        "Generated synthetic hypergraph: n=%d, E=%d, K=%d, total incidence %d",
        n,
        hypergraph.edge_count,
        k,
        hypergraph.total_incidence,
    )
    return Dataset(
        name="synthetic",
        hypergraph=hypergraph,
        features=features,
        labels=labels.astype(np.int64),
        train_mask=train_mask,
        test_mask=test_mask,
        provenance="generate_synthetic(" + ", ".join(f"{key}={value}" for key, value in asdict(config).items()) + ")",
    )
