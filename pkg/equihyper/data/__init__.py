from .dataset import Dataset
from .io import (
    DEFAULT_FEATURE_DIM,
    FEATURES_FILE,
    HYPEREDGES_FILE,
    LABELS_FILE,
    STATS_FILE,
    load_dataset,
    read_features,
    read_hyperedges,
    read_labels,
    write_dataset,
)
from .split import make_split, split_validation
from .synthetic import LONG_RANGE_SYNTH, SMOKE_SYNTH, SynthConfig, generate_synthetic
