from .errors import (
    ContractionError,
    ConvergenceError,
    EquihyperError,
    KinkProximityError,
    NumericalError,
    ShapeMismatchError,
    TrainingError,
    ValidationError,
)
from .logging_utils import configure_logging
from .operator_cache import (
    OPERATOR_CACHE_CAPACITY,
    OperatorCache,
    clear_operator_cache,
    load_operators_from_cache,
    operator_cache_size,
    save_operators_to_cache,
)
from .random_utils import SEED_STREAMS, seed_stream, seed_streams
from .tensor_utils import (
    arrays_to_state_dict,
    numpy_to_pt,
    pt_to_numpy,
    state_dict_to_arrays,
)
