import logging

from collections import OrderedDict
from typing import Any, Hashable

from equihyper.utils.errors import ValidationError

logger = logging.getLogger(__name__)


# Operators of a few hypergraphs at a time; sweeps revisit one hypergraph.
OPERATOR_CACHE_CAPACITY = 8


class OperatorCache:
    """
    Least-recently-used store of normalized hypergraph operators, keyed by
    hypergraph fingerprint plus contraction settings. Use the module functions
    `load_operators_from_cache` and `save_operators_to_cache` rather than an
    instance of your own.

    Parameters
    ----------
    capacity: int
        Number of entries kept; the least recently used one is evicted first.
    """

    def __init__(self, capacity: int = OPERATOR_CACHE_CAPACITY) -> None:
        if capacity < 1:
            raise ValidationError(f"`capacity` must be at least 1, got {capacity}")
        self.capacity = capacity
        self.entries: "OrderedDict[Hashable, Any]" = OrderedDict()

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, key: Hashable, default: Any = None) -> Any:
        if key not in self.entries:
            return default
        self.entries.move_to_end(key)
        return self.entries[key]

    def set(self, key: Hashable, operators: Any) -> None:
        self.entries[key] = operators
        self.entries.move_to_end(key)
        while len(self.entries) > self.capacity:
            evicted, _ = self.entries.popitem(last=False)
            logger.debug("Evicted cached operators %s", evicted)

    def clear(self) -> None:
        self.entries.clear()


_operator_cache = OperatorCache()


load_operators_from_cache = _operator_cache.get
save_operators_to_cache = _operator_cache.set
clear_operator_cache = _operator_cache.clear


def operator_cache_size() -> int:
    """Number of operator sets currently cached."""
    return len(_operator_cache)
