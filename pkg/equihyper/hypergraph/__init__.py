from .hypergraph import (
    DENSE_ORACLE_MAX_NODES,
    Hypergraph,
    build_hypergraph,
    dense_laplacian_oracle,
    edge_inverse_degrees,
    edge_inverse_sqrt_degrees,
    node_inverse_degrees,
    node_inverse_sqrt_degrees,
)
from .operators import (
    NormalizedOperators,
    build_block_operator,
    build_laplacian_operator,
    build_lve,
    build_operators,
)
