import logging
import numpy as np
import scipy.sparse as sp

from dataclasses import dataclass
from typing import Optional

from equihyper.hypergraph.hypergraph import (
    Hypergraph,
    edge_inverse_sqrt_degrees,
    node_inverse_sqrt_degrees,
)
from equihyper.linalg import OpnormConfig, as_sparse, opnorm_power_iteration, spmm
from equihyper.typing import DenseMatrix, OperatorKind, SparseMatrix
from equihyper.utils import (
    ValidationError,
    load_operators_from_cache,
    save_operators_to_cache,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NormalizedOperators:
    """
    Normalized operators of one hypergraph, ready for the fixed-point solver.

    Attributes
    ----------
    l_ve: sp.csr_matrix
        n x E matrix D_v^{-1/2} H D_e^{-1/2}.
    l_ev: sp.csr_matrix
        Its transpose, stored in CSR for fast products.
    a_block: sp.csr_matrix
        The symmetric operator the fixed point is taken over. For `kind="block"`
        it is the (n+E) x (n+E) matrix [[0, L_ve], [L_ve^T, 0]]; for
        `kind="laplacian"` it is the n x n matrix L_ve L_ve^T.
    opnorm_a: float
        Power-iteration estimate of ||a_block||_op.
    kappa: float
        Contraction target in (0, 1).
    kappa_radius: float
        kappa / opnorm_a, the bound on ||W||_inf.
    kind: OperatorKind
        Which operator `a_block` holds.
    """

    l_ve: sp.csr_matrix
    l_ev: sp.csr_matrix
    a_block: sp.csr_matrix
    opnorm_a: float
    kappa: float
    kappa_radius: float
    kind: OperatorKind = "block"

    @property
    def node_count(self) -> int:
        return self.l_ve.shape[0]

    @property
    def edge_count(self) -> int:
        return self.l_ve.shape[1]

    @property
    def state_rows(self) -> int:
        """Number of rows of the stacked embedding matrix."""
        return self.a_block.shape[0]

    def propagate(self, z: DenseMatrix) -> DenseMatrix:
        """Return a_block @ z."""
        return spmm(self.a_block, z)

    def laplacian_apply(self, z: DenseMatrix) -> DenseMatrix:
        """Return L z = L_ve (L_ve^T z) for an n-row matrix z, without forming L."""
        return spmm(self.l_ve, spmm(self.l_ev, z))


def build_lve(hg: Hypergraph) -> sp.csr_matrix:
    """
    Build L_ve = D_v^{-1/2} H D_e^{-1/2}.

    Entry (v, e) is 1 / sqrt(deg(v) * |e|) when v belongs to e. Nodes of degree
    zero get all-zero rows.

    Parameters
    ----------
    hg: Hypergraph
        Input hypergraph.

    Returns
    -------
    sp.csr_matrix
        Canonical n x E CSR matrix.
    """
    dv = sp.diags(node_inverse_sqrt_degrees(hg))
    de = sp.diags(edge_inverse_sqrt_degrees(hg))
    return as_sparse(dv @ hg.incidence @ de)


def _check_kappa(kappa: float) -> None:
    if not 0.0 < kappa < 1.0:
        raise ValidationError(f"`kappa` must lie in (0, 1), got {kappa}")


def _finish(
    matrix: sp.csr_matrix,
    l_ve: sp.csr_matrix,
    kappa: float,
    opnorm_config: OpnormConfig,
    kind: OperatorKind,
) -> NormalizedOperators:
    opnorm = opnorm_power_iteration(
        matrix,
        tol=opnorm_config.tol,
        max_iter=opnorm_config.max_iter,
        seed=opnorm_config.seed,
    )
    if opnorm <= 0.0:
        raise ValidationError("Operator is identically zero; the hypergraph has no incidences")
    return NormalizedOperators(
        l_ve=l_ve,
        l_ev=as_sparse(l_ve.T),
        a_block=matrix,
        opnorm_a=opnorm,
        kappa=kappa,
        kappa_radius=kappa / opnorm,
        kind=kind,
    )


def build_block_operator(
    l_ve: SparseMatrix,
    kappa: float = 0.95,
    opnorm_config: Optional[OpnormConfig] = None,
) -> NormalizedOperators:
    """
    Assemble the symmetric block operator [[0, L_ve], [L_ve^T, 0]].

    Node rows read hyperedge columns through L_ve (n x E) and hyperedge rows read
    node columns through L_ve^T (E x n), which is the dimensionally consistent
    placement for stacked embeddings (Z_v; Z_e).

    Parameters
    ----------
    l_ve: SparseMatrix
        The n x E normalized incidence.
    kappa: float
        Contraction target in (0, 1).
    opnorm_config: Optional[OpnormConfig]
        Power-iteration settings, defaults to `OpnormConfig()`.

    Returns
    -------
    NormalizedOperators
        Operators with the norm estimate and the W radius kappa / opnorm.
    """
    _check_kappa(kappa)
    opnorm_config = opnorm_config or OpnormConfig()
    l_ve = as_sparse(l_ve)
    if l_ve.shape[1] == 0:
        raise ValidationError("Cannot build the block operator of a hypergraph without hyperedges")
    a_block = as_sparse(sp.bmat([[None, l_ve], [l_ve.T, None]], format="csr"))
    return _finish(a_block, l_ve, kappa, opnorm_config, "block")


def build_laplacian_operator(
    l_ve: SparseMatrix,
    kappa: float = 0.95,
    opnorm_config: Optional[OpnormConfig] = None,
) -> NormalizedOperators:
    """
    Node-only operator L = L_ve L_ve^T, for the implicit model over nodes alone.

    Parameters
    ----------
    l_ve: SparseMatrix
        The n x E normalized incidence.
    kappa: float
        Contraction target in (0, 1).
    opnorm_config: Optional[OpnormConfig]
        Power-iteration settings, defaults to `OpnormConfig()`.

    Returns
    -------
    NormalizedOperators
        Operators with `kind="laplacian"`.
    """
    _check_kappa(kappa)
    opnorm_config = opnorm_config or OpnormConfig()
    l_ve = as_sparse(l_ve)
    if l_ve.shape[1] == 0:
        raise ValidationError("Cannot build the Laplacian of a hypergraph without hyperedges")
    laplacian = as_sparse(l_ve @ l_ve.T)
    return _finish(laplacian, l_ve, kappa, opnorm_config, "laplacian")


def build_operators(
    hg: Hypergraph,
    kappa: float = 0.95,
    opnorm_config: Optional[OpnormConfig] = None,
    kind: OperatorKind = "block",
    use_cache: bool = True,
) -> NormalizedOperators:
    """
    Build (or fetch from the cache) the normalized operators of a hypergraph.

    Parameters
    ----------
    hg: Hypergraph
        Input hypergraph.
    kappa: float
        Contraction target in (0, 1).
    opnorm_config: Optional[OpnormConfig]
        Power-iteration settings.
    kind: OperatorKind
        "block" for the node/hyperedge operator, "laplacian" for nodes only.
    use_cache: bool
        Reuse operators already built for the same hypergraph and settings.

    Returns
    -------
    NormalizedOperators
        The operators.
    """
    if kind not in ("block", "laplacian"):
        raise ValidationError(f"`kind` must be one of ['block', 'laplacian'], got {kind}")
    opnorm_config = opnorm_config or OpnormConfig()
    key = (hg.fingerprint(), float(kappa), kind, opnorm_config)

    if use_cache:
        operators = load_operators_from_cache(key, None)
        if operators is not None:
            logger.debug("Reusing cached %s operators for hypergraph %s", kind, key[0][:12])
            return operators

    l_ve = build_lve(hg)
    if kind == "block":
        operators = build_block_operator(l_ve, kappa, opnorm_config)
    else:
        operators = build_laplacian_operator(l_ve, kappa, opnorm_config)

    if use_cache:
        save_operators_to_cache(key, operators)
    return operators
