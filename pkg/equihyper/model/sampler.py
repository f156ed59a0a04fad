import numpy as np

from dataclasses import dataclass

from equihyper.hypergraph import Hypergraph
from equihyper.utils import ValidationError


@dataclass(frozen=True, eq=False)
class MembershipBatch:
    """
    Sampled (hyperedge, node, label) triples; label is 1 iff the node belongs to
    the hyperedge.
    """

    edge_ids: np.ndarray
    node_ids: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return int(self.edge_ids.shape[0])


def _kth_non_member(members, k: int) -> int:
    # members is sorted ascending; walk past every member at or below the candidate.
    node = k
    for member in members:
        if member <= node:
            node += 1
        else:
            break
    return node


def sample_membership(hg: Hypergraph, batch_size: int, rng: np.random.Generator) -> MembershipBatch:
    """
    Sample a membership batch.

    Hyperedges are drawn uniformly with replacement. For each, with probability
    1/2 a uniform member is paired (label 1), otherwise a uniform non-member
    (label 0). A hyperedge that contains every node always yields a member.

    Parameters
    ----------
    hg: Hypergraph
        Hypergraph to sample from.
    batch_size: int
        Number of triples.
    rng: np.random.Generator
        Source of randomness.

    Returns
    -------
    MembershipBatch
        The sampled triples.
    """
    if batch_size < 1:
        raise ValidationError(f"`batch_size` must be at least 1, got {batch_size}")
    if hg.edge_count == 0:
        raise ValidationError("Cannot sample membership pairs from a hypergraph without hyperedges")

    n = hg.node_count
    edge_ids = rng.integers(0, hg.edge_count, size=batch_size)
    sizes = hg.edge_degrees[edge_ids]
    want_member = rng.random(batch_size) < 0.5
    member_picks = rng.integers(0, sizes)
    outside_picks = rng.integers(0, np.maximum(n - sizes, 1))

    node_ids = np.empty(batch_size, dtype=np.int64)
    labels = np.empty(batch_size, dtype=np.int64)
    for i in range(batch_size):
        members = hg.hyperedges[edge_ids[i]]
        if want_member[i] or sizes[i] >= n:
            node_ids[i] = members[member_picks[i]]
            labels[i] = 1
        else:
            node_ids[i] = _kth_non_member(members, int(outside_picks[i]))
            labels[i] = 0

    return MembershipBatch(edge_ids=edge_ids.astype(np.int64), node_ids=node_ids, labels=labels)
