"""Community-oriented role indicators over a graph and a partition.

Density of a community, a node's intra-community degree centrality and its
loyalty (share of neighbours inside its own community), their min-max
normalisations, and the structural-holes constraint used to order updates.

Conventions for degenerate cases:

* a single-node community has density 0;
* min-max normalisation over identical values yields 0 everywhere;
* centrality is 0 when no member of the community has an intra-community
  neighbour.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .graph import Graph, Partition


@dataclass
class CommunityStats:
    label: int
    node_count: int
    intra_edge_count: int
    density: float
    density_norm: float = 0.0


@dataclass
class NodeState:
    node: int
    degree: int
    intra_degree: int
    loyalty: float
    loyalty_norm: float = 0.0
    centrality: float = 0.0
    constraint: float = 0.0


def density_from_counts(node_count: int, intra_edge_count: int) -> float:
    if node_count < 2:
        return 0.0
    return 2.0 * intra_edge_count / (node_count * (node_count - 1.0))


def intra_degrees(g: Graph, labels: np.ndarray) -> np.ndarray:
    """Number of neighbours sharing each node's label."""
    rows = np.repeat(np.arange(g.n), g.degrees)
    same = labels[rows] == labels[g.indices]
    return np.bincount(rows[same], minlength=g.n).astype(np.int64)


def intra_edge_counts(g: Graph, labels: np.ndarray) -> np.ndarray:
    """Intra-community edge count indexed by label."""
    e = g.edges()
    lu, lv = labels[e[:, 0]], labels[e[:, 1]]
    return np.bincount(lu[lu == lv], minlength=g.n).astype(np.int64)


def _check_label(p: Partition, c: int) -> None:
    if not (0 <= c < p.n) or p.counts[c] == 0:
        raise KeyError(f"unknown community label {c}")


def community_density(g: Graph, p: Partition, c: int) -> float:
    """Realised fraction of possible intra-community edges of community ``c``."""
    _check_label(p, c)
    members = p.labels == c
    e = g.edges()
    inside = int(np.count_nonzero(members[e[:, 0]] & members[e[:, 1]]))
    return density_from_counts(int(p.counts[c]), inside)


def community_stats(g: Graph, p: Partition) -> list[CommunityStats]:
    """Stats of every live community (densities normalised), ordered by label."""
    edges = intra_edge_counts(g, p.labels)
    stats = [
        CommunityStats(int(c), int(p.counts[c]), int(edges[c]),
                       density_from_counts(int(p.counts[c]), int(edges[c])))
        for c in p.community_labels
    ]
    return normalize_densities(stats)


def _minmax(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros_like(values, dtype=np.float64)
    return (values - lo) / (hi - lo)


def normalize_densities(stats: Sequence[CommunityStats]) -> Sequence[CommunityStats]:
    """Set ``density_norm`` on each entry by min-max over all given communities."""
    if not stats:
        return stats
    norms = _minmax(np.array([s.density for s in stats], dtype=np.float64))
    for s, v in zip(stats, norms):
        s.density_norm = float(v)
    return stats


def node_loyalty(g: Graph, p: Partition, i: int) -> float:
    """Fraction of ``i``'s neighbours in its own community."""
    d = g.degree(i)
    if d == 0:
        raise ValueError(f"zero degree: node {i} has no neighbours")
    nbrs = g.neighbors(i)
    return int(np.count_nonzero(p.labels[nbrs] == p.labels[i])) / d


def normalize_loyalties(states: Sequence[NodeState]) -> Sequence[NodeState]:
    """Set ``loyalty_norm`` on each entry by min-max over all given nodes."""
    if not states:
        return states
    norms = _minmax(np.array([s.loyalty for s in states], dtype=np.float64))
    for s, v in zip(states, norms):
        s.loyalty_norm = float(v)
    return states


def centralities(g: Graph, labels: np.ndarray, din: np.ndarray | None = None) -> np.ndarray:
    """Intra-degree divided by the largest intra-degree in the node's community."""
    if din is None:
        din = intra_degrees(g, labels)
    top = np.zeros(g.n, dtype=np.int64)
    np.maximum.at(top, labels, din)
    denom = top[labels]
    out = np.zeros(g.n, dtype=np.float64)
    np.divide(din, denom, out=out, where=denom > 0)
    return out


def node_centrality(g: Graph, p: Partition, i: int) -> float:
    members = np.flatnonzero(p.labels == p.labels[i])
    din = intra_degrees(g, p.labels)
    top = din[members].max()
    return float(din[i] / top) if top > 0 else 0.0


def node_states(g: Graph, p: Partition, standard_constraint: bool = False) -> list[NodeState]:
    """Full per-node role snapshot, with loyalties normalised over all nodes."""
    din = intra_degrees(g, p.labels)
    deg = g.degrees
    cent = centralities(g, p.labels, din)
    cons = constraint_scores(g, standard=standard_constraint)
    states = [
        NodeState(i, int(deg[i]), int(din[i]), din[i] / deg[i] if deg[i] else 0.0,
                  centrality=float(cent[i]), constraint=float(cons[i]))
        for i in range(g.n)
    ]
    return normalize_loyalties(states)


def constraint_scores(g: Graph, standard: bool = False) -> np.ndarray:
    """Constraint of every node (0 for isolated nodes).

    By default each ordered pair of distinct neighbours ``(j, q)`` with ``q``
    adjacent to ``j`` contributes ``(p_iq * p_qj)**2`` where
    ``p_xy = 1/deg(x)``.  With ``standard=True`` Burt's usual form
    ``sum_j (p_ij + sum_q p_iq p_qj)**2`` is returned instead.
    """
    return _kernels.constraint_values(g.indptr, g.indices, bool(standard))


def burt_constraint(g: Graph, i: int, standard: bool = False) -> float:
    """Constraint of a single node, evaluated directly from its ego network."""
    if g.degree(i) == 0:
        raise ValueError(f"zero degree: node {i} has no neighbours")
    di = g.degree(i)
    nbrs = g.neighbors(i)
    nbr_set = np.zeros(g.n, dtype=bool)
    nbr_set[nbrs] = True
    if standard:
        total = 0.0
        for j in nbrs:
            indirect = sum(1.0 / (di * g.degree(q)) for q in g.neighbors(j) if nbr_set[q])
            total += (1.0 / di + indirect) ** 2
        return total
    total = 0.0
    for q in nbrs:
        shared = int(np.count_nonzero(nbr_set[g.neighbors(q)]))
        total += shared * (1.0 / (di * g.degree(q))) ** 2
    return total


def constraint_order(g: Graph, standard: bool = False) -> np.ndarray:
    """Node indices by descending constraint, ties by ascending index.

    Scores are rounded to 12 significant decimals first so structurally
    identical nodes tie regardless of summation order.
    """
    scores = np.round(constraint_scores(g, standard), 12)
    return np.lexsort((np.arange(g.n), -scores)).astype(np.int64)
