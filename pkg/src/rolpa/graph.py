"""Compact undirected simple graphs and node partitions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import _kernels


class GraphError(ValueError):
    """Raised for structurally invalid graph input."""


def name_sort_key(name):
    """Total order over mixed node identifiers: integers numerically, then strings."""
    if isinstance(name, (int, np.integer)) and not isinstance(name, bool):
        return (0, int(name), "")
    return (1, 0, str(name))


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph stored as CSR adjacency.

    ``indices[indptr[i]:indptr[i + 1]]`` are the sorted neighbors of node ``i``.
    ``names[i]`` is the original identifier of node ``i``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    names: tuple = ()
    loops_dropped: int = 0
    duplicates_dropped: int = 0
    _name_index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if not self.names:
            object.__setattr__(self, "names", tuple(range(len(self.indptr) - 1)))

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """Return the ``(m, 2)`` array of edges as index pairs with ``u < v``."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = rows < self.indices
        return np.column_stack((rows[keep], self.indices[keep]))

    def named_edges(self) -> set:
        """Edge set over original names as frozensets (order free)."""
        names = self.names
        return {frozenset((names[u], names[v])) for u, v in self.edges()}

    def index_of(self, name) -> int:
        """Dense index of an original identifier (also accepts its ``str`` form)."""
        lookup = self._name_index
        if lookup is None:
            lookup = {}
            for i, nm in enumerate(self.names):
                lookup[nm] = i
                lookup.setdefault(str(nm), i)
            object.__setattr__(self, "_name_index", lookup)
        try:
            return lookup[name]
        except KeyError:
            raise KeyError(f"unknown node id {name!r}") from None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(edges: Iterable[Sequence[Hashable]]) -> Graph:
    """Build a :class:`Graph` from ``(u, v)`` pairs of arbitrary identifiers.

    Self-loops are dropped and duplicate edges (in either direction) are
    collapsed; the counts of both are kept on the graph.  Identifiers are
    indexed densely in order of first appearance.
    """
    index: dict = {}
    src, dst = [], []
    for pair in edges:
        if len(pair) != 2:
            raise GraphError(f"edge must have two endpoints, got {pair!r}")
        u, v = pair
        src.append(index.setdefault(u, len(index)))
        dst.append(index.setdefault(v, len(index)))
    if not src:
        raise GraphError("empty graph")
    names = tuple(index)
    u = np.asarray(src, dtype=np.int64)
    v = np.asarray(dst, dtype=np.int64)
    loops = u == v
    n_loops = int(loops.sum())
    u, v = u[~loops], v[~loops]
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    n = len(names)
    key = np.unique(lo * n + hi)
    n_dups = len(lo) - len(key)
    graph = _from_canonical_pairs(n, key // n, key % n, names)
    object.__setattr__(graph, "loops_dropped", n_loops)
    object.__setattr__(graph, "duplicates_dropped", n_dups)
    return graph


def _from_canonical_pairs(n: int, lo: np.ndarray, hi: np.ndarray, names: tuple) -> Graph:
    rows = np.concatenate((lo, hi))
    cols = np.concatenate((hi, lo))
    order = np.lexsort((cols, rows))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return Graph(indptr=indptr, indices=np.ascontiguousarray(cols[order], dtype=np.int64), names=names)


def from_index_edges(n: int, pairs: np.ndarray, names: tuple = ()) -> Graph:
    """Build a graph over nodes ``0..n-1`` from an index-pair array (deduplicated)."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    lo, hi = pairs.min(axis=1), pairs.max(axis=1)
    key = np.unique(lo * n + hi)
    return _from_canonical_pairs(n, key // n, key % n, names or tuple(range(n)))


def subgraph(g: Graph, nodes: np.ndarray) -> Graph:
    """Induced subgraph on ``nodes`` (re-indexed in ascending index order)."""
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[nodes] = np.arange(len(nodes))
    e = g.edges()
    keep = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)
    e = remap[e[keep]]
    names = tuple(g.names[i] for i in nodes)
    return _from_canonical_pairs(len(nodes), e[:, 0], e[:, 1], names)


def connected_components(g: Graph) -> np.ndarray:
    """Component id per node; ids are assigned in order of lowest node index."""
    return _kernels.component_labels(g.indptr, g.indices)


def largest_component(g: Graph) -> Graph:
    """Subgraph induced by the largest connected component.

    Ties between equally large components go to the one holding the smallest
    original node identifier.
    """
    comp = connected_components(g)
    sizes = np.bincount(comp)
    if len(sizes) == 1:
        return g
    best = None
    for c in np.flatnonzero(sizes == sizes.max()):
        key = min(name_sort_key(g.names[i]) for i in np.flatnonzero(comp == c))
        if best is None or key < best[0]:
            best = (key, c)
    return subgraph(g, np.flatnonzero(comp == best[1]))


class Partition:
    """Assignment of every node to an integer community label.

    Labels are non-negative integers below ``n``; they need not be contiguous
    (detection runs use the index of the label's originating node).
    """

    __slots__ = ("labels", "_sizes")

    def __init__(self, labels):
        labels = np.array(labels, dtype=np.int64, copy=True).ravel()
        if labels.size == 0:
            raise ValueError("partition must cover at least one node")
        if labels.min() < 0 or labels.max() >= labels.size:
            labels = np.unique(labels, return_inverse=True)[1].astype(np.int64)
        self.labels = labels
        self._sizes = None

    @classmethod
    def from_assignment(cls, assignment: Sequence[Hashable]) -> "Partition":
        """Densify arbitrary hashable community ids in order of first appearance."""
        index: dict = {}
        return cls([index.setdefault(a, len(index)) for a in assignment])

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def counts(self) -> np.ndarray:
        """Member count indexed by label (zero for unused labels)."""
        if self._sizes is None:
            self._sizes = np.bincount(self.labels, minlength=self.n)
        return self._sizes

    @property
    def community_labels(self) -> np.ndarray:
        return np.flatnonzero(self.counts)

    @property
    def community_count(self) -> int:
        return int(np.count_nonzero(self.counts))

    def sizes(self) -> dict:
        """Mapping label -> member count for live communities."""
        counts = self.counts
        return {int(c): int(counts[c]) for c in np.flatnonzero(counts)}

    def size_multiset(self) -> list:
        return sorted(int(s) for s in self.counts[self.counts > 0])

    def members(self, label: int) -> np.ndarray:
        if label < 0 or label >= self.n or self.counts[label] == 0:
            raise KeyError(f"unknown community label {label}")
        return np.flatnonzero(self.labels == label)

    def communities(self) -> list:
        """Member arrays of every community, ordered by smallest member."""
        order = np.argsort(self.labels, kind="stable")
        cuts = np.flatnonzero(np.diff(self.labels[order])) + 1
        groups = np.split(order, cuts)
        return sorted(groups, key=lambda a: a[0])

    def canonical(self) -> "Partition":
        """Relabel communities 0..k-1 in order of their smallest member."""
        _, first, inverse = np.unique(self.labels, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first)] = np.arange(len(first))
        return Partition(rank[inverse])

    def same_as(self, other: "Partition") -> bool:
        """True when both induce the same grouping, regardless of label values."""
        return self.n == other.n and np.array_equal(self.canonical().labels, other.canonical().labels)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    __hash__ = None

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Partition(n={self.n}, communities={self.community_count})"


def singleton_partition(g: Graph) -> Partition:
    """Every node in its own community, labelled by its index."""
    return Partition(np.arange(g.n, dtype=np.int64))
