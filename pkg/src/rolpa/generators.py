"""Seeded synthetic benchmarks: ring of cliques and the planted GN partition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition, connected_components, from_index_edges, subgraph


def ring_of_cliques(clique_count: int, clique_size: int = 4) -> tuple[Graph, Partition]:
    """``clique_count`` cliques of ``clique_size`` nodes closed into a ring.

    Clique ``i`` occupies nodes ``i*k .. i*k + k - 1``; its node ``i*k`` links to
    node ``j*k + 1`` of the next clique ``j = (i + 1) mod c``.
    """
    c, k = int(clique_count), int(clique_size)
    if c < 3 or k < 3:
        raise ValueError("ring_of_cliques needs at least 3 cliques of at least 3 nodes")
    iu, ju = np.triu_indices(k, 1)
    base = np.arange(c)[:, None] * k
    intra = np.column_stack(((base + iu).ravel(), (base + ju).ravel()))
    nxt = (np.arange(c) + 1) % c
    bridges = np.column_stack((np.arange(c) * k, nxt * k + 1))
    g = from_index_edges(c * k, np.vstack((intra, bridges)))
    return g, Partition(np.repeat(np.arange(c), k))


@dataclass(frozen=True)
class GnSpec:
    """Planted-partition parameters; ``mu`` is the expected inter-community share of degree."""

    mu: float
    n: int = 128
    k_communities: int = 4
    avg_degree: float = 16.0
    seed: int = 0

    def __post_init__(self):
        if self.k_communities < 1 or self.n % self.k_communities:
            raise ValueError(f"n={self.n} is not divisible into {self.k_communities} communities")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")
        if self.avg_degree <= 0:
            raise ValueError("avg_degree must be positive")
        if self.p_in > 1.0 or self.p_out > 1.0:
            raise ValueError(f"edge probabilities exceed 1 (p_in={self.p_in:.3f}, p_out={self.p_out:.3f})")

    @property
    def block_size(self) -> int:
        return self.n // self.k_communities

    @property
    def p_in(self) -> float:
        s = self.block_size
        if s < 2:
            return 0.0 if self.mu == 1.0 else float("inf")
        return (1.0 - self.mu) * self.avg_degree / (s - 1)

    @property
    def p_out(self) -> float:
        rest = self.n - self.block_size
        if rest == 0:
            return 0.0 if self.mu == 0.0 else float("inf")
        return self.mu * self.avg_degree / rest


def _sample_pairs(rng, total: int, p: float) -> np.ndarray:
    """Indices of a Bernoulli(p) subset of ``range(total)``."""
    if total == 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    count = rng.binomial(total, p)
    return np.sort(rng.choice(total, size=count, replace=False))


def _triangle_decode(idx: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Map row-major indices of the strict upper triangle of an s x s matrix to (i, j)."""
    # row i starts at i*s - i*(i+1)/2
    i = (s - 0.5 - np.sqrt((s - 0.5) ** 2 - 2.0 * idx)).astype(np.int64)
    start = i * s - i * (i + 1) // 2
    over = idx < start
    i[over] -= 1
    start = i * s - i * (i + 1) // 2
    under = idx >= start + (s - 1 - i)
    i[under] += 1
    start = i * s - i * (i + 1) // 2
    return i, idx - start + i + 1


def gn_benchmark(spec: GnSpec) -> tuple[Graph, Partition]:
    """Sample a planted-partition graph reduced to its largest component.

    Every intra-block pair is an edge with probability
    ``(1 - mu) * <k> / (s - 1)`` and every inter-block pair with
    ``mu * <k> / (n - s)``, ``s`` being the block size.  The returned
    ground truth is restricted to the kept nodes.
    """
    rng = np.random.default_rng(spec.seed)
    s, nb = spec.block_size, spec.k_communities
    parts = []
    for b in range(nb):
        idx = _sample_pairs(rng, s * (s - 1) // 2, spec.p_in)
        i, j = _triangle_decode(idx, s)
        parts.append(np.column_stack((i + b * s, j + b * s)))
    for a in range(nb):
        for b in range(a + 1, nb):
            idx = _sample_pairs(rng, s * s, spec.p_out)
            parts.append(np.column_stack((idx // s + a * s, idx % s + b * s)))
    edges = np.vstack(parts) if parts else np.empty((0, 2), dtype=np.int64)
    truth = np.repeat(np.arange(nb), s)
    g = from_index_edges(spec.n, edges)
    comp = connected_components(g)
    sizes = np.bincount(comp)
    if len(sizes) > 1:
        keep = np.flatnonzero(comp == int(np.argmax(sizes)))
        g = subgraph(g, keep)
        truth = truth[keep]
    return g, Partition(truth)
