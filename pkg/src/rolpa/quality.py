"""Partition quality (modularity) and partition comparison (NMI family)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition
from .roles import intra_edge_counts


def modularity(g: Graph, p: Partition) -> float:
    """Newman-Girvan modularity in O(n + m).

    ``Q = sum_c [E(c)/m - (vol(c) / 2m)**2]`` with ``E(c)`` the intra edges and
    ``vol(c)`` the degree sum of community ``c``.
    """
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} nodes, graph has {g.n}")
    m = g.m
    if m == 0:
        raise ValueError("modularity undefined for a graph without edges")
    intra = intra_edge_counts(g, p.labels)
    vol = np.bincount(p.labels, weights=g.degrees, minlength=g.n)
    return float(intra.sum() / m - np.sum((vol / (2.0 * m)) ** 2))


@dataclass(frozen=True)
class ConfusionTable:
    """Nonzero cells of the contingency table between two partitions."""

    cells: np.ndarray
    row_sizes: np.ndarray
    col_sizes: np.ndarray
    cell_rows: np.ndarray
    cell_cols: np.ndarray
    n: int

    @classmethod
    def build(cls, a: Partition, b: Partition) -> "ConfusionTable":
        if a.n != b.n:
            raise ValueError(f"partitions cover different node counts ({a.n} vs {b.n})")
        _, ra = np.unique(a.labels, return_inverse=True)
        _, rb = np.unique(b.labels, return_inverse=True)
        kb = rb.max() + 1
        pair, cells = np.unique(ra * kb + rb, return_counts=True)
        return cls(cells=cells, row_sizes=np.bincount(ra), col_sizes=np.bincount(rb),
                   cell_rows=pair // kb, cell_cols=pair % kb, n=a.n)


def _plogp_sizes(sizes: np.ndarray, n: int) -> float:
    """``sum s * log(s / n)``, summed in sorted order so equal multisets give equal sums."""
    s = np.sort(sizes).astype(np.float64)
    return float(np.sum(s * np.log(s / n)))


def nmi(a: Partition, b: Partition) -> float:
    """Normalized mutual information (Danon et al. form), natural log, in [0, 1].

    With ``S(x) = sum x log(x / n)`` over block sizes, the numerator
    ``-2 sum n_ij log(n n_ij / (a_i b_j))`` equals ``-2 (S(cells) - S(rows) - S(cols))``
    and the denominator is ``S(rows) + S(cols)``; this form makes
    ``nmi(a, a)`` exactly 1.  Two single-community partitions compare as 1;
    otherwise a vanishing denominator gives 0.
    """
    t = ConfusionTable.build(a, b)
    s_rows = _plogp_sizes(t.row_sizes, t.n)
    s_cols = _plogp_sizes(t.col_sizes, t.n)
    denom = s_rows + s_cols
    if denom == 0.0:
        return 1.0 if len(t.row_sizes) == 1 and len(t.col_sizes) == 1 else 0.0
    numer = -2.0 * (_plogp_sizes(t.cells, t.n) - s_rows - s_cols)
    return float(min(1.0, max(0.0, numer / denom)))


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_partition_like(b: Partition, seed=None) -> Partition:
    """Uniform random partition with the same community-size multiset as ``b``.

    Node ids are shuffled and cut into blocks of ``b``'s community sizes
    (taken in label order).
    """
    rng = _as_generator(seed)
    sizes = b.counts[b.counts > 0]
    perm = rng.permutation(b.n)
    labels = np.empty(b.n, dtype=np.int64)
    labels[perm] = np.repeat(np.arange(len(sizes)), sizes)
    return Partition(labels)


def _mean_random_nmi(a: Partition, like: Partition, samples: int, rng) -> float:
    return float(np.mean([nmi(a, random_partition_like(like, rng)) for _ in range(samples)]))


def rnmi(a: Partition, b: Partition, samples: int = 100, seed=None) -> float:
    """``NMI(a, b)`` minus the mean NMI between ``a`` and random partitions shaped like ``b``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = _as_generator(seed)
    return nmi(a, b) - _mean_random_nmi(a, b, samples, rng)


def rrnmi(a: Partition, b: Partition, samples: int = 100, seed=None) -> float:
    """``rNMI(a, b) / rNMI(a, a)`` with ``a`` the ground truth.

    When ``a`` and ``b`` have the same size multiset both baselines come from
    one sample stream, so ``rrnmi(a, a) == 1`` exactly.  Otherwise the two
    baselines use independent streams spawned from ``seed``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if a.size_multiset() == b.size_multiset():
        base_b = base_a = _mean_random_nmi(a, a, samples, _as_generator(seed))
    else:
        if isinstance(seed, np.random.Generator):
            seed = int(seed.integers(2**63))
        sa, sb = np.random.SeedSequence(seed).spawn(2)
        base_a = _mean_random_nmi(a, a, samples, np.random.default_rng(sa))
        base_b = _mean_random_nmi(a, b, samples, np.random.default_rng(sb))
    ref = nmi(a, a) - base_a
    if ref == 0.0:
        raise ValueError("degenerate ground truth: rNMI(A, A) is zero")
    return (nmi(a, b) - base_b) / ref
