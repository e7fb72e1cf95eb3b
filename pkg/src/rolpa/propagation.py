"""Label propagation engines: LPA, LPAD (hop attenuation) and roLPA.

roLPA runs two phases over a fixed update order (descending constraint):

* balancing: neighbour ``j`` of community ``c`` votes
  ``1 + density_norm(c) - loyalty_norm(j)``; the phase ends after
  ``max(1, ceil(log10 n))`` oscillations of the per-iteration change count
  (an iteration changing more labels than the one before), after an
  iteration without changes, or at ``max_iterations // 2``;
* converging: ``j`` votes ``score(j) * (1 + loyalty_norm(j) * centrality(j))``
  and the run stops at the label propagation fixpoint or at ``max_iterations``.

Community sizes, intra edge counts and intra degrees change on every move,
so density and loyalty seen by a vote are always current.  Their min-max
normalisation bounds and the centralities are recomputed at the end of each
iteration and held fixed during the next sweep (normalised values are
clipped to [0, 1]).  Hop scores are maintained in both phases.
"""

from __future__ import annotations

import enum
import math
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .graph import Graph, Partition
from .roles import constraint_order


class Variant(str, enum.Enum):
    LPA = "lpa"
    LPAD = "lpad"
    ROLPA = "rolpa"


class TieRule(str, enum.Enum):
    KEEP_CURRENT = "keep-current-if-tied"
    RANDOM = "random-among-ties"


class Phase(str, enum.Enum):
    BALANCING = "balancing"
    CONVERGING = "converging"


@dataclass(frozen=True)
class RunConfig:
    variant: Variant = Variant.ROLPA
    delta: float = 0.1
    seed: int = 0
    max_iterations: int = 100
    tie_rule: TieRule = TieRule.KEEP_CURRENT
    standard_constraint: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "tie_rule", TieRule(self.tie_rule))
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def with_seed(self, seed: int) -> "RunConfig":
        return RunConfig(self.variant, self.delta, seed, self.max_iterations,
                         self.tie_rule, self.standard_constraint)


@dataclass
class PropagationState:
    """Mutable state of one detection run (arrays indexed by node or label)."""

    labels: np.ndarray
    scores: np.ndarray
    intra_degree: np.ndarray
    comm_size: np.ndarray
    comm_edges: np.ndarray
    loyalty: np.ndarray
    loyalty_norm: np.ndarray
    density: np.ndarray
    density_norm: np.ndarray
    centrality: np.ndarray
    bounds: np.ndarray
    update_order: np.ndarray | None = None
    changed_counts: list = field(default_factory=list)
    ops_counts: list = field(default_factory=list)
    phase: Phase | None = None
    oscillation_count: int = 0
    iteration: int = 0

    @classmethod
    def initial(cls, n: int) -> "PropagationState":
        return cls(
            labels=np.arange(n, dtype=np.int64),
            scores=np.ones(n),
            intra_degree=np.zeros(n, dtype=np.int64),
            comm_size=np.ones(n, dtype=np.int64),
            comm_edges=np.zeros(n, dtype=np.int64),
            loyalty=np.ones(n),
            loyalty_norm=np.zeros(n),
            density=np.zeros(n),
            density_norm=np.zeros(n),
            centrality=np.zeros(n),
            bounds=np.zeros(4),
        )

    @property
    def live_labels(self) -> np.ndarray:
        return np.flatnonzero(self.comm_size)


@dataclass
class RunResult:
    partition: Partition
    iterations: int
    changed_counts: list
    wall_time: float
    converged: bool
    variant: Variant
    seed: int
    phase_switch_iteration: int | None = None
    ops_counts: list = field(default_factory=list)
    unsatisfied: int = 0  # nodes whose final label lacks maximal support (post-pass)

    @property
    def community_count(self) -> int:
        return self.partition.community_count

    @property
    def size_histogram(self) -> dict:
        """Community size -> number of communities of that size."""
        return dict(sorted(Counter(self.partition.size_multiset()).items()))


def oscillation_limit(n: int) -> int:
    """Balancing-phase oscillation budget: ``ceil(log10 n)``, at least 1."""
    return max(1, math.ceil(math.log10(n))) if n > 1 else 1


class _Scratch:
    __slots__ = ("acc", "seen", "touched", "ops", "max_intra", "node_live", "comm_live")

    def __init__(self, g: Graph):
        n = g.n
        self.acc = np.zeros(n)
        self.seen = np.zeros(n, dtype=np.bool_)
        self.touched = np.zeros(max(1, int(g.degrees.max(initial=0))), dtype=np.int64)
        self.ops = np.zeros(1, dtype=np.int64)
        self.max_intra = np.zeros(n, dtype=np.int64)
        self.node_live = g.degrees > 0
        self.comm_live = np.zeros(n, dtype=np.bool_)


def _unsatisfied(g: Graph, st: PropagationState, mode: int, scratch: _Scratch) -> int:
    scratch.ops[0] += len(g.indices) + g.n
    return int(_kernels.unsatisfied_count(
        g.indptr, g.indices, st.labels, st.scores, mode, st.bounds, st.centrality,
        st.comm_size, st.comm_edges, st.intra_degree,
        scratch.acc, scratch.seen, scratch.touched))


def _fixpoint(g, st, mode, scratch, changed: int, keep: bool) -> bool:
    # with keep-current ties a sweep without changes already certifies the
    # fixpoint; random ties can flip forever, so check every node instead
    if changed == 0:
        return True
    return not keep and _unsatisfied(g, st, mode, scratch) == 0


def _refresh(g: Graph, st: PropagationState, scratch: _Scratch, with_centrality: bool) -> None:
    scratch.ops[0] += _kernels.refresh_roles(
        g.degrees, st.labels, st.intra_degree, st.comm_size, st.comm_edges,
        st.loyalty, st.loyalty_norm, st.density, st.density_norm,
        st.centrality, scratch.max_intra, scratch.node_live, scratch.comm_live,
        st.bounds, with_centrality)


def _sweep(g, st, order, tie_u, mode, keep, delta, scratch) -> int:
    return int(_kernels.sweep(
        g.indptr, g.indices, order, tie_u, st.labels, st.scores, mode, keep, delta,
        st.bounds, st.centrality, st.comm_size, st.comm_edges, st.intra_degree,
        scratch.acc, scratch.seen, scratch.touched, scratch.ops))


def _run(g: Graph, cfg: RunConfig, on_iteration: Callable[[PropagationState], None] | None) -> RunResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    st = PropagationState.initial(g.n)
    scratch = _Scratch(g)
    keep = cfg.tie_rule is TieRule.KEEP_CURRENT
    rolpa = cfg.variant is Variant.ROLPA
    delta = 0.0 if cfg.variant is Variant.LPA else float(cfg.delta)
    switch_at = None
    converged = False
    if rolpa:
        st.update_order = constraint_order(g, cfg.standard_constraint)
        st.phase = Phase.BALANCING
        limit = oscillation_limit(g.n)
        balance_cap = max(1, cfg.max_iterations // 2)
        mode = _kernels.BALANCING
    else:
        mode = _kernels.UNIT if cfg.variant is Variant.LPA else _kernels.SCORED

    for t in range(1, cfg.max_iterations + 1):
        st.iteration = t
        scratch.ops[0] = 0
        order = st.update_order if rolpa else rng.permutation(g.n)
        tie_u = rng.random(g.n)
        changed = _sweep(g, st, order, tie_u, mode, keep, delta, scratch)
        prev = st.changed_counts[-1] if st.changed_counts else None
        st.changed_counts.append(changed)

        if rolpa:
            was_converging = st.phase is Phase.CONVERGING
            if not was_converging:
                if prev is not None and changed > prev:
                    st.oscillation_count += 1
                if st.oscillation_count >= limit or changed == 0 or t >= balance_cap:
                    st.phase = Phase.CONVERGING
                    mode = _kernels.CONVERGING
                    switch_at = t
            _refresh(g, st, scratch, with_centrality=st.phase is Phase.CONVERGING)
            if was_converging:
                converged = _fixpoint(g, st, mode, scratch, changed, keep)
        else:
            converged = _fixpoint(g, st, mode, scratch, changed, keep)

        st.ops_counts.append(int(scratch.ops[0]))
        if on_iteration is not None:
            on_iteration(st)
        if converged:
            break

    unsatisfied = _unsatisfied(g, st, mode, scratch)
    return RunResult(
        partition=Partition(st.labels),
        iterations=st.iteration,
        changed_counts=list(st.changed_counts),
        wall_time=time.perf_counter() - t0,
        converged=converged,
        variant=cfg.variant,
        seed=cfg.seed,
        phase_switch_iteration=switch_at,
        ops_counts=list(st.ops_counts),
        unsatisfied=unsatisfied,
    )


def _require(cfg: RunConfig, variant: Variant) -> None:
    if cfg.variant is not variant:
        raise ValueError(f"config variant {cfg.variant.value!r} passed to {variant.value} detector")


def lpa_detect(g: Graph, cfg: RunConfig | None = None, on_iteration=None) -> RunResult:
    """Plain asynchronous label propagation with a fresh random order each sweep."""
    cfg = cfg or RunConfig(variant=Variant.LPA)
    _require(cfg, Variant.LPA)
    return _run(g, cfg, on_iteration)


def lpad_detect(g: Graph, cfg: RunConfig | None = None, on_iteration=None) -> RunResult:
    """Label propagation where each vote is weighted by the voter's hop score."""
    cfg = cfg or RunConfig(variant=Variant.LPAD)
    _require(cfg, Variant.LPAD)
    return _run(g, cfg, on_iteration)


def rolpa_detect(g: Graph, cfg: RunConfig | None = None, on_iteration=None) -> RunResult:
    """Two-phase role-based label propagation.

    ``on_iteration`` is called with the live :class:`PropagationState` after
    every completed iteration (after the end-of-iteration refresh); it must
    not mutate it.
    """
    cfg = cfg or RunConfig(variant=Variant.ROLPA)
    _require(cfg, Variant.ROLPA)
    return _run(g, cfg, on_iteration)


def detect(g: Graph, cfg: RunConfig, on_iteration=None) -> RunResult:
    return _run(g, cfg, on_iteration)


def choose_label(neighbor_labels, current: int, u: float = 0.0, *,
                 phase: Phase | str = Phase.BALANCING, scores=None,
                 keep_current: bool = True) -> int:
    """Label the engine picks for a node with the given neighbourhood.

    Runs a single update of the centre of a star whose leaves hold
    ``neighbor_labels`` under neutral role weights (all normalised
    quantities zero), so each leaf votes 1, or its score in the converging
    phase.  ``u`` is the uniform draw used when a random tie-break is needed.
    """
    nbr = np.asarray(neighbor_labels, dtype=np.int64)
    k = len(nbr)
    if k == 0:
        return int(current)
    size = max(k + 1, int(max(nbr.max(), current)) + 1)
    indptr = np.full(size + 1, 2 * k, dtype=np.int64)
    indptr[0] = 0
    indptr[1:k + 2] = k + np.arange(k + 1)
    indices = np.concatenate((np.arange(1, k + 1), np.zeros(k))).astype(np.int64)
    labels = np.zeros(size, dtype=np.int64)
    labels[0] = current
    labels[1:k + 1] = nbr
    leaf_scores = np.ones(size)
    if scores is not None:
        leaf_scores[1:k + 1] = scores
    mode = _kernels.BALANCING if Phase(phase) is Phase.BALANCING else _kernels.CONVERGING
    _kernels.sweep(indptr, indices, np.zeros(1, dtype=np.int64), np.array([u], dtype=np.float64),
                   labels, leaf_scores, mode, keep_current, 0.0, np.zeros(4), np.zeros(size),
                   np.bincount(labels[:k + 1], minlength=size).astype(np.int64),
                   np.zeros(size, dtype=np.int64), np.zeros(size, dtype=np.int64),
                   np.zeros(size), np.zeros(size, dtype=np.bool_), np.zeros(k, dtype=np.int64),
                   np.zeros(1, dtype=np.int64))
    return int(labels[0])


@dataclass
class BatchResult:
    results: list
    modularities: np.ndarray
    community_counts: np.ndarray

    @property
    def mean_modularity(self) -> float:
        return float(self.modularities.mean())

    @property
    def std_modularity(self) -> float:
        return float(self.modularities.std())

    @property
    def mean_communities(self) -> float:
        return float(self.community_counts.mean())

    @property
    def std_communities(self) -> float:
        return float(self.community_counts.std())

    @property
    def mean_iterations(self) -> float:
        return float(np.mean([r.iterations for r in self.results]))

    @property
    def best(self) -> RunResult:
        """Highest-modularity run; earliest seed wins ties."""
        return self.results[int(np.argmax(self.modularities))]


def worker_count(default: int | None = None) -> int:
    env = os.environ.get("ROLPA_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return default if default is not None else (os.cpu_count() or 1)


def run_batch(g: Graph, cfg: RunConfig, runs: int, workers: int | None = None) -> BatchResult:
    """``runs`` independent detections with seeds ``cfg.seed, cfg.seed + 1, ...``."""
    from .quality import modularity

    if runs < 1:
        raise ValueError("runs must be >= 1")
    configs = [cfg.with_seed(cfg.seed + r) for r in range(runs)]
    workers = min(worker_count(workers), runs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: _run(g, c, None), configs))
    else:
        results = [_run(g, c, None) for c in configs]
    q = np.array([modularity(g, r.partition) for r in results])
    counts = np.array([r.community_count for r in results], dtype=np.float64)
    return BatchResult(results, q, counts)
