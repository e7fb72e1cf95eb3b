"""Benchmark suites behind ``rolpa bench``.

A suite expands into cases (one network, optionally with ground truth),
every case is run for each algorithm under ``runs`` consecutive seeds, and
the runs are aggregated into one :class:`BenchRow` per (algorithm, group).
Runs are independent and fan out over a thread pool; aggregation follows
the task list, never completion order, so reports are reproducible.
"""

from __future__ import annotations

import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .generators import GnSpec, gn_benchmark, ring_of_cliques
from .graph import Graph, Partition
from .io import read_edge_list, read_lfr, read_partition
from .propagation import RunConfig, Variant, detect, worker_count
from .quality import modularity, rrnmi

ALGORITHMS = tuple(v.value for v in Variant)
GN_MUS = tuple(round(0.05 * k, 2) for k in range(1, 13))
EDGE_SUFFIXES = (".txt", ".edges", ".edgelist", ".dat")
TRUTH_SUFFIX = ".truth.txt"

_MU_RE = re.compile(r"mu[_=-]?(\d+(?:\.\d+)?)", re.IGNORECASE)


@dataclass(frozen=True)
class Case:
    group: str
    graph: Graph
    truth: Partition | None = None
    mu: float | None = None


@dataclass(frozen=True)
class BenchRow:
    algorithm: str
    network: str
    mu: float | None
    networks: int
    runs: int
    planted_communities: float | None
    mean_communities: float
    mean_modularity: float
    std_modularity: float
    mean_rrnmi: float | None
    std_rrnmi: float | None
    mean_iterations: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class BenchReport:
    suite: str
    rows: list
    wall_times: list  # mean wall time per row, seconds
    total_wall_time: float

    def to_json(self) -> dict:
        return {"schema": 1, "suite": self.suite, "rows": [r.as_dict() for r in self.rows]}

    def timing_json(self) -> dict:
        return {
            "schema": 1,
            "suite": self.suite,
            "total_wall_time": self.total_wall_time,
            "rows": [{"algorithm": r.algorithm, "network": r.network, "mean_wall_time": w}
                     for r, w in zip(self.rows, self.wall_times)],
        }


def parse_mu(text: str) -> float | None:
    """Mixing parameter encoded in a name such as ``mu0.3`` or ``lfr_mu_0.45``."""
    m = _MU_RE.search(text)
    return float(m.group(1)) if m else None


def resolution_cases(max_cliques: int = 100, step: int = 4, clique_size: int = 4) -> list[Case]:
    counts = list(range(4, max_cliques + 1, step))
    if counts[-1] != max_cliques:
        counts.append(max_cliques)
    cases = []
    for c in counts:
        g, truth = ring_of_cliques(c, clique_size)
        cases.append(Case(f"ring c={c} k={clique_size}", g, truth))
    return cases


def gn_cases(mus=GN_MUS, networks: int = 100, seed: int = 0, n: int = 128,
             blocks: int = 4, avg_degree: float = 16.0) -> list[Case]:
    """Network ``k`` at every ``mu`` is generated with seed ``seed + k``."""
    cases = []
    for mu in mus:
        for k in range(networks):
            g, truth = gn_benchmark(GnSpec(mu, n, blocks, avg_degree, seed + k))
            cases.append(Case(f"gn mu={mu:g}", g, truth, float(mu)))
    return cases


def lfr_cases(directory) -> list[Case]:
    """Every LFR pair below ``directory``.

    A pair is either a folder holding ``network.dat`` and ``community.dat`` or
    two sibling files ``network<tag>.dat`` / ``community<tag>.dat``.  The mixing
    parameter is parsed from the folder or file name (``mu0.3``, ``mu_0.3``).
    """
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    cases = []
    for net in sorted(root.rglob("network*.dat")):
        comm = net.with_name("community" + net.name[len("network"):])
        if not comm.is_file():
            continue
        rel = net.parent.relative_to(root).as_posix()
        tag = net.stem[len("network"):]
        name = "/".join(p for p in (rel if rel != "." else "", tag.strip("_-.")) if p) or net.stem
        g, truth = read_lfr(net, comm)
        cases.append(Case(name, g, truth, parse_mu(name)))
    if not cases:
        raise FileNotFoundError(f"no LFR network/community pairs in {root}")
    return cases


def real_cases(directory) -> list[Case]:
    """Every edge-list file in ``directory``; ``<stem>.truth.txt`` supplies ground truth."""
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    cases = []
    for path in sorted(root.iterdir()):
        if not path.is_file() or path.suffix not in EDGE_SUFFIXES or path.name.endswith(TRUTH_SUFFIX):
            continue
        g = read_edge_list(path)
        truth_path = path.with_name(path.stem + TRUTH_SUFFIX)
        truth = read_partition(truth_path, g) if truth_path.is_file() else None
        cases.append(Case(path.stem, g, truth))
    if not cases:
        raise FileNotFoundError(f"no edge-list files in {root}")
    return cases


def _one_run(case: Case, cfg: RunConfig, samples: int):
    res = detect(case.graph, cfg)
    q = modularity(case.graph, res.partition)
    rr = None
    if case.truth is not None:
        try:
            rr = rrnmi(case.truth, res.partition, samples, seed=cfg.seed)
        except ValueError:
            rr = None
    return q, rr, res.community_count, res.iterations, res.wall_time


def _mean_std(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    arr = np.asarray(vals, dtype=np.float64)
    return float(arr.mean()), float(arr.std())


def run_suite(suite: str, cases: list[Case], algorithms=ALGORITHMS, runs: int = 10, seed: int = 0,
              delta: float = 0.1, max_iterations: int = 100, rnmi_samples: int = 100,
              workers: int | None = None) -> BenchReport:
    """Run every case ``runs`` times per algorithm and aggregate by (algorithm, group)."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    t0 = time.perf_counter()
    keys: list[tuple[str, str]] = []
    tasks = []
    for algo in algorithms:
        base = RunConfig(variant=algo, delta=delta, seed=seed, max_iterations=max_iterations)
        for case in cases:
            key = (base.variant.value, case.group)
            if key not in keys:
                keys.append(key)
            for r in range(runs):
                tasks.append((key, case, base.with_seed(seed + r)))

    nworkers = min(worker_count(workers), len(tasks))
    if nworkers > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            outcomes = list(pool.map(lambda t: _one_run(t[1], t[2], rnmi_samples), tasks))
    else:
        outcomes = [_one_run(t[1], t[2], rnmi_samples) for t in tasks]

    grouped: dict = {k: [] for k in keys}
    members: dict = {k: [] for k in keys}
    for (key, case, _), out in zip(tasks, outcomes):
        grouped[key].append(out)
        if not members[key] or members[key][-1] is not case:
            members[key].append(case)

    rows, walls = [], []
    for key in keys:
        outs = grouped[key]
        cases_k = members[key]
        q_mean, q_std = _mean_std([o[0] for o in outs])
        rr_mean, rr_std = _mean_std([o[1] for o in outs])
        planted = [c.truth.community_count for c in cases_k if c.truth is not None]
        rows.append(BenchRow(
            algorithm=key[0],
            network=key[1],
            mu=cases_k[0].mu,
            networks=len(cases_k),
            runs=runs,
            planted_communities=float(np.mean(planted)) if planted else None,
            mean_communities=float(np.mean([o[2] for o in outs])),
            mean_modularity=q_mean,
            std_modularity=q_std,
            mean_rrnmi=rr_mean,
            std_rrnmi=rr_std,
            mean_iterations=float(np.mean([o[3] for o in outs])),
        ))
        walls.append(float(np.mean([o[4] for o in outs])))
    return BenchReport(suite, rows, walls, time.perf_counter() - t0)


def csv_value(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return repr(v) if isinstance(v, float) else str(v)
