#!/usr/bin/env python3
"""Compare the numba kernels against the pure-numpy fallback.

Each mode runs in its own interpreter because the JIT switch
(``ROLPA_DISABLE_JIT``) is read at import time.  Both modes run the same
detections; the script checks that they produce identical partitions and
reports the mean time per detection (compilation excluded via a warm-up run).

    python benchmarks/bench_kernels.py [--n 1280] [--repeats 3] [--json out.json]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import hashlib, json, sys, time
from rolpa import _jit
from rolpa.generators import GnSpec, gn_benchmark
from rolpa.propagation import RunConfig, detect
from rolpa.roles import constraint_scores

n, repeats = int(sys.argv[1]), int(sys.argv[2])
g, _ = gn_benchmark(GnSpec(0.3, n, max(4, n // 32), 16.0, seed=1))
detect(g, RunConfig(variant="lpa", seed=0, max_iterations=2))  # warm-up / compile
out = {"jit": _jit.JIT_ENABLED, "n": g.n, "m": g.m, "timings": {}, "digests": {}}
for variant in ("lpa", "lpad", "rolpa"):
    h = hashlib.sha256()
    t0 = time.perf_counter()
    for seed in range(repeats):
        res = detect(g, RunConfig(variant=variant, seed=seed))
        h.update(res.partition.labels.tobytes())
    out["timings"][variant] = (time.perf_counter() - t0) / repeats
    out["digests"][variant] = h.hexdigest()
t0 = time.perf_counter()
c = constraint_scores(g)
out["timings"]["constraint"] = time.perf_counter() - t0
out["digests"]["constraint"] = hashlib.sha256(c.tobytes()).hexdigest()
print(json.dumps(out))
"""


def run_mode(disable_jit: bool, n: int, repeats: int) -> dict:
    env = dict(os.environ, ROLPA_DISABLE_JIT="1" if disable_jit else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(n), str(repeats)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1280, help="GN graph size (default 1280)")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--json", help="also write the comparison here")
    args = ap.parse_args(argv)

    jit = run_mode(False, args.n, args.repeats)
    ref = run_mode(True, args.n, args.repeats)
    if not jit["jit"]:
        print("warning: numba unavailable, both runs used the fallback", file=sys.stderr)

    print(f"GN graph n={jit['n']} m={jit['m']}, {args.repeats} seeds per variant")
    print(f"{'kernel':12s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>9s}  identical")
    same_all = True
    rows = []
    for key in jit["timings"]:
        a, b = jit["timings"][key], ref["timings"][key]
        same = jit["digests"][key] == ref["digests"][key]
        same_all &= same
        rows.append({"kernel": key, "numba": a, "fallback": b, "identical": same})
        print(f"{key:12s} {a:10.4f} {b:10.4f} {b / a if a > 0 else float('inf'):8.1f}x  {same}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"n": jit["n"], "m": jit["m"], "rows": rows}, fh, indent=2)
    return 0 if same_all else 1


if __name__ == "__main__":
    sys.exit(main())
