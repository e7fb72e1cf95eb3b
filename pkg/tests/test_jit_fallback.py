"""The compiled kernels and the interpreted fallback must agree bit for bit."""

import hashlib
import json
import os
import subprocess
import sys

import pytest

from rolpa import _jit

SCRIPT = r"""
import hashlib, json
from rolpa import _jit
from rolpa.generators import GnSpec, gn_benchmark
from rolpa.propagation import RunConfig, detect
from rolpa.roles import constraint_scores

g, _ = gn_benchmark(GnSpec(0.3, n=128, seed=4))
out = {"jit": _jit.JIT_ENABLED}
for v in ("lpa", "lpad", "rolpa"):
    r = detect(g, RunConfig(variant=v, seed=6))
    h = hashlib.sha256(r.partition.labels.tobytes())
    h.update(repr((r.changed_counts, r.ops_counts)).encode())
    out[v] = h.hexdigest()
for std in (False, True):
    out[f"constraint-{std}"] = hashlib.sha256(constraint_scores(g, std).tobytes()).hexdigest()
print(json.dumps(out))
"""


def _digests(disable: bool) -> dict:
    env = dict(os.environ, ROLPA_DISABLE_JIT="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True,
                          check=True, timeout=600)
    return json.loads(proc.stdout.strip().splitlines()[-1])


@pytest.mark.skipif(not _jit.JIT_REQUESTED, reason="JIT disabled for this session")
def test_fallback_matches_compiled():
    compiled, fallback = _digests(False), _digests(True)
    assert compiled.pop("jit") is True
    assert fallback.pop("jit") is False
    assert compiled == fallback


@pytest.mark.parametrize("value, expected", [("1", False), ("true", False), ("0", True), ("", True),
                                             ("no", True)])
def test_env_flag_parsing(value, expected):
    assert _jit.jit_requested(value) is expected
