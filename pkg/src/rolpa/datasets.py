"""Bundled example networks."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .graph import Graph
from .io import read_edge_list


def karate_path() -> Path:
    """Path of the bundled Zachary karate club edge list (34 nodes, 78 edges, ids 1..34)."""
    return Path(str(resources.files("rolpa") / "data" / "karate.txt"))


def load_karate() -> Graph:
    return read_edge_list(karate_path())
