"""Plain-text graph and partition files.

Edge lists hold one ``u v`` pair per line (any whitespace); lines starting
with ``#`` or ``%`` and blank lines are ignored.  Community files hold one
``node community`` pair per line.  LFR benchmark output is the pair
``network.dat`` / ``community.dat`` in the same two layouts.
"""

from __future__ import annotations

import os
from pathlib import Path

from .graph import Graph, Partition, build_graph, name_sort_key

COMMENT_PREFIXES = ("#", "%")


class FormatError(ValueError):
    """Malformed input file; the message carries path and line number."""

    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = str(path)
        self.lineno = lineno


def _token(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def _pairs(path):
    """Yield ``(lineno, a, b)`` from a two-column whitespace file."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith(COMMENT_PREFIXES):
                continue
            toks = s.split()
            if len(toks) != 2:
                raise FormatError(path, lineno, f"expected 2 fields, found {len(toks)}")
            yield lineno, _token(toks[0]), _token(toks[1])


def read_edge_list(path: str | os.PathLike) -> Graph:
    """Read an edge list; duplicate and reversed lines collapse, self-loops drop."""
    edges = [(u, v) for _, u, v in _pairs(path)]
    if not edges:
        raise FormatError(path, 0, "empty graph")
    return build_graph(edges)


def _format_lines(rows) -> str:
    return "".join(f"{a} {b}\n" for a, b in rows)


def write_edge_list(path: str | os.PathLike, g: Graph) -> None:
    """Write edges as ``u v`` over original names, sorted, ``u`` < ``v``."""
    rows = []
    for u, v in g.edges():
        a, b = sorted((g.names[u], g.names[v]), key=name_sort_key)
        rows.append((a, b))
    rows.sort(key=lambda r: (name_sort_key(r[0]), name_sort_key(r[1])))
    Path(path).write_text(_format_lines(rows), encoding="utf-8")


def write_partition(path: str | os.PathLike, g: Graph, p: Partition) -> None:
    """One ``node community`` line per node, sorted by node name.

    Communities are numbered 0.. in order of first appearance in that
    listing, so the bytes depend only on names and grouping.
    """
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} nodes, graph has {g.n}")
    order = sorted(range(g.n), key=lambda i: name_sort_key(g.names[i]))
    number: dict = {}
    rows = [(g.names[i], number.setdefault(int(p.labels[i]), len(number))) for i in order]
    Path(path).write_text(_format_lines(rows), encoding="utf-8")


def _assignment(path, g: Graph) -> Partition:
    comm = [None] * g.n
    for lineno, node, c in _pairs(path):
        try:
            i = g.index_of(node)
        except KeyError:
            raise FormatError(path, lineno, f"node {node!r} is not in the graph") from None
        if comm[i] is not None and comm[i] != c:
            raise FormatError(path, lineno, f"node {node!r} assigned twice")
        comm[i] = c
    missing = [g.names[i] for i, c in enumerate(comm) if c is None]
    if missing:
        raise FormatError(path, 0, f"{len(missing)} node(s) without a community, e.g. {missing[0]!r}")
    return Partition.from_assignment(comm)


def read_partition(path: str | os.PathLike, g: Graph) -> Partition:
    """Read a community file against ``g``'s node names."""
    return _assignment(path, g)


def read_lfr(network_path: str | os.PathLike, community_path: str | os.PathLike) -> tuple[Graph, Partition]:
    """Read an LFR ``network.dat`` / ``community.dat`` pair (ids kept as in the files)."""
    g = read_edge_list(network_path)
    return g, _assignment(community_path, g)
