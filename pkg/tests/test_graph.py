import numpy as np
import pytest
from hypothesis import given, strategies as st

from rolpa.graph import (GraphError, Partition, build_graph, connected_components, largest_component,
                         singleton_partition, subgraph)
from rolpa.io import read_edge_list
from rolpa.datasets import karate_path


edge_lists = st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=1, max_size=60)


def test_path_graph():
    g = build_graph([("a", "b"), ("b", "c")])
    assert (g.n, g.m) == (3, 2)
    assert g.degree(g.index_of("b")) == 2


def test_loops_and_duplicates_dropped_and_counted():
    g = build_graph([("a", "a"), ("a", "b"), ("a", "b")])
    assert (g.n, g.m) == (2, 1)
    assert g.loops_dropped == 1 and g.duplicates_dropped == 1


def test_reversed_duplicate_collapses():
    g = build_graph([(1, 2), (2, 1)])
    assert g.m == 1 and g.duplicates_dropped == 1


def test_empty_edge_list_rejected():
    with pytest.raises(GraphError, match="empty graph"):
        build_graph([])


def test_karate_size():
    g = read_edge_list(karate_path())
    assert (g.n, g.m) == (34, 78)


@given(edge_lists)
def test_structural_invariants(edges):
    g = build_graph(edges)
    assert g.degrees.sum() == 2 * g.m
    for i in range(g.n):
        nb = g.neighbors(i)
        assert np.all(np.diff(nb) > 0), "neighbour lists sorted and duplicate free"
        assert i not in nb
        for j in nb:
            assert i in g.neighbors(j)


@given(edge_lists)
def test_edge_set_round_trip(edges):
    g = build_graph(edges)
    expected = {frozenset(e) for e in edges if e[0] != e[1]}
    assert g.named_edges() == expected


def test_largest_component_of_connected_graph_is_identity():
    g = build_graph([(1, 2), (2, 3), (3, 1), (3, 4)])
    h = largest_component(g)
    assert (h.n, h.m) == (g.n, g.m)


def test_largest_component_tie_break_smallest_id():
    g = build_graph([(10, 11), (11, 12), (12, 10), (1, 2), (2, 3), (3, 1), (20, 21)])
    h = largest_component(g)
    assert (h.n, h.m) == (3, 3)
    assert set(h.names) == {1, 2, 3}


def test_largest_component_path_beats_clique():
    path = [(i, i + 1) for i in range(9)]
    clique = [(a, b) for a in range(100, 104) for b in range(a + 1, 104)]
    h = largest_component(build_graph(path + clique))
    assert (h.n, h.m) == (10, 9)


@given(edge_lists)
def test_largest_component_is_connected(edges):
    h = largest_component(build_graph(edges))
    assert np.all(connected_components(h) == 0)


def test_subgraph_reindexes_densely():
    g = build_graph([(0, 1), (1, 2), (2, 3)])
    h = subgraph(g, np.array([1, 2, 3]))
    assert h.n == 3 and h.m == 2 and h.names == (1, 2, 3)


def test_singleton_partition():
    g = build_graph([(i, i + 1) for i in range(4)])
    assert singleton_partition(g).labels.tolist() == [0, 1, 2, 3, 4]
    assert singleton_partition(read_edge_list(karate_path())).community_count == 34


def test_partition_counts_and_members():
    p = Partition([2, 2, 0, 4, 0])
    assert p.community_count == 3
    assert p.counts.sum() == 5
    assert sorted(p.size_multiset()) == [1, 2, 2]
    assert p.members(2).tolist() == [0, 1]
    with pytest.raises(KeyError):
        p.members(3)


def test_partition_densifies_out_of_range_labels():
    p = Partition([7, 7, -1])
    assert p.labels.tolist() == [1, 1, 0]


def test_partition_canonical_and_equality():
    a = Partition([3, 3, 1, 1])
    b = Partition([0, 0, 2, 2])
    assert a.same_as(b)
    assert a.canonical().labels.tolist() == [0, 0, 1, 1]
    assert a != b


def test_partition_from_assignment_arbitrary_ids():
    p = Partition.from_assignment(["x", "y", "x"])
    assert p.community_count == 2 and p.labels[0] == p.labels[2]
