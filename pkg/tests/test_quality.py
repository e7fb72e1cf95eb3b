import numpy as np
import pytest
from hypothesis import given, strategies as st

from _util import entropy_nmi, naive_modularity, random_graph
from rolpa.datasets import load_karate
from rolpa.graph import Partition, singleton_partition
from rolpa.quality import ConfusionTable, modularity, nmi, random_partition_like, rnmi, rrnmi

labelings = st.integers(1, 30).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 5), min_size=n, max_size=n),
                        st.lists(st.integers(0, 5), min_size=n, max_size=n)))


def test_modularity_single_community_is_zero():
    g = load_karate()
    assert modularity(g, Partition([0] * g.n)) == pytest.approx(0.0, abs=1e-15)


def test_modularity_singletons():
    g = load_karate()
    d = g.degrees
    assert modularity(g, singleton_partition(g)) == pytest.approx(-np.sum((d / (2 * g.m)) ** 2))


@given(st.integers(0, 100_000), st.integers(2, 8))
def test_modularity_matches_double_sum(seed, n):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, 0.4)
    labels = rng.integers(0, n, n)
    q = modularity(g, Partition(labels))
    assert abs(q - naive_modularity(g, labels)) <= 1e-12
    assert -1 <= q <= 1


def test_modularity_size_mismatch():
    with pytest.raises(ValueError):
        modularity(load_karate(), Partition([0, 1]))


def test_confusion_table_marginals():
    a, b = Partition([0, 0, 1, 1, 2]), Partition([0, 1, 1, 1, 1])
    t = ConfusionTable.build(a, b)
    assert t.cells.sum() == 5
    assert np.array_equal(np.bincount(t.cell_rows, weights=t.cells), t.row_sizes)
    assert np.array_equal(np.bincount(t.cell_cols, weights=t.cells), t.col_sizes)


def test_nmi_identity_and_halves_vs_whole():
    a = Partition([0, 0, 1, 1, 2, 2, 2])
    assert nmi(a, a) == 1.0
    assert nmi(Partition([0, 0, 1, 1]), Partition([0, 0, 0, 0])) == 0.0


def test_nmi_degenerate_cases():
    one = Partition([0] * 5)
    assert nmi(one, one) == 1.0
    singles = Partition(range(5))
    assert nmi(singles, singles) == 1.0
    assert nmi(one, singles) == 0.0


def test_nmi_size_mismatch():
    with pytest.raises(ValueError):
        nmi(Partition([0, 1]), Partition([0, 1, 1]))


@given(labelings)
def test_nmi_matches_entropy_oracle_and_is_symmetric(pair):
    a, b = pair
    pa, pb = Partition(a), Partition(b)
    v = nmi(pa, pb)
    assert 0.0 <= v <= 1.0
    assert abs(v - nmi(pb, pa)) <= 1e-12
    if not (pa.community_count == 1) ^ (pb.community_count == 1):
        assert v == pytest.approx(min(1.0, max(0.0, entropy_nmi(a, b))), abs=1e-12)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=40), st.integers(0, 2**32))
def test_random_partition_like_preserves_sizes(labels, seed):
    b = Partition(labels)
    c = random_partition_like(b, seed)
    assert c.size_multiset() == b.size_multiset()


def test_random_partition_like_trivial_shapes():
    one = Partition([0] * 6)
    assert random_partition_like(one, 1).community_count == 1
    assert random_partition_like(Partition(range(6)), 1).community_count == 6


def test_rnmi_self_positive_and_deterministic():
    a = Partition(np.repeat(np.arange(4), 8))
    v = rnmi(a, a, 100, seed=3)
    assert v > 0 and v == pytest.approx(1.0 - (nmi(a, a) - v))
    assert rnmi(a, a, 1, seed=5) == rnmi(a, a, 1, seed=5)


def test_rnmi_requires_samples():
    a = Partition([0, 0, 1, 1])
    with pytest.raises(ValueError):
        rnmi(a, a, 0)


@given(st.lists(st.integers(0, 4), min_size=4, max_size=40), st.integers(0, 2**32))
def test_rrnmi_identity_is_exactly_one(labels, seed):
    a = Partition(labels)
    if a.community_count in (1, a.n):
        return
    assert rrnmi(a, a, 20, seed=seed) == 1.0


def test_rrnmi_degenerate_truth():
    with pytest.raises(ValueError, match="degenerate ground truth"):
        rrnmi(Partition([0] * 8), Partition([0, 0, 1, 1, 2, 2, 3, 3]), 10, seed=0)


def test_rrnmi_single_community_candidate_not_better_than_random():
    a = Partition(np.repeat(np.arange(4), 8))
    assert rrnmi(a, Partition([0] * 32), 100, seed=1) <= 0.0


def test_rrnmi_seeded_repeat():
    a = Partition(np.repeat(np.arange(4), 8))
    b = Partition(np.repeat(np.arange(8), 4))
    assert rrnmi(a, b, 50, seed=7) == rrnmi(a, b, 50, seed=7)
    assert rrnmi(a, b, 50, seed=np.random.default_rng(2)) == rrnmi(a, b, 50, seed=np.random.default_rng(2))


def test_rnmi_of_random_partition_near_zero():
    rng = np.random.default_rng(0)
    a = Partition(np.repeat(np.arange(4), 16))
    vals = np.array([rnmi(a, random_partition_like(a, rng), 100, seed=rng) for _ in range(100)])
    sigma = vals.std(ddof=1) / np.sqrt(len(vals))
    assert abs(vals.mean()) < 3 * sigma + 1e-12
