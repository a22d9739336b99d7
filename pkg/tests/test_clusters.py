import random

import pytest

import oracles as bf
from twinnet.clusters import (
    adjusted_rand_index,
    compare_clusters,
    restrict_partition,
    top_cluster_sizes,
)
from twinnet.louvain import Partition
from twinnet.network import build_network
from twinnet.synth import random_subset


def P(**blocks):
    return Partition(blocks)


def test_identical_partitions():
    p = P(a=0, b=0, c=1, d=2)
    r = adjusted_rand_index(p, P(a=5, b=5, c=7, d=1))
    assert r.ari == 1.0 and r.rand_index == 1.0


def test_worked_example():
    r = adjusted_rand_index(P(n1=0, n2=0, n3=1, n4=1), P(n1=0, n2=1, n3=0, n4=1))
    assert r.rand_index == pytest.approx(1 / 3)
    assert r.ari == pytest.approx(-0.5)
    assert (r.same_both, r.split_both, r.total_pairs) == (0, 2, 6)


def test_degenerate_sizes():
    assert adjusted_rand_index(P(a=0), P(a=3)).ari is None
    assert adjusted_rand_index(P(), P()).rand_index is None
    assert adjusted_rand_index(P(a=0, b=1), P(a=0, b=1)).ari == 1.0


def test_node_mismatch():
    with pytest.raises(ValueError):
        adjusted_rand_index(P(a=0, b=0), P(a=0, c=0))


def test_restrict():
    p = P(a=1, b=1, c=2, d=2)
    assert restrict_partition(p, "abcd") == p
    assert len(restrict_partition(p, [])) == 0
    r = restrict_partition(p, {"a", "c"})
    assert r.clusters() == [{"a"}, {"c"}]
    assert dict(r.blocks) != dict(P(a=0, c=0).blocks)


def test_top_sizes():
    p = Partition.from_clusters([set("abcde"), set("fg"), set("hijklmnop")])
    assert top_cluster_sizes(p) == [9, 5, 2]
    assert top_cluster_sizes(P()) == []
    singles = Partition.from_clusters([{f"n{i}"} for i in range(25)])
    assert top_cluster_sizes(singles, 20) == [1] * 20


def random_labels(rng, nodes, k):
    return {v: rng.randrange(k) for v in nodes}


def test_matches_pair_counting_oracle():
    rng = random.Random(3)
    for _ in range(300):
        nodes = [f"n{i}" for i in range(rng.randint(2, 12))]
        l1 = random_labels(rng, nodes, rng.randint(1, 5))
        l2 = random_labels(rng, nodes, rng.randint(1, 5))
        r = adjusted_rand_index(Partition(l1), Partition(l2))
        assert r.ari == pytest.approx(bf.bf_ari(l1, l2), abs=1e-12)
        assert r.rand_index == pytest.approx(bf.bf_rand(l1, l2), abs=1e-12)
        assert r.same_both + r.split_both <= r.total_pairs
        assert -1 <= r.ari <= 1


def test_symmetric_and_relabel_invariant():
    rng = random.Random(4)
    nodes = [f"n{i}" for i in range(60)]
    l1, l2 = random_labels(rng, nodes, 6), random_labels(rng, nodes, 4)
    r12 = adjusted_rand_index(Partition(l1), Partition(l2))
    r21 = adjusted_rand_index(Partition(l2), Partition(l1))
    assert r12.ari == pytest.approx(r21.ari, abs=1e-15)
    shuffled = {v: 100 - c for v, c in l1.items()}
    assert adjusted_rand_index(Partition(shuffled), Partition(l2)).ari == pytest.approx(r12.ari, abs=1e-15)


@pytest.mark.parametrize("mode", ["restrict", "induced"])
def test_compare_clusters_modes(small_synth, mode):
    ga = build_network(small_synth, "mention")
    same, pa, pb = compare_clusters(ga, ga, seed=1, mode=mode)
    assert same.ari == 1.0 and same.rand_index == 1.0
    assert same.edge_count_a == ga.n_edges
    gb = build_network(random_subset(small_synth, 0.8, seed=5), "mention")
    cmp, _, _ = compare_clusters(ga, gb, seed=1, mode=mode)
    assert cmp.n == len(set(ga.nodes) & set(gb.nodes))
    assert -1 <= cmp.ari <= 1


def test_compare_clusters_bad_mode(small_synth):
    g = build_network(small_synth, "reply")
    with pytest.raises(ValueError):
        compare_clusters(g, g, mode="merge")
