"""Partition comparison: common-node restriction, Rand and Adjusted Rand indices."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass

from twinnet.louvain import Partition, louvain
from twinnet.network import InteractionGraph

MODES = ("restrict", "induced")


def _pairs(x: int) -> int:
    return x * (x - 1) // 2


@dataclass(frozen=True)
class PartitionComparison:
    """Pair-counting agreement between two partitions of the same ``n`` nodes.

    ``same_both`` (a) counts pairs co-clustered in both partitions,
    ``split_both`` (b) pairs separated in both, ``total_pairs`` (c) is
    ``n (n - 1) / 2``. ``rand_index`` and ``ari`` are ``None`` for ``n < 2``.
    """

    n: int
    same_both: int
    split_both: int
    total_pairs: int
    rand_index: float | None
    ari: float | None
    edge_count_a: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def restrict_partition(p: Partition, nodes) -> Partition:
    """Keep only the assignments of ``nodes``; emptied clusters disappear."""
    keep = set(nodes)
    return Partition({v: c for v, c in p.blocks.items() if v in keep}, p.seed)


def adjusted_rand_index(
    p1: Partition, p2: Partition, edge_count_a: int | None = None
) -> PartitionComparison:
    """Rand index and Hubert-Arabie ARI from the contingency table.

    Both partitions must cover the same node set. When the chance-corrected
    denominator vanishes (both partitions all-singletons, or both one block)
    the partitions are identical and the ARI is 1.
    """
    if p1.blocks.keys() != p2.blocks.keys():
        raise ValueError("partitions must cover the same node set; restrict them first")
    n = len(p1)
    table = Counter((p1.blocks[v], p2.blocks[v]) for v in p1.blocks)
    sum_ij = sum(_pairs(x) for x in table.values())
    sum_a = sum(_pairs(x) for x in Counter(p1.blocks.values()).values())
    sum_b = sum(_pairs(x) for x in Counter(p2.blocks.values()).values())
    total = _pairs(n)
    same_both = sum_ij
    split_both = total - sum_a - sum_b + sum_ij
    if n < 2:
        return PartitionComparison(n, same_both, split_both, total, None, None, edge_count_a)
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        ari = 1.0
    else:
        ari = (sum_ij - expected) / (max_index - expected)
    rand = (same_both + split_both) / total
    return PartitionComparison(n, same_both, split_both, total, rand, ari, edge_count_a)


def top_cluster_sizes(p: Partition, count: int = 20) -> list[int]:
    return sorted(p.sizes(), reverse=True)[:count]


def compare_clusters(
    g_a: InteractionGraph,
    g_b: InteractionGraph,
    seed: int = 0,
    resolution: float = 1.0,
    mode: str = "restrict",
    partitions: tuple[Partition, Partition] | None = None,
) -> tuple[PartitionComparison, Partition, Partition]:
    """Cluster both networks and compare memberships on their common nodes.

    ``restrict`` (default) runs Louvain on each full network and restricts the
    partitions to the shared nodes. ``induced`` runs Louvain on the subgraphs
    induced by the shared nodes; nodes left isolated there become singletons.
    Returns the comparison and the two full-network (or induced) partitions.
    """
    common = set(g_a.nodes) & set(g_b.nodes)
    if mode == "restrict":
        if partitions is None:
            partitions = (
                louvain(g_a, seed=seed, resolution=resolution),
                louvain(g_b, seed=seed, resolution=resolution),
            )
        pa, pb = partitions
    elif mode == "induced":
        pa = _with_singletons(louvain(g_a.subgraph(common), seed, resolution), common)
        pb = _with_singletons(louvain(g_b.subgraph(common), seed, resolution), common)
    else:
        raise ValueError(f"unknown cluster comparison mode {mode!r}")
    cmp = adjusted_rand_index(
        restrict_partition(pa, common), restrict_partition(pb, common), g_a.n_edges
    )
    return cmp, pa, pb


def _with_singletons(p: Partition, nodes) -> Partition:
    blocks = dict(p.blocks)
    nxt = max(blocks.values(), default=-1) + 1
    for v in sorted(set(nodes) - blocks.keys()):
        blocks[v] = nxt
        nxt += 1
    return Partition(blocks, p.seed)
