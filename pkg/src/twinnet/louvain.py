"""Seeded Louvain community detection on the undirected weighted simplification."""

from __future__ import annotations

import csv
import io
import random
from collections.abc import Mapping
from dataclasses import dataclass
from types import MappingProxyType

from twinnet.network import InteractionGraph

_EPS = 1e-12


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to a cluster id.

    Cluster ids are canonical: clusters are numbered 0, 1, ... in order of
    their smallest member id, so equal partitions compare equal regardless
    of how they were produced.
    """

    blocks: Mapping[str, int]
    seed: int | None = None

    def __post_init__(self) -> None:
        relabel: dict[int, int] = {}
        canon = {}
        for node in sorted(self.blocks):
            c = self.blocks[node]
            if c not in relabel:
                relabel[c] = len(relabel)
            canon[node] = relabel[c]
        object.__setattr__(self, "blocks", MappingProxyType(canon))

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self.blocks)

    def clusters(self) -> list[set[str]]:
        out: list[set[str]] = []
        for node, c in self.blocks.items():
            while len(out) <= c:
                out.append(set())
            out[c].add(node)
        return out

    def sizes(self) -> list[int]:
        counts: dict[int, int] = {}
        for c in self.blocks.values():
            counts[c] = counts.get(c, 0) + 1
        return [counts[c] for c in sorted(counts)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "cluster"])
        for node, c in self.blocks.items():
            w.writerow([node, c])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> Partition:
        rows = csv.DictReader(io.StringIO(text))
        return cls({r["node"]: int(r["cluster"]) for r in rows})

    @classmethod
    def from_clusters(cls, clusters, seed: int | None = None) -> Partition:
        return cls({node: i for i, block in enumerate(clusters) for node in block}, seed)


def _weighted_lists(g: InteractionGraph) -> list[dict[int, float]]:
    a = g.undirected(weighted=True)
    indptr, indices, data = a.indptr.tolist(), a.indices.tolist(), a.data.tolist()
    return [
        dict(zip(indices[indptr[i]:indptr[i + 1]], data[indptr[i]:indptr[i + 1]]))
        for i in range(a.shape[0])
    ]


def _one_level(
    adj: list[dict[int, float]], m2: float, resolution: float, rng: random.Random
) -> tuple[list[int], bool]:
    n = len(adj)
    comm = list(range(n))
    k = [sum(nb.values()) for nb in adj]
    tot = k[:]
    improved = False
    moved = True
    while moved:
        moved = False
        for i in range(n):
            ci = comm[i]
            ki = k[i]
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[ci] -= ki
            stay = links.get(ci, 0.0) - resolution * tot[ci] * ki / m2
            best = stay
            gains = {}
            for c, w in links.items():
                gain = w - resolution * tot[c] * ki / m2
                gains[c] = gain
                if gain > best:
                    best = gain
            target = ci
            if best > stay + _EPS:
                ties = sorted(c for c, gain in gains.items() if gain >= best - _EPS)
                target = ties[0] if len(ties) == 1 else rng.choice(ties)
            tot[target] += ki
            if target != ci:
                comm[i] = target
                moved = improved = True
    return comm, improved


def louvain(g: InteractionGraph, seed: int = 0, resolution: float = 1.0) -> Partition:
    """Greedy modularity maximization (local moving + aggregation).

    Nodes are visited in sorted-id order and exact gain ties are broken by a
    ``random.Random(seed)``, so the same graph and seed always give the same
    partition.
    """
    if g.n_nodes == 0:
        return Partition({}, seed)
    rng = random.Random(seed)
    adj = _weighted_lists(g)
    m2 = sum(sum(nb.values()) for nb in adj)
    membership = list(range(g.n_nodes))
    while True:
        comm, improved = _one_level(adj, m2, resolution, rng)
        if not improved:
            break
        renumber: dict[int, int] = {}
        for c in comm:
            renumber.setdefault(c, len(renumber))
        comm = [renumber[c] for c in comm]
        membership = [comm[c] for c in membership]
        agg: list[dict[int, float]] = [{} for _ in renumber]
        for i, nb in enumerate(adj):
            row = agg[comm[i]]
            for j, w in nb.items():
                cj = comm[j]
                row[cj] = row.get(cj, 0.0) + w
        adj = agg
    return Partition(dict(zip(g.nodes, membership)), seed)


def modularity(g: InteractionGraph, partition: Partition, resolution: float = 1.0) -> float:
    """Newman modularity of ``partition`` on the undirected weighted simplification."""
    if g.n_nodes == 0:
        return 0.0
    a = g.undirected(weighted=True).tocoo()
    m2 = float(a.data.sum())
    label = [partition.blocks[v] for v in g.nodes]
    internal = 0.0
    tot: dict[int, float] = {}
    for i, j, w in zip(a.row.tolist(), a.col.tolist(), a.data.tolist()):
        if label[i] == label[j]:
            internal += w
        tot[label[i]] = tot.get(label[i], 0.0) + w
    return internal / m2 - resolution * sum(t * t for t in tot.values()) / (m2 * m2)
