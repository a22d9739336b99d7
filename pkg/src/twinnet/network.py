"""Weighted directed interaction networks of accounts.

Three kinds are built from a dataset:

* ``mention``: an edge ``u -> v`` for every mention of ``v`` in a post by ``u``
  (repeated mentions in one post count separately, retweets included);
* ``reply``: an edge ``u -> v`` for every reply by ``u`` to a post by ``v``;
* ``retweet``: an edge ``u -> v`` for every retweet by ``u`` of a post by ``v``.

Edge weight is the number of such interactions. Self-interactions are dropped.
Accounts are keyed by author id.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Any

import numpy as np
import scipy.sparse as sp

from twinnet.ingest import Dataset

KINDS = ("mention", "reply", "retweet")


@dataclass(frozen=True)
class InteractionGraph:
    """Simple weighted digraph. ``nodes`` is sorted and holds exactly the edge endpoints."""

    kind: str
    edges: Mapping[tuple[str, str], int]
    skipped: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown network kind {self.kind!r}")
        clean = {}
        for (u, v), w in self.edges.items():
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if int(w) != w or w < 1:
                raise ValueError(f"edge weight must be a positive integer, got {w!r}")
            clean[(u, v)] = int(w)
        object.__setattr__(self, "edges", MappingProxyType(dict(sorted(clean.items()))))
        object.__setattr__(self, "skipped", MappingProxyType(dict(self.skipped)))

    @cached_property
    def nodes(self) -> tuple[str, ...]:
        seen = set()
        for u, v in self.edges:
            seen.add(u)
            seen.add(v)
        return tuple(sorted(seen))

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def weight(self, u: str, v: str) -> int:
        return self.edges.get((u, v), 0)

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        idx = self.index
        m = len(self.edges)
        src = np.fromiter((idx[u] for u, _ in self.edges), dtype=np.int64, count=m)
        dst = np.fromiter((idx[v] for _, v in self.edges), dtype=np.int64, count=m)
        w = np.fromiter(self.edges.values(), dtype=np.float64, count=m)
        return src, dst, w

    def adjacency(self, weighted: bool = False) -> sp.csr_matrix:
        """Directed adjacency in node-index order (row = source)."""
        src, dst, w = self._arrays
        n = self.n_nodes
        data = w if weighted else np.ones_like(w)
        return sp.csr_matrix((data, (src, dst)), shape=(n, n))

    def undirected(self, weighted: bool = False) -> sp.csr_matrix:
        """Symmetric adjacency of the undirected simplification.

        Weighted: ``w(u, v) + w(v, u)``. Unweighted: 1 where either direction exists.
        """
        a = self.adjacency(weighted)
        s = (a + a.T).tocsr()
        if not weighted:
            s.data[:] = 1.0
        s.sort_indices()
        return s

    def out_neighbors(self) -> list[list[int]]:
        src, dst, _ = self._arrays
        adj: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for s, d in zip(src.tolist(), dst.tolist()):
            adj[s].append(d)
        return adj

    def subgraph(self, nodes: Iterable[str]) -> InteractionGraph:
        keep = set(nodes)
        return InteractionGraph(
            self.kind, {e: w for e, w in self.edges.items() if e[0] in keep and e[1] in keep}
        )

    def to_edge_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "target", "weight"])
        for (u, v), wt in self.edges.items():
            w.writerow([u, v, wt])
        return buf.getvalue()

    @classmethod
    def from_edge_csv(cls, text: str, kind: str) -> InteractionGraph:
        rows = csv.DictReader(io.StringIO(text))
        return cls(kind, {(r["source"], r["target"]): int(r["weight"]) for r in rows})

    def to_json(self) -> str:
        adjacency: dict[str, dict[str, int]] = {}
        for (u, v), w in self.edges.items():
            adjacency.setdefault(u, {})[v] = w
        return json.dumps(
            {"kind": self.kind, "directed": True, "adjacency": adjacency}, sort_keys=True
        )

    @classmethod
    def from_json(cls, text: str) -> InteractionGraph:
        data = json.loads(text)
        edges = {
            (u, v): w for u, targets in data["adjacency"].items() for v, w in targets.items()
        }
        return cls(data["kind"], edges)


def interaction_counts(d: Dataset, kind: str) -> tuple[Counter, dict[str, int]]:
    """Fold the dataset into ``(source, target) -> count`` plus skip diagnostics."""
    if kind not in KINDS:
        raise ValueError(f"unknown network kind {kind!r}")
    counts: Counter = Counter()
    self_loops = missing = 0
    for t in d:
        u = t.author_id
        if kind == "mention":
            targets = [uid for uid, _ in t.mentions]
        elif kind == "reply":
            if t.in_reply_to_tweet_id is None:
                continue
            if t.in_reply_to_author_id is None:
                missing += 1
                continue
            targets = [t.in_reply_to_author_id]
        else:
            if t.retweeted_tweet_id is None:
                continue
            if t.retweeted_author_id is None:
                missing += 1
                continue
            targets = [t.retweeted_author_id]
        for v in targets:
            if v == u:
                self_loops += 1
            else:
                counts[(u, v)] += 1
    return counts, {"self_loops": self_loops, "missing_target": missing}


def build_network(d: Dataset, kind: str) -> InteractionGraph:
    counts, skipped = interaction_counts(d, kind)
    return InteractionGraph(kind, counts, skipped)


def merge_graphs(graphs: Iterable[InteractionGraph]) -> InteractionGraph:
    """Sum edge weights of partial graphs of the same kind (associative, order-free)."""
    graphs = list(graphs)
    kinds = {g.kind for g in graphs}
    if len(kinds) != 1:
        raise ValueError(f"cannot merge graphs of kinds {sorted(kinds)}")
    total: Counter = Counter()
    skipped: Counter = Counter()
    for g in graphs:
        total.update(g.edges)
        skipped.update(g.skipped)
    return InteractionGraph(kinds.pop(), total, dict(skipped))


def graph_summary(g: InteractionGraph) -> dict[str, Any]:
    return {"kind": g.kind, "nodes": g.n_nodes, "edges": g.n_edges, "skipped": dict(g.skipped)}
