"""Node centralities and deterministic rankings."""

from __future__ import annotations

import csv
import io
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from twinnet.network import InteractionGraph

MEASURES = ("degree", "betweenness", "closeness", "eigenvector")
TIE_BREAK = "value-desc/node-id-asc"

EIGEN_TOL = 1e-9
EIGEN_MAX_ITER = 1000


@dataclass(frozen=True)
class CentralityResult:
    measure: str
    values: Mapping[str, float]
    converged: bool = True
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))


def degree_centrality(g: InteractionGraph) -> dict[str, float]:
    """Distinct neighbours (either direction) over ``n - 1``."""
    n = g.n_nodes
    if n < 2:
        return {v: 0.0 for v in g.nodes}
    deg = np.diff(g.undirected().indptr)
    return dict(zip(g.nodes, (deg / (n - 1)).tolist()))


def betweenness_centrality(g: InteractionGraph) -> dict[str, float]:
    """Directed, unweighted Brandes betweenness normalized by ``(n - 1)(n - 2)``."""
    n = g.n_nodes
    adj = g.out_neighbors()
    bc = [0.0] * n
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    scale = 1.0 / ((n - 1) * (n - 2)) if n > 2 else 0.0
    return {v: b * scale for v, b in zip(g.nodes, bc)}


def _distance_blocks(a: sp.csr_matrix, block_cells: int = 4_000_000):
    n = a.shape[0]
    step = max(1, block_cells // max(n, 1))
    for start in range(0, n, step):
        rows = np.arange(start, min(n, start + step))
        yield rows, csgraph.shortest_path(a, directed=True, unweighted=True, indices=rows)


def closeness_centrality(g: InteractionGraph, variant: str = "harmonic") -> dict[str, float]:
    """Closeness from incoming shortest-path distances ``d(u, v)``.

    ``harmonic``: ``sum(1 / d(u, v)) / (n - 1)``, well defined on disconnected
    graphs (unreachable pairs contribute 0). ``classic``: ``(n - 1) / sum(d(u, v))``,
    only for graphs where every node reaches every other.
    """
    n = g.n_nodes
    if n < 2:
        return {v: 0.0 for v in g.nodes}
    a = g.adjacency()
    if variant == "harmonic":
        total = np.zeros(n)
        for rows, dist in _distance_blocks(a):
            with np.errstate(divide="ignore"):
                inv = 1.0 / dist
            inv[np.arange(len(rows)), rows] = 0.0
            total += inv.sum(axis=0)
        return dict(zip(g.nodes, (total / (n - 1)).tolist()))
    if variant == "classic":
        total = np.zeros(n)
        for _, dist in _distance_blocks(a):
            if np.isinf(dist).any():
                raise ValueError("classic closeness needs a strongly connected graph")
            total += dist.sum(axis=0)
        return dict(zip(g.nodes, ((n - 1) / total).tolist()))
    raise ValueError(f"unknown closeness variant {variant!r}")


def eigenvector_centrality(
    g: InteractionGraph, tol: float = EIGEN_TOL, max_iter: int = EIGEN_MAX_ITER
) -> tuple[dict[str, float], bool, int]:
    """Power iteration on the weighted undirected simplification.

    Iterates ``x <- (A + I) x`` scaled to unit maximum; the identity shift has
    the same eigenvectors as ``A`` but stops bipartite graphs from oscillating.
    Returns ``(values, converged, iterations)``; on non-convergence the last
    iterate is returned.
    """
    n = g.n_nodes
    if n == 0:
        return {}, True, 0
    a = g.undirected(weighted=True)
    x = np.ones(n)
    for it in range(1, max_iter + 1):
        nxt = a @ x + x
        nxt /= nxt.max()
        if np.abs(nxt - x).max() < tol:
            return dict(zip(g.nodes, nxt.tolist())), True, it
        x = nxt
    return dict(zip(g.nodes, x.tolist())), False, max_iter


def centrality(g: InteractionGraph, measure: str, closeness_variant: str = "harmonic") -> CentralityResult:
    """Compute one centrality measure for every node of ``g``.

    Degree, betweenness and closeness ignore weights; eigenvector uses them.
    Eigenvector non-convergence is reported through ``converged`` rather
    than raised.
    """
    if measure == "degree":
        return CentralityResult(
            measure, degree_centrality(g), metadata={"weighted": False, "view": "undirected"}
        )
    if measure == "betweenness":
        return CentralityResult(
            measure,
            betweenness_centrality(g),
            metadata={"weighted": False, "view": "directed", "normalized": True},
        )
    if measure == "closeness":
        return CentralityResult(
            measure,
            closeness_centrality(g, closeness_variant),
            metadata={"weighted": False, "view": "directed-incoming", "variant": closeness_variant},
        )
    if measure == "eigenvector":
        values, converged, iterations = eigenvector_centrality(g)
        return CentralityResult(
            measure,
            values,
            converged,
            metadata={
                "weighted": True,
                "view": "undirected",
                "tolerance": EIGEN_TOL,
                "max_iter": EIGEN_MAX_ITER,
                "iterations": iterations,
            },
        )
    raise ValueError(f"unknown centrality measure {measure!r}")


@dataclass(frozen=True)
class RankedList:
    """Nodes ordered by decreasing centrality; ``entries[0]`` has rank 1."""

    measure: str
    entries: tuple[str, ...]
    values: Mapping[str, float] = field(default_factory=dict)
    tie_break: str = TIE_BREAK

    def __len__(self) -> int:
        return len(self.entries)

    def rank(self, node: str) -> int:
        return self.entries.index(node) + 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "value", "rank"])
        for r, node in enumerate(self.entries, start=1):
            value = self.values.get(node)
            w.writerow([node, "" if value is None else repr(value), r])
        return buf.getvalue()


def rank_nodes(r: CentralityResult) -> RankedList:
    """Order by value descending; exact ties go to the smaller node id."""
    order = sorted(r.values, key=lambda v: (-r.values[v], v))
    return RankedList(r.measure, tuple(order), dict(r.values))
