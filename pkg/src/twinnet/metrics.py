"""Network-level statistics for interaction graphs.

Conventions:

* ``average_degree`` is ``|E| / |V|``;
* ``density`` is ``|E| / (|V| (|V| - 1))`` on the simple digraph;
* components are weakly connected; the diameter is measured in unweighted
  hops on the undirected view of the largest component;
* transitivity and k-cores use the undirected simplification.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from twinnet.louvain import Partition, louvain
from twinnet.network import InteractionGraph


def density(g: InteractionGraph) -> float:
    n = g.n_nodes
    return g.n_edges / (n * (n - 1)) if n > 1 else 0.0


def reciprocity(g: InteractionGraph) -> float:
    """Fraction of edges whose reverse edge is also present."""
    if not g.edges:
        return 0.0
    mutual = sum(1 for u, v in g.edges if (v, u) in g.edges)
    return mutual / g.n_edges


def transitivity(g: InteractionGraph) -> float:
    """Global clustering coefficient ``3 * triangles / connected triplets``."""
    if g.n_nodes < 3:
        return 0.0
    a = g.undirected()
    deg = np.asarray(a.sum(axis=1)).ravel()
    triplets = float((deg * (deg - 1)).sum()) / 2
    if triplets == 0:
        return 0.0
    # orient every edge toward the higher-degree end so L @ L stays small around hubs
    order = np.lexsort((np.arange(g.n_nodes), deg))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    coo = a.tocoo()
    keep = rank[coo.row] < rank[coo.col]
    low = sp.csr_matrix(
        (np.ones(int(keep.sum())), (rank[coo.row[keep]], rank[coo.col[keep]])), shape=a.shape
    )
    triangles = float((low @ low).multiply(low).sum())
    return 3 * triangles / triplets


def weak_components(g: InteractionGraph) -> list[set[str]]:
    """Weakly connected components, largest first (ties by smallest node id)."""
    if g.n_nodes == 0:
        return []
    _, labels = csgraph.connected_components(g.adjacency(), directed=True, connection="weak")
    comps: dict[int, set[str]] = {}
    for node, lab in zip(g.nodes, labels.tolist()):
        comps.setdefault(lab, set()).add(node)
    return sorted(comps.values(), key=lambda c: (-len(c), min(c)))


def diameter(g: InteractionGraph, nodes: set[str] | None = None) -> int:
    """Largest eccentricity (undirected, unweighted) within ``nodes``.

    ``nodes`` must induce a connected subgraph; it defaults to the largest
    weak component. Eccentricity bounds prune most of the BFS sweeps on
    real networks; the result is exact.
    """
    if nodes is None:
        comps = weak_components(g)
        if not comps:
            return 0
        nodes = comps[0]
    if len(nodes) <= 1:
        return 0
    idx = np.array(sorted(g.index[v] for v in nodes))
    a = g.undirected()[idx][:, idx]
    n = len(idx)
    lower = np.zeros(n, dtype=np.int64)
    upper = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    candidates = np.ones(n, dtype=bool)
    best = 0
    pick_high = True
    while candidates.any():
        cand = np.flatnonzero(candidates)
        if pick_high:
            v = cand[np.argmax(upper[cand])]
        else:
            v = cand[np.argmin(lower[cand])]
        pick_high = not pick_high
        dist = csgraph.shortest_path(a, directed=False, unweighted=True, indices=int(v))
        if np.isinf(dist).any():
            raise ValueError("diameter() needs a connected node set")
        dist = dist.astype(np.int64)
        ecc = int(dist.max())
        best = max(best, ecc)
        lower = np.maximum(lower, np.maximum(dist, ecc - dist))
        upper = np.minimum(upper, ecc + dist)
        candidates[v] = False
        candidates &= upper > best
    return best


def core_numbers(g: InteractionGraph) -> dict[str, int]:
    """Core number of every node on the undirected simplification (bucket peeling)."""
    n = g.n_nodes
    if n == 0:
        return {}
    a = g.undirected()
    indptr, indices = a.indptr, a.indices
    deg = np.diff(indptr).astype(np.int64)
    max_deg = int(deg.max())
    # bin sort of nodes by degree
    counts = np.bincount(deg, minlength=max_deg + 1)
    bin_start = np.concatenate(([0], np.cumsum(counts)[:-1])).tolist()
    order = np.argsort(deg, kind="stable").tolist()
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    deg = deg.tolist()
    indptr = indptr.tolist()
    indices = indices.tolist()
    for i in range(n):
        v = order[i]
        for u in indices[indptr[v]:indptr[v + 1]]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = order[pw]
                if u != w:
                    order[pu], order[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bin_start[du] += 1
                deg[u] -= 1
    return dict(zip(g.nodes, deg))


def max_k_core(g: InteractionGraph) -> int:
    cores = core_numbers(g)
    return max(cores.values()) if cores else 0


@dataclass(frozen=True)
class NetworkStats:
    nodes: int
    edges: int
    average_degree: float
    density: float
    mean_edge_weight: float
    component_count: int
    largest_component_size: int
    largest_component_diameter: int
    cluster_count: int
    largest_cluster_size: int
    reciprocity: float
    transitivity: float
    max_k_core: int

    ROWS = (
        ("Nodes", "nodes"),
        ("Edges", "edges"),
        ("Average degree", "average_degree"),
        ("Density", "density"),
        ("Mean edge weight", "mean_edge_weight"),
        ("Components", "component_count"),
        ("Largest component", "largest_component_size"),
        ("- Diameter", "largest_component_diameter"),
        ("Clusters", "cluster_count"),
        ("Largest cluster", "largest_cluster_size"),
        ("Reciprocity", "reciprocity"),
        ("Transitivity", "transitivity"),
        ("Maximum k-core", "max_k_core"),
    )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", "value"])
        for label, name in self.ROWS:
            w.writerow([label, getattr(self, name)])
        return buf.getvalue()


def network_stats(
    g: InteractionGraph,
    seed: int = 0,
    resolution: float = 1.0,
    partition: Partition | None = None,
) -> NetworkStats:
    """Compute every network statistic. Louvain runs with ``seed`` unless ``partition`` is given."""
    n, m = g.n_nodes, g.n_edges
    if n == 0:
        return NetworkStats(0, 0, 0.0, 0.0, 0.0, 0, 0, 0, 0, 0, 0.0, 0.0, 0)
    comps = weak_components(g)
    if partition is None:
        partition = louvain(g, seed=seed, resolution=resolution)
    sizes = partition.sizes()
    return NetworkStats(
        nodes=n,
        edges=m,
        average_degree=m / n,
        density=density(g),
        mean_edge_weight=g.total_weight / m,
        component_count=len(comps),
        largest_component_size=len(comps[0]),
        largest_component_diameter=diameter(g, comps[0]),
        cluster_count=len(sizes),
        largest_cluster_size=max(sizes),
        reciprocity=reciprocity(g),
        transitivity=transitivity(g),
        max_k_core=max_k_core(g),
    )
