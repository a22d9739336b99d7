import random

import numpy as np
import pytest

import oracles as bf
from twinnet.centrality import (
    CentralityResult,
    centrality,
    closeness_centrality,
    eigenvector_centrality,
    rank_nodes,
)
from twinnet.network import InteractionGraph, build_network


def G(*pairs):
    return InteractionGraph("mention", {(u, v): 1 for u, v in pairs})


def test_star_center_degree():
    g = G(*[("c", f"l{i}") for i in range(4)])
    values = centrality(g, "degree").values
    assert values["c"] == 1.0
    assert values["l0"] == pytest.approx(0.25)


def test_path_betweenness():
    values = centrality(G(("a", "b"), ("b", "c")), "betweenness").values
    # one of the (n-1)(n-2) = 2 ordered pairs routes through b
    assert values == {"a": 0.0, "b": 0.5, "c": 0.0}


def test_cycle_eigenvector_equal():
    r = centrality(G(*[(f"n{i}", f"n{(i + 1) % 7}") for i in range(7)]), "eigenvector")
    assert r.converged
    assert np.allclose(list(r.values.values()), 1.0)


def test_eigenvector_is_eigenvector(small_synth):
    g = build_network(small_synth, "reply")
    values, converged, _ = eigenvector_centrality(g)
    assert converged
    x = np.array([values[v] for v in g.nodes])
    ax = g.undirected(weighted=True) @ x
    lam = ax @ x / (x @ x)
    # only the component carrying the dominant eigenvalue has mass
    assert np.abs(ax - lam * x).max() < 1e-6 * lam


def test_eigenvector_non_convergence_reported():
    g = G(("a", "b"), ("b", "c"), ("c", "d"))
    values, converged, iterations = eigenvector_centrality(g, max_iter=2)
    assert not converged and iterations == 2
    assert set(values) == set(g.nodes)


def test_closeness_harmonic_path():
    values = closeness_centrality(G(("a", "b"), ("b", "c")))
    assert values == pytest.approx({"a": 0.0, "b": 0.5, "c": 0.75})


def test_classic_closeness():
    cyc = G(("a", "b"), ("b", "c"), ("c", "a"))
    assert closeness_centrality(cyc, "classic") == pytest.approx({"a": 2 / 3, "b": 2 / 3, "c": 2 / 3})
    with pytest.raises(ValueError):
        closeness_centrality(G(("a", "b")), "classic")
    with pytest.raises(ValueError):
        centrality(cyc, "pagerank")


def test_oracles_on_random_digraphs():
    rng = random.Random(21)
    for _ in range(80):
        g = bf.random_digraph(rng, 7)
        for name, oracle in [
            ("degree", bf.bf_degree),
            ("betweenness", bf.bf_betweenness),
            ("closeness", bf.bf_harmonic_closeness),
        ]:
            got = centrality(g, name).values
            want = oracle(g)
            assert got.keys() == want.keys()
            for v in want:
                assert got[v] == pytest.approx(want[v], abs=1e-12), (name, v)
                assert 0.0 <= got[v] <= 1.0


def test_matches_networkx(small_synth):
    nx = pytest.importorskip("networkx")
    g = build_network(small_synth, "reply")
    h = nx.DiGraph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from(g.edges)
    bc = nx.betweenness_centrality(h, normalized=False)
    n = g.n_nodes
    ours = centrality(g, "betweenness").values
    for v in g.nodes:
        assert ours[v] == pytest.approx(bc[v] / ((n - 1) * (n - 2)), abs=1e-12)
    hc = nx.harmonic_centrality(h)
    ours = centrality(g, "closeness").values
    for v in g.nodes:
        assert ours[v] == pytest.approx(hc[v] / (n - 1), abs=1e-12)


def test_rank_tie_break():
    r = CentralityResult("degree", {"c": 0.5, "b": 0.5, "a": 0.9})
    assert rank_nodes(r).entries == ("a", "b", "c")
    assert rank_nodes(CentralityResult("degree", {"z": 1, "y": 1, "x": 1})).entries == ("x", "y", "z")
    assert rank_nodes(CentralityResult("degree", {})).entries == ()


def test_rank_affine_invariant():
    rng = random.Random(2)
    values = {f"n{i}": rng.choice([0.1, 0.2, 0.3, rng.random()]) for i in range(200)}
    base = rank_nodes(CentralityResult("x", values)).entries
    scaled = rank_nodes(CentralityResult("x", {k: 4 * v + 2 for k, v in values.items()})).entries
    assert scaled == base


def test_ranked_list_csv():
    rl = rank_nodes(CentralityResult("degree", {"a": 0.5, "b": 1.0}))
    assert rl.rank("a") == 2
    assert rl.to_csv() == "node,value,rank\nb,1.0,1\na,0.5,2\n"
