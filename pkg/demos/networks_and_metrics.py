"""
Interaction networks and their statistics
=========================================

"""

from twinnet import build_network, network_stats
from twinnet.metrics import core_numbers, weak_components
from twinnet.synth import generate_dataset

d = generate_dataset(20_000, label="A", seed=3)

# one directed, weighted graph per interaction kind
graphs = {kind: build_network(d, kind) for kind in ("mention", "reply", "retweet")}
for kind, g in graphs.items():
    print(kind, g.n_nodes, "nodes", g.n_edges, "edges", "skipped:", dict(g.skipped))

# every retweet carries a mention of the original author,
# so the retweet graph sits inside the mention graph
rt, men = graphs["retweet"], graphs["mention"]
print(all(men.edges.get(e, 0) >= w for e, w in rt.edges.items()))

# the summary table: components, diameter, Louvain clusters, k-core ...
stats = network_stats(graphs["reply"], seed=0)
print(stats.to_csv())

comps = weak_components(graphs["reply"])
print("component sizes", [len(c) for c in comps[:5]])
cores = core_numbers(graphs["mention"])
print("deepest core members", sorted(v for v, k in cores.items() if k == max(cores.values()))[:10])

# edges round-trip through CSV
text = graphs["reply"].to_edge_csv()
print(text.splitlines()[:3])
