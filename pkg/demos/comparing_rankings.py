"""
Comparing centrality rankings of two collections
================================================

"""

from twinnet import build_network, centrality, common_top_k, rank_nodes, similarity
from twinnet.rankcompare import neighborhood_rank_score, points_svg, scatter_data
from twinnet.synth import generate_dataset, random_subset

full = generate_dataset(10_000, label="full", seed=5)
partial = random_subset(full, 0.6, seed=6, label="partial")

ga = build_network(full, "reply")
gb = build_network(partial, "reply")

for measure in ("degree", "betweenness", "closeness", "eigenvector"):
    ra, rb = centrality(ga, measure), centrality(gb, measure)
    common = common_top_k(rank_nodes(ra), rank_nodes(rb), k=500)
    s = similarity(common)
    print(f"{measure:12s} m={s.n_compared:4d} tau={s.tau:.3f} rho={s.rho:.3f} converged={ra.converged and rb.converged}")

# a rank-rank scatter and the neighbourhood score for degree
common = common_top_k(rank_nodes(centrality(ga, "degree")), rank_nodes(centrality(gb, "degree")), k=500)
points = scatter_data(common)
hood = neighborhood_rank_score(common)

# the score never exceeds the baseline, and its sum is the concordant pair count
print(all(p.y <= p.x for p in hood), sum(p.y for p in hood))

svg = points_svg(points, "degree rank: full vs partial")
print(len(svg), "bytes of SVG")
