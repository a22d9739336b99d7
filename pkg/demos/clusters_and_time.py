"""
Cluster agreement and hour-by-hour similarity
=============================================

"""

from twinnet import build_network, compare_clusters, longitudinal_compare
from twinnet.clusters import top_cluster_sizes
from twinnet.synth import DEFAULT_START, drop_windows, generate_dataset

a = generate_dataset(12_000, label="A", seed=8)

# the second collection loses one hour in the middle of the day
b = drop_windows(a, [(DEFAULT_START + 12 * 3600, DEFAULT_START + 13 * 3600)], label="B")

cmp, pa, pb = compare_clusters(build_network(a, "mention"), build_network(b, "mention"), seed=0)
print(f"common nodes {cmp.n}, Rand {cmp.rand_index:.3f}, ARI {cmp.ari:.3f}")
print("largest clusters", top_cluster_sizes(pa, 5), top_cluster_sizes(pb, 5))

# per bucket the missing hour shows as compared=0
hourly = longitudinal_compare(a, b, "mention", "degree", width=3600)
for row in hourly.rows[10:15]:
    print(row.bucket_index, row.compared, row.tau)

# over growing prefixes the loss persists after the gap
cumulative = longitudinal_compare(a, b, "mention", "degree", width=3600, cumulative=True)
print([None if r.tau is None else round(r.tau, 3) for r in cumulative.rows])
