"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (also repeated in
the terminal summary) before asserting. Run with ``pytest tests/test_acceptance.py -s``.
"""

import itertools
import json
import random
import subprocess
import sys
import time

import numpy as np
import pytest

import oracles as bf
from builders import T0
from conftest import ACCEPTANCE_LINES
from twinnet.centrality import centrality
from twinnet.clusters import adjusted_rand_index
from twinnet.ingest import activity_timeline, dataset_overlap, detect_gaps, write_dataset
from twinnet.louvain import Partition
from twinnet.metrics import density, diameter, max_k_core, network_stats, reciprocity, transitivity, weak_components
from twinnet.network import KINDS, InteractionGraph, build_network
from twinnet.rankcompare import CommonRanking, concordant_pairs, kendall_tau, neighborhood_rank_score, spearman_rho
from twinnet.report import RunConfig, run_compare
from twinnet.stats import COUNT_FIELDS, dataset_stats
from twinnet.synth import drop_windows, generate_dataset, random_subset, steady_stream


def verdict(n: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# rank correlation helpers ------------------------------------------------------


def ranking(names, ra, rb) -> CommonRanking:
    return CommonRanking(len(names), dict(zip(names, ra)), dict(zip(names, rb)))


def sign_rows(perms: np.ndarray) -> np.ndarray:
    """Row p holds sign(p_i - p_j) for every i < j."""
    i, j = np.triu_indices(perms.shape[1], 1)
    return np.sign(perms[:, i] - perms[:, j]).astype(np.int64)


def bf_tau_matrix(pa: np.ndarray, pb: np.ndarray) -> np.ndarray:
    """tau for every (row of pa, row of pb) by explicit pair signs."""
    pairs = pa.shape[1] * (pa.shape[1] - 1) / 2
    return (sign_rows(pa) @ sign_rows(pb).T) / pairs


def bf_rho_matrix(pa: np.ndarray, pb: np.ndarray) -> np.ndarray:
    m = pa.shape[1]
    d2 = (pa**2).sum(1)[:, None] + (pb**2).sum(1)[None, :] - 2 * pa @ pb.T
    return 1 - 6 * d2 / (m * (m * m - 1))


def bf_concordance_counts(x: np.ndarray, y: np.ndarray) -> tuple[int, int]:
    """Each unordered pair is counted once, at the ordered position where x decreases."""
    above_x = x[:, None] > x[None, :]
    above_y = y[:, None] > y[None, :]
    return int((above_x & above_y).sum()), int((above_x & ~above_y).sum())


def check_block(names, pa, pb) -> float:
    """Largest |library - oracle| over every pair drawn from the two permutation blocks."""
    want_tau, want_rho = bf_tau_matrix(pa, pb), bf_rho_matrix(pa, pb)
    worst = 0.0
    lb = [tuple(int(v) for v in row) for row in pb]
    for i, row in enumerate(pa):
        ra = dict(zip(names, (int(v) for v in row)))
        wt, wr = want_tau[i], want_rho[i]
        for j, rb in enumerate(lb):
            c = CommonRanking(len(names), ra, dict(zip(names, rb)))
            tau, rho = kendall_tau(c)[0], spearman_rho(c)[0]
            err = max(abs(tau - wt[j]), abs(rho - wr[j]))
            if err > worst:
                worst = err
    return worst


def all_perms(m: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(1, m + 1))), dtype=np.int64)


def test_1_rank_correlation_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    pairs = 0
    for m in range(2, 7):
        perms = all_perms(m)
        worst = max(worst, check_block([f"v{i}" for i in range(m)], perms, perms))
        pairs += len(perms) ** 2
    # m = 7: every second list against the identity plus random first lists;
    # by relabelling this covers all 5040 relative orders
    perms7 = all_perms(7)
    rng = np.random.default_rng(7)
    firsts = np.vstack([perms7[:1], perms7[rng.choice(len(perms7), 40, replace=False)]])
    worst = max(worst, check_block([f"v{i}" for i in range(7)], firsts, perms7))
    pairs += len(firsts) * len(perms7)

    m = 1000
    names = [f"n{i:04d}" for i in range(m)]
    ident = np.arange(1, m + 1)
    big_worst = 0.0
    for _ in range(1000):
        pa, pb = rng.permutation(ident), rng.permutation(ident)
        c = ranking(names, pa.tolist(), pb.tolist())
        conc, disc = bf_concordance_counts(pa, pb)
        want_tau = (conc - disc) / (m * (m - 1) / 2)
        want_rho = 1 - 6 * int(((pa - pb) ** 2).sum()) / (m * (m * m - 1))
        big_worst = max(big_worst, abs(kendall_tau(c)[0] - want_tau), abs(spearman_rho(c)[0] - want_rho))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and big_worst <= 1e-12 and elapsed < 30
    verdict(
        1,
        ok,
        f"{pairs} small-m pairs max err {worst:.1e}, 1000 m=1000 pairs max err {big_worst:.1e}, {elapsed:.1f}s (<30s)",
    )


@pytest.mark.slow
def test_1_every_pair_at_m7():
    """Literal enumeration of all 5040^2 ordered pairs at m = 7 (several minutes)."""
    perms = all_perms(7)
    names = [f"v{i}" for i in range(7)]
    worst = max(check_block(names, perms[i:i + 252], perms) for i in range(0, len(perms), 252))
    assert worst <= 1e-12


# partitions --------------------------------------------------------------------


def label_vectors(n):
    out = []
    for part in bf.set_partitions(range(n)):
        lab = [0] * n
        for b, block in enumerate(part):
            for v in block:
                lab[v] = b
        out.append(lab)
    return out


def bf_ari_vec(l1: np.ndarray, l2: np.ndarray) -> float:
    """Pair counting with explicit n x n co-membership matrices."""
    i, j = np.triu_indices(len(l1), 1)
    s1 = l1[i] == l1[j]
    s2 = l2[i] == l2[j]
    n11 = int((s1 & s2).sum())
    n10 = int((s1 & ~s2).sum())
    n01 = int((~s1 & s2).sum())
    n00 = int((~s1 & ~s2).sum())
    den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11)
    return 1.0 if den == 0 else 2 * (n00 * n11 - n01 * n10) / den


def test_2_ari_oracle():
    worst = 0.0
    count = 0
    for n in range(1, 7):
        names = [f"n{i}" for i in range(n)]
        labs = label_vectors(n)
        parts = [Partition(dict(zip(names, lab))) for lab in labs]
        for (la, pa), (lb, pb) in itertools.product(zip(labs, parts), repeat=2):
            got = adjusted_rand_index(pa, pb).ari
            if n < 2:
                assert got is None
                continue
            want = bf.bf_ari(dict(zip(names, la)), dict(zip(names, lb)))
            worst = max(worst, abs(got - want))
            count += 1
    rng = np.random.default_rng(2)
    names = [f"n{i}" for i in range(500)]
    big = 0.0
    for _ in range(1000):
        k1, k2 = rng.integers(1, 60, size=2)
        l1, l2 = rng.integers(0, k1, 500), rng.integers(0, k2, 500)
        got = adjusted_rand_index(Partition(dict(zip(names, l1.tolist()))), Partition(dict(zip(names, l2.tolist()))))
        big = max(big, abs(got.ari - bf_ari_vec(l1, l2)))
    ex = adjusted_rand_index(Partition({1: 0, 2: 0, 3: 1, 4: 1}), Partition({1: 0, 3: 0, 2: 1, 4: 1}))
    ok = worst <= 1e-12 and big <= 1e-12 and abs(ex.rand_index - 1 / 3) < 1e-12 and abs(ex.ari + 0.5) < 1e-12
    verdict(
        2,
        ok,
        f"{count} exhaustive pairs (n<=6) max err {worst:.1e}, 1000 n=500 pairs max err {big:.1e}, "
        f"worked example R={ex.rand_index:.6f} ARI={ex.ari:.6f}",
    )


# graph metrics -----------------------------------------------------------------


def metric_mismatches(g) -> list[str]:
    bad = []
    if abs(density(g) - bf.bf_density(g)) > 1e-12:
        bad.append("density")
    if abs(reciprocity(g) - bf.bf_reciprocity(g)) > 1e-12:
        bad.append("reciprocity")
    if abs(transitivity(g) - bf.bf_transitivity(g)) > 1e-12:
        bad.append("transitivity")
    if weak_components(g) != bf.bf_components(g):
        bad.append("components")
    if diameter(g) != bf.bf_diameter(g):
        bad.append("diameter")
    if max_k_core(g) != bf.bf_max_k_core(g):
        bad.append("max_k_core")
    for name, oracle in (("degree", bf.bf_degree), ("betweenness", bf.bf_betweenness)):
        got, want = centrality(g, name).values, oracle(g)
        if got.keys() != want.keys() or any(abs(got[v] - want[v]) > 1e-12 for v in want):
            bad.append(name)
    return bad


def sized_graph() -> InteractionGraph:
    rng = random.Random(4)
    n, m = 3234, 7855
    names = [f"a{i}" for i in range(n)]
    edges = {(names[i], names[i + 1]): 1 for i in range(0, n - 1, 2)}
    while len(edges) < m:
        u, v = rng.sample(names, 2)
        edges[(u, v)] = rng.randint(1, 4)
    return InteractionGraph("mention", edges)


def test_3_graph_metric_oracles():
    failures = []
    graphs = 0
    for n in range(2, 5):
        for g in bf.all_digraphs(n):
            graphs += 1
            bad = metric_mismatches(g)
            if bad:
                failures.append((sorted(g.edges), bad))
    rng = random.Random(33)
    for _ in range(500):
        g = bf.random_digraph(rng, 8)
        graphs += 1
        bad = metric_mismatches(g)
        if bad:
            failures.append((sorted(g.edges), bad))
    g = sized_graph()
    s = network_stats(g)
    avg_ok = s.nodes == 3234 and s.edges == 7855 and abs(s.average_degree - 2.429) <= 0.001
    verdict(
        3,
        not failures and avg_ok,
        f"{graphs} digraphs, {len(failures)} mismatches; {s.nodes} nodes/{s.edges} edges "
        f"average_degree={s.average_degree:.4f} (2.429 +/- 0.001)",
    )


# subset monotonicity -----------------------------------------------------------


def test_4_subset_monotonicity():
    t0 = time.perf_counter()
    a = generate_dataset(50_000, label="A", seed=40)
    b = random_subset(a, 0.7, seed=41, label="B")
    problems = []
    for kind in KINDS:
        ga, gb = build_network(a, kind), build_network(b, kind)
        if any(ga.edges.get(e, 0) < w for e, w in gb.edges.items()):
            problems.append(f"{kind} edges")
        if not set(gb.nodes) <= set(ga.nodes):
            problems.append(f"{kind} nodes")
    sa, sb = dataset_stats(a), dataset_stats(b)
    problems += [f for f in COUNT_FIELDS if getattr(sb, f) > getattr(sa, f)]
    ov = dataset_overlap(a, b)
    regions = list(ov.regions.values())
    union = a.ids | b.ids
    if set().union(*regions) != union or sum(len(r) for r in regions) != len(union):
        problems.append("overlap partition")
    if ov.region("B"):
        problems.append("B-only region non-empty")
    elapsed = time.perf_counter() - t0
    verdict(
        4,
        not problems and elapsed < 60,
        f"|A|={len(a)} |B|={len(b)}, violations={problems or 'none'}, {elapsed:.1f}s (<60s)",
    )


# identity ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def identity_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("acc") / "A.jsonl"
    write_dataset(generate_dataset(2500, label="A", duration=6 * 3600, seed=50), path)
    return path


def test_5_identity_run(identity_file, tmp_path):
    cfg = RunConfig(
        datasets=[str(identity_file)] * 2, out_dir=str(tmp_path), retweet_all_measures=True, top_k=1000
    )
    rep = run_compare(cfg)
    pair = rep.manifest["pairs"]["A__vs__A_2"]
    problems = [] if rep.ok else ["stage failure"]
    checked = 0
    for kind in KINDS:
        net = pair["networks"][kind]
        if net["clusters"]["ari"] != 1.0:
            problems.append(f"ari {kind}")
        for measure in ("degree", "betweenness", "closeness", "eigenvector"):
            sim = net["similarity"][measure]
            checked += 1
            if sim["tau"] != 1.0 or sim["rho"] != 1.0:
                problems.append(f"{kind}/{measure} tau={sim['tau']} rho={sim['rho']}")
            series = pair["longitudinal"][f"{kind}_{measure}"]
            for row in series["rows"]:
                if row["pct_compared"] != 1.0 or row["tau"] not in (1.0, None):
                    problems.append(f"{kind}/{measure} bucket {row['bucket_index']}")
    if any(v["difference"] != 0 for v in pair["stats_delta"]["counts"].values()):
        problems.append("stats delta")
    verdict(5, not problems, f"{checked} kind/measure similarities, problems={problems or 'none'}")


# neighbourhood score -----------------------------------------------------------


def test_6_neighborhood_score():
    rng = np.random.default_rng(6)
    m = 1000
    names = [f"n{i:04d}" for i in range(m)]
    ident = np.arange(1, m + 1)
    total_pairs = m * (m - 1) // 2
    over, worst = 0, 0.0
    for _ in range(1000):
        pa, pb = rng.permutation(ident), rng.permutation(ident)
        c = ranking(names, pa.tolist(), pb.tolist())
        pts = neighborhood_rank_score(c)
        over += sum(p.y > p.x for p in pts)
        s = sum(p.y for p in pts)
        conc_bf, _ = bf_concordance_counts(pa, pb)
        tau = kendall_tau(c)[0]
        from_tau = total_pairs * (1 + tau) / 2
        worst = max(worst, abs(s - conc_bf) / total_pairs, abs(s - from_tau) / total_pairs)
        if s != concordant_pairs(c)[0]:
            worst = max(worst, 1.0)
    verdict(
        6,
        over == 0 and worst <= 1e-12,
        f"1000 pairs m=1000: {over} scores above baseline, max |sum - concordant|/pairs = {worst:.1e}",
    )


# gaps --------------------------------------------------------------------------


def test_7_gap_detection():
    d = steady_stream(100, 24, seed=70)
    holes = [(T0 + 7 * 3600, T0 + 7 * 3600 + 4500), (T0 + 16 * 3600 + 1800, T0 + 16 * 3600 + 1800 + 4500)]
    ts = activity_timeline(drop_windows(d, holes), 900)
    gaps = detect_gaps(ts)
    minutes = [g.length * ts.interval_width / 60 for g in gaps]
    ok = len(gaps) == 2 and all(60 <= x <= 90 for x in minutes)
    verdict(7, ok, f"{len(gaps)} gaps of {minutes} minutes (expect 2 within 60-90)")


# determinism -------------------------------------------------------------------


def test_8_determinism(identity_file, tmp_path):
    other = tmp_path / "B.jsonl"
    write_dataset(random_subset(generate_dataset(2500, label="A", duration=6 * 3600, seed=50), 0.8, 3), other)
    texts, partitions = [], []
    for i in range(2):
        out = tmp_path / f"run{i}"
        run_compare(RunConfig(datasets=[str(identity_file), str(other)], out_dir=str(out), seed=9))
        m = json.loads((out / "manifest.json").read_text())
        m.pop("generated_at")
        texts.append(json.dumps(m, sort_keys=True))
        partitions.append(sorted((p.relative_to(out).as_posix(), p.read_bytes()) for p in out.rglob("partition.csv")))
    same = texts[0] == texts[1] and partitions[0] == partitions[1] and len(partitions[0]) == 6
    verdict(8, same, f"manifests identical modulo generated_at: {texts[0] == texts[1]}, "
            f"{len(partitions[0])} partition files identical: {partitions[0] == partitions[1]}")


# throughput --------------------------------------------------------------------

THROUGHPUT = """
import json, resource, sys, time
from twinnet.ingest import read_dataset
from twinnet.metrics import network_stats
from twinnet.network import KINDS, build_network
from twinnet.stats import dataset_stats
t0 = time.perf_counter()
d = read_dataset(sys.argv[1], "A")
dataset_stats(d)
for kind in KINDS:
    network_stats(build_network(d, kind))
print(json.dumps({"tweets": len(d), "seconds": time.perf_counter() - t0,
                  "max_rss_kb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss}))
"""


def test_9_throughput(tmp_path):
    path = tmp_path / "big.jsonl"
    write_dataset(generate_dataset(100_000, label="A", seed=90), path)
    proc = subprocess.run(
        [sys.executable, "-c", THROUGHPUT, str(path)], capture_output=True, text=True, check=True
    )
    res = json.loads(proc.stdout)
    mb = res["max_rss_kb"] / 1024
    ok = res["tweets"] == 100_000 and res["seconds"] < 60 and mb < 1024
    verdict(9, ok, f"{res['tweets']} tweets in {res['seconds']:.1f}s (<60s), peak RSS {mb:.0f} MB (<1024 MB)")
