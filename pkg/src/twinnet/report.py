"""End-to-end comparison run writing a fixed directory of artifacts and a manifest.

Layout under ``out_dir``::

    manifest.json
    datasets/<label>/summary.json, stats.json, stats.csv, timeline.csv, gaps.json
    datasets/<label>/<kind>/edges.csv, partition.csv, network_stats.json, network_stats.csv
    pairs/<a>__vs__<b>/overlap.json, stats_delta.json, stats_delta.csv
    pairs/<a>__vs__<b>/<kind>/network_stats.csv, clusters.json, top_clusters.csv
    pairs/<a>__vs__<b>/<kind>/<measure>/similarity.json, ranking_a.csv, ranking_b.csv,
        scatter.csv, scatter.svg, neighborhood.csv, neighborhood.svg
    pairs/<a>__vs__<b>/longitudinal/<kind>_<measure>.csv, <kind>_<measure>.json
    overlap3.json                      (three datasets only)

Every stage is recorded in the manifest with a status; a failing stage does
not stop independent ones. The only run-dependent manifest field is
``generated_at``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import traceback
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from itertools import combinations
from pathlib import Path
from typing import Any

from twinnet.centrality import EIGEN_MAX_ITER, EIGEN_TOL, MEASURES, TIE_BREAK, centrality, rank_nodes
from twinnet.clusters import compare_clusters, top_cluster_sizes
from twinnet.ingest import Dataset, activity_timeline, dataset_overlap, detect_gaps, read_dataset
from twinnet.longitudinal import longitudinal_compare
from twinnet.louvain import louvain
from twinnet.metrics import network_stats
from twinnet.network import KINDS, build_network
from twinnet.rankcompare import (
    common_top_k,
    neighborhood_rank_score,
    points_csv,
    points_svg,
    scatter_data,
    similarity,
)
from twinnet.stats import dataset_stats, stats_delta

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "svg")


@dataclass
class RunConfig:
    """Knobs for :func:`run_compare`. Durations are in seconds."""

    datasets: list[str]
    out_dir: str
    labels: list[str] | None = None
    kinds: tuple[str, ...] = KINDS
    measures: tuple[str, ...] = MEASURES
    top_k: int = 1000
    bucket: int = 3600
    cumulative: bool = False
    longitudinal: bool = True
    seed: int = 0
    formats: tuple[str, ...] = FORMATS
    timeline_interval: int = 900
    gap_window: int = 8
    gap_threshold: float = 0.25
    rank_order: str = "truncate-first"
    cluster_mode: str = "restrict"
    closeness_variant: str = "harmonic"
    resolution: float = 1.0
    retweet_all_measures: bool = False

    def __post_init__(self) -> None:
        if len(self.datasets) not in (2, 3):
            raise ValueError("a comparison needs two or three datasets")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        unknown = set(self.kinds) - set(KINDS)
        if unknown:
            raise ValueError(f"unknown network kinds {sorted(unknown)}")
        unknown = set(self.measures) - set(MEASURES)
        if unknown:
            raise ValueError(f"unknown measures {sorted(unknown)}")
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            raise ValueError(f"unknown formats {sorted(unknown)}")
        if self.labels is not None and len(self.labels) != len(self.datasets):
            raise ValueError("one label per dataset")

    def resolved_labels(self) -> list[str]:
        raw = self.labels or [Path(p).stem for p in self.datasets]
        out: list[str] = []
        for label in raw:
            name, i = label, 2
            while name in out:
                name = f"{label}_{i}"
                i += 1
            out.append(name)
        return out

    def measures_for(self, kind: str) -> tuple[str, ...]:
        """Measures ranked on whole networks; retweet edges are not direct interactions."""
        if kind == "retweet" and not self.retweet_all_measures:
            return ()
        return self.measures

    def longitudinal_measures_for(self, kind: str) -> tuple[str, ...]:
        """Per-bucket measures; retweet networks get degree only unless overridden."""
        if kind == "retweet" and not self.retweet_all_measures:
            return tuple(m for m in self.measures if m == "degree")
        return self.measures

    def provenance(self) -> dict[str, Any]:
        out = asdict(self)
        out.pop("out_dir")
        out["labels"] = self.resolved_labels()
        out["tie_break"] = TIE_BREAK
        out["eigenvector"] = {"tolerance": EIGEN_TOL, "max_iter": EIGEN_MAX_ITER, "shift": "A+I"}
        out["average_degree"] = "edges/nodes"
        out["density"] = "directed: edges/(nodes*(nodes-1))"
        out["diameter"] = "largest weak component, undirected, unweighted"
        out["degree_centrality"] = "distinct undirected neighbours/(n-1)"
        out["louvain"] = {"seed": self.seed, "resolution": self.resolution, "node_order": "sorted id"}
        return json.loads(json.dumps(out))


@dataclass
class ComparisonReport:
    out_dir: Path
    manifest: dict[str, Any]
    ok: bool


@dataclass
class _Run:
    cfg: RunConfig
    out: Path
    stages: list[dict[str, Any]] = field(default_factory=list)

    def stage(self, name: str, fn, *args, **kwargs):
        """Run one stage, recording status; returns ``None`` on failure."""
        try:
            result = fn(*args, **kwargs)
        except Exception as exc:  # noqa: BLE001 - every stage failure is reported, not raised
            logger.error("stage %s failed: %s", name, exc)
            self.stages.append(
                {
                    "name": name,
                    "status": "error",
                    "error": f"{type(exc).__name__}: {exc}",
                    "traceback": traceback.format_exc(limit=3),
                }
            )
            return None
        self.stages.append({"name": name, "status": "ok"})
        return result

    def skip(self, name: str, reason: str) -> None:
        self.stages.append({"name": name, "status": "skipped", "error": reason})

    def write(self, rel: str, text: str, fmt: str) -> str | None:
        if fmt not in self.cfg.formats:
            return None
        path = self.out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return rel

    def write_json(self, rel: str, data: Any) -> str | None:
        return self.write(rel, json.dumps(data, indent=2, sort_keys=True) + "\n", "json")


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def run_compare(cfg: RunConfig, preloaded: list[Dataset] | None = None) -> ComparisonReport:
    """Run every comparison stage and write the artifacts plus ``manifest.json``.

    ``preloaded`` replaces reading ``cfg.datasets`` from disk (labels still
    come from the config).
    """
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    run = _Run(cfg, out)
    labels = cfg.resolved_labels()
    manifest: dict[str, Any] = {
        "tool": "twinnet",
        "generated_at": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "config": cfg.provenance(),
        "datasets": {},
        "pairs": {},
    }

    datasets: dict[str, Dataset] = {}
    for i, label in enumerate(labels):
        if preloaded is not None:
            d = run.stage(f"ingest:{label}", _relabel, preloaded[i], label)
        else:
            d = run.stage(f"ingest:{label}", read_dataset, cfg.datasets[i], label)
        if d is not None:
            datasets[label] = d

    graphs: dict[tuple[str, str], Any] = {}
    partitions: dict[tuple[str, str], Any] = {}
    netstats: dict[tuple[str, str], Any] = {}
    for label, d in datasets.items():
        manifest["datasets"][label] = _dataset_stages(
            run, label, d, graphs, partitions, netstats
        )

    ranked: dict[tuple[str, str, str], Any] = {}
    for la, lb in combinations(labels, 2):
        key = f"{la}__vs__{lb}"
        if la not in datasets or lb not in datasets:
            run.skip(f"pair:{key}", "dataset failed to ingest")
            continue
        manifest["pairs"][key] = _pair_stages(
            run, key, datasets[la], datasets[lb], graphs, partitions, netstats, ranked
        )

    if len(labels) == 3 and len(datasets) == 3:
        ov = run.stage("overlap3", dataset_overlap, *(datasets[l] for l in labels))
        if ov is not None:
            manifest["overlap3"] = ov.to_dict()
            run.write_json("overlap3.json", ov.to_dict())

    manifest["stages"] = run.stages
    ok = all(s["status"] == "ok" for s in run.stages)
    manifest["status"] = "ok" if ok else "error"
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return ComparisonReport(out, manifest, ok)


def _relabel(d: Dataset, label: str) -> Dataset:
    if d.label == label:
        return d
    return Dataset(label, d.tweets, d.duplicate_count, d.malformed_count, d.conflict_count)


def _dataset_stages(run: _Run, label: str, d: Dataset, graphs, partitions, netstats) -> dict[str, Any]:
    cfg = run.cfg
    base = f"datasets/{label}"
    entry: dict[str, Any] = {"summary": d.summary()}
    run.write_json(f"{base}/summary.json", d.summary())

    st = run.stage(f"stats:{label}", dataset_stats, d)
    if st is not None:
        entry["stats"] = st.to_dict()
        run.write_json(f"{base}/stats.json", st.to_dict())
        run.write(f"{base}/stats.csv", st.to_csv(), "csv")

    ts = run.stage(f"timeline:{label}", activity_timeline, d, cfg.timeline_interval)
    if ts is not None:
        run.write(f"{base}/timeline.csv", ts.to_csv(), "csv")
        gaps = run.stage(f"gaps:{label}", detect_gaps, ts, cfg.gap_window, cfg.gap_threshold)
        if gaps is not None:
            entry["gaps"] = [g.to_dict(ts) for g in gaps]
            entry["gaps_series_too_short"] = gaps.too_short
            run.write_json(f"{base}/gaps.json", entry["gaps"])

    entry["networks"] = {}
    for kind in cfg.kinds:
        g = run.stage(f"network:{label}:{kind}", build_network, d, kind)
        if g is None:
            continue
        graphs[(label, kind)] = g
        p = run.stage(f"louvain:{label}:{kind}", louvain, g, cfg.seed, cfg.resolution)
        net: dict[str, Any] = {"skipped": dict(g.skipped)}
        if p is not None:
            partitions[(label, kind)] = p
            text = p.to_csv()
            run.write(f"{base}/{kind}/partition.csv", text, "csv")
            net["partition_sha256"] = _sha256(text)
        run.write(f"{base}/{kind}/edges.csv", g.to_edge_csv(), "csv")
        ns = run.stage(
            f"network_stats:{label}:{kind}", network_stats, g, cfg.seed, cfg.resolution, p
        )
        if ns is not None:
            netstats[(label, kind)] = ns
            net["stats"] = ns.to_dict()
            run.write_json(f"{base}/{kind}/network_stats.json", ns.to_dict())
            run.write(f"{base}/{kind}/network_stats.csv", ns.to_csv(), "csv")
        entry["networks"][kind] = net
    return entry


def _ranking(run: _Run, label: str, kind: str, measure: str, graphs, ranked):
    key = (label, kind, measure)
    if key not in ranked:
        res = run.stage(
            f"centrality:{label}:{kind}:{measure}",
            centrality,
            graphs[(label, kind)],
            measure,
            run.cfg.closeness_variant,
        )
        ranked[key] = None if res is None else (res, rank_nodes(res))
    return ranked[key]


def _pair_stages(run: _Run, key, da: Dataset, db: Dataset, graphs, partitions, netstats, ranked):
    cfg = run.cfg
    la, lb = da.label, db.label
    base = f"pairs/{key}"
    entry: dict[str, Any] = {}

    ov = run.stage(f"overlap:{key}", dataset_overlap, da, db)
    if ov is not None:
        entry["overlap"] = ov.to_dict()
        run.write_json(f"{base}/overlap.json", ov.to_dict())

    sa, sb = dataset_stats(da), dataset_stats(db)
    delta = run.stage(f"stats_delta:{key}", stats_delta, sa, sb)
    if delta is not None:
        entry["stats_delta"] = delta.to_dict()
        run.write_json(f"{base}/stats_delta.json", delta.to_dict())
        run.write(f"{base}/stats_delta.csv", delta.to_csv(), "csv")

    entry["networks"] = {}
    for kind in cfg.kinds:
        if (la, kind) not in graphs or (lb, kind) not in graphs:
            run.skip(f"pair_network:{key}:{kind}", "network missing")
            continue
        ga, gb = graphs[(la, kind)], graphs[(lb, kind)]
        net: dict[str, Any] = {}
        na, nb = netstats.get((la, kind)), netstats.get((lb, kind))
        if na is not None and nb is not None:
            rows = [f"metric,{la},{lb}"]
            for title, name in na.ROWS:
                rows.append(f"{title},{getattr(na, name)},{getattr(nb, name)}")
            run.write(f"{base}/{kind}/network_stats.csv", "\n".join(rows) + "\n", "csv")
        pa, pb = partitions.get((la, kind)), partitions.get((lb, kind))
        given = (pa, pb) if pa is not None and pb is not None else None
        res = run.stage(
            f"clusters:{key}:{kind}",
            compare_clusters,
            ga,
            gb,
            cfg.seed,
            cfg.resolution,
            cfg.cluster_mode,
            given if cfg.cluster_mode == "restrict" else None,
        )
        if res is not None:
            cmp, pa, pb = res
            net["clusters"] = cmp.to_dict()
            run.write_json(f"{base}/{kind}/clusters.json", cmp.to_dict())
            sizes_a, sizes_b = top_cluster_sizes(pa), top_cluster_sizes(pb)
            net["top_cluster_sizes"] = {la: sizes_a, lb: sizes_b}
            rows = ["rank,%s,%s" % (la, lb)]
            for i in range(max(len(sizes_a), len(sizes_b))):
                a = sizes_a[i] if i < len(sizes_a) else ""
                b = sizes_b[i] if i < len(sizes_b) else ""
                rows.append(f"{i + 1},{a},{b}")
            run.write(f"{base}/{kind}/top_clusters.csv", "\n".join(rows) + "\n", "csv")

        net["similarity"] = {}
        for measure in cfg.measures_for(kind):
            ra = _ranking(run, la, kind, measure, graphs, ranked)
            rb = _ranking(run, lb, kind, measure, graphs, ranked)
            if ra is None or rb is None:
                run.skip(f"rank:{key}:{kind}:{measure}", "centrality failed")
                continue
            sim = run.stage(
                f"rank:{key}:{kind}:{measure}",
                _rank_artifacts,
                run,
                f"{base}/{kind}/{measure}",
                ra,
                rb,
            )
            if sim is not None:
                net["similarity"][measure] = sim
        entry["networks"][kind] = net

    if cfg.longitudinal:
        entry["longitudinal"] = {}
        for kind in cfg.kinds:
            for measure in cfg.longitudinal_measures_for(kind):
                series = run.stage(
                    f"longitudinal:{key}:{kind}:{measure}",
                    longitudinal_compare,
                    da,
                    db,
                    kind,
                    measure,
                    cfg.bucket,
                    cfg.cumulative,
                    cfg.top_k,
                    cfg.rank_order,
                    cfg.retweet_all_measures,
                    cfg.closeness_variant,
                )
                if series is None:
                    continue
                name = f"{kind}_{measure}"
                entry["longitudinal"][name] = series.to_dict()
                run.write(f"{base}/longitudinal/{name}.csv", series.to_csv(), "csv")
                run.write_json(f"{base}/longitudinal/{name}.json", series.to_dict())
    return entry


def _rank_artifacts(run: _Run, base: str, ra, rb) -> dict[str, Any]:
    (res_a, list_a), (res_b, list_b) = ra, rb
    cfg = run.cfg
    common = common_top_k(list_a, list_b, cfg.top_k, cfg.rank_order)
    converged = res_a.converged and res_b.converged
    score = similarity(common).to_dict()
    if not converged:
        score.update(tau=None, tau_p_value=None, rho=None, rho_p_value=None)
    score["converged"] = converged
    score["list_sizes"] = list(common.list_sizes)
    run.write_json(f"{base}/similarity.json", score)
    run.write(f"{base}/ranking_a.csv", list_a.to_csv(), "csv")
    run.write(f"{base}/ranking_b.csv", list_b.to_csv(), "csv")
    scatter = scatter_data(common)
    hood = neighborhood_rank_score(common)
    run.write(f"{base}/scatter.csv", points_csv(scatter), "csv")
    run.write(f"{base}/neighborhood.csv", points_csv(hood), "csv")
    title = f"{res_a.measure}: rank in a (x) vs b (y)"
    run.write(f"{base}/scatter.svg", points_svg(scatter, title), "svg")
    run.write(f"{base}/neighborhood.svg", points_svg(hood, f"{res_a.measure}: neighbourhood score"), "svg")
    return score


def env_log_level(default: str = "WARNING") -> str:
    return os.environ.get("TWINNET_LOG_LEVEL", default).upper()
