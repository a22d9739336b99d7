"""Command line entry point: ``twinnet <subcommand> ...``.

Log verbosity comes from the ``TWINNET_LOG_LEVEL`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from twinnet.centrality import MEASURES, centrality, rank_nodes
from twinnet.clusters import compare_clusters, top_cluster_sizes
from twinnet.ingest import (
    activity_timeline,
    dataset_overlap,
    detect_gaps,
    parse_duration,
    read_dataset,
)
from twinnet.metrics import network_stats
from twinnet.network import KINDS, build_network
from twinnet.rankcompare import (
    ORDERS,
    common_top_k,
    neighborhood_rank_score,
    points_csv,
    points_svg,
    scatter_data,
    similarity,
)
from twinnet.report import FORMATS, RunConfig, env_log_level, run_compare
from twinnet.stats import dataset_stats, stats_delta


def _csv_list(choices):
    def parse(text: str) -> tuple[str, ...]:
        items = tuple(x.strip() for x in text.split(",") if x.strip())
        bad = [x for x in items if x not in choices]
        if bad:
            raise argparse.ArgumentTypeError(f"invalid choice(s) {bad}; pick from {list(choices)}")
        return items

    return parse


def _seconds(text: str) -> int:
    return int(parse_duration(text).total_seconds())


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_compare(args) -> int:
    paths = [args.a, args.b] + ([args.third] if args.third else [])
    cfg = RunConfig(
        datasets=paths,
        out_dir=args.out,
        labels=args.labels.split(",") if args.labels else None,
        kinds=args.kinds,
        measures=args.measures,
        top_k=args.top_k,
        bucket=args.bucket,
        cumulative=args.cumulative,
        longitudinal=not args.no_longitudinal,
        seed=args.seed,
        formats=args.formats,
        timeline_interval=args.interval,
        rank_order=args.rank_order,
        cluster_mode=args.cluster_mode,
        closeness_variant=args.closeness,
        resolution=args.resolution,
        retweet_all_measures=args.retweet_all_measures,
    )
    report = run_compare(cfg)
    failed = [s for s in report.manifest["stages"] if s["status"] != "ok"]
    for s in failed:
        print(f"{s['status']}: {s['name']}: {s.get('error', '')}", file=sys.stderr)
    print(report.out_dir / "manifest.json")
    return 0 if report.ok else 1


def cmd_stats(args) -> int:
    da = read_dataset(args.a)
    sa = dataset_stats(da)
    if args.b is None:
        _dump({"summary": da.summary(), "stats": sa.to_dict()})
        return 0
    db = read_dataset(args.b)
    sb = dataset_stats(db)
    delta = stats_delta(sa, sb)
    if args.csv:
        sys.stdout.write(delta.to_csv())
    else:
        _dump({"a": sa.to_dict(), "b": sb.to_dict(), "delta": delta.to_dict()})
    return 0


def cmd_overlap(args) -> int:
    ds = [read_dataset(p) for p in [args.a, args.b] + ([args.c] if args.c else [])]
    _dump(dataset_overlap(*ds).to_dict())
    return 0


def cmd_net(args) -> int:
    d = read_dataset(args.a)
    g = build_network(d, args.kind)
    if args.edges:
        path = Path(args.edges)
        path.write_text(g.to_json() if path.suffix == ".json" else g.to_edge_csv())
    _dump({"skipped": dict(g.skipped), "stats": network_stats(g, seed=args.seed).to_dict()})
    return 0


def cmd_rank(args) -> int:
    da, db = read_dataset(args.a), read_dataset(args.b)
    ra = centrality(build_network(da, args.kind), args.measure)
    rb = centrality(build_network(db, args.kind), args.measure)
    common = common_top_k(rank_nodes(ra), rank_nodes(rb), args.top_k, args.rank_order)
    score = similarity(common).to_dict()
    score["converged"] = ra.converged and rb.converged
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        scatter, hood = scatter_data(common), neighborhood_rank_score(common)
        (out / "scatter.csv").write_text(points_csv(scatter))
        (out / "scatter.svg").write_text(points_svg(scatter, args.measure))
        (out / "neighborhood.csv").write_text(points_csv(hood))
        (out / "neighborhood.svg").write_text(points_svg(hood, args.measure))
    _dump(score)
    return 0


def cmd_clusters(args) -> int:
    da, db = read_dataset(args.a), read_dataset(args.b)
    cmp, pa, pb = compare_clusters(
        build_network(da, args.kind),
        build_network(db, args.kind),
        seed=args.seed,
        resolution=args.resolution,
        mode=args.cluster_mode,
    )
    out = cmp.to_dict()
    out["top_cluster_sizes"] = {"a": top_cluster_sizes(pa), "b": top_cluster_sizes(pb)}
    _dump(out)
    return 0


def cmd_timeline(args) -> int:
    d = read_dataset(args.a)
    ts = activity_timeline(d, args.interval)
    if args.gaps:
        gaps = detect_gaps(ts, args.window, args.threshold)
        _dump({"too_short": gaps.too_short, "gaps": [g.to_dict(ts) for g in gaps]})
    else:
        sys.stdout.write(ts.to_csv())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinnet", description="Compare parallel social-media collections."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="full comparison report")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--third", help="optional third dataset")
    p.add_argument("--labels", help="comma-separated dataset labels")
    p.add_argument("--kinds", type=_csv_list(KINDS), default=KINDS)
    p.add_argument("--measures", type=_csv_list(MEASURES), default=MEASURES)
    p.add_argument("--top-k", type=int, default=1000)
    p.add_argument("--bucket", type=_seconds, default=3600, help="longitudinal bucket, e.g. 1h")
    p.add_argument("--interval", type=_seconds, default=900, help="timeline interval, e.g. 15m")
    p.add_argument("--cumulative", action="store_true")
    p.add_argument("--no-longitudinal", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--formats", type=_csv_list(FORMATS), default=FORMATS)
    p.add_argument("--rank-order", choices=ORDERS, default="truncate-first")
    p.add_argument("--cluster-mode", choices=("restrict", "induced"), default="restrict")
    p.add_argument("--closeness", choices=("harmonic", "classic"), default="harmonic")
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--retweet-all-measures", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stats", help="dataset statistics, or a delta report for two datasets")
    p.add_argument("a")
    p.add_argument("b", nargs="?")
    p.add_argument("--csv", action="store_true", help="print the delta as CSV")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("overlap", help="tweet-id overlap of two or three datasets")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c", nargs="?")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("net", help="build one network and print its statistics")
    p.add_argument("a")
    p.add_argument("--kind", choices=KINDS, default="mention")
    p.add_argument("--edges", help="write edges to this .csv or .json file")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("rank", help="compare centrality rankings of two datasets")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--kind", choices=KINDS, default="mention")
    p.add_argument("--measure", choices=MEASURES, default="degree")
    p.add_argument("--top-k", type=int, default=1000)
    p.add_argument("--rank-order", choices=ORDERS, default="truncate-first")
    p.add_argument("--out", help="directory for scatter/neighbourhood CSV and SVG")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("clusters", help="compare Louvain clusters of two datasets")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--kind", choices=KINDS, default="mention")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--cluster-mode", choices=("restrict", "induced"), default="restrict")
    p.set_defaults(func=cmd_clusters)

    p = sub.add_parser("timeline", help="tweet counts per interval, or detected gaps")
    p.add_argument("a")
    p.add_argument("--interval", type=_seconds, default=900)
    p.add_argument("--gaps", action="store_true")
    p.add_argument("--window", type=int, default=8)
    p.add_argument("--threshold", type=float, default=0.25)
    p.set_defaults(func=cmd_timeline)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=env_log_level(), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
