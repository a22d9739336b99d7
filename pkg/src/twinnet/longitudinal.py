"""Bucketed and cumulative centrality-ranking comparisons over time."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from datetime import timedelta

from twinnet.centrality import centrality, rank_nodes
from twinnet.ingest import Dataset, _as_seconds, floor_to, format_iso
from twinnet.network import InteractionGraph, interaction_counts
from twinnet.rankcompare import common_top_k, similarity


@dataclass(frozen=True)
class LongitudinalRow:
    bucket_index: int
    start: int
    compared: int
    pct_compared: float
    tau: float | None
    rho: float | None
    tau_p_value: float | None = None
    rho_p_value: float | None = None
    converged: bool = True


@dataclass(frozen=True)
class LongitudinalSeries:
    kind: str
    measure: str
    bucket_width: int
    cumulative: bool
    origin: int
    rows: tuple[LongitudinalRow, ...]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "measure": self.measure,
            "bucket_width": self.bucket_width,
            "cumulative": self.cumulative,
            "origin": format_iso(self.origin),
            "rows": [asdict(r) for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bucket_index", "bucket_start", "compared", "pct_compared", "tau", "rho"])
        for r in self.rows:
            w.writerow(
                [
                    r.bucket_index,
                    format_iso(r.start),
                    r.compared,
                    repr(r.pct_compared),
                    "" if r.tau is None else repr(r.tau),
                    "" if r.rho is None else repr(r.rho),
                ]
            )
        return buf.getvalue()


def bucket_grid(datasets, width: int) -> tuple[int, int]:
    """Shared ``(origin, bucket count)`` covering every dataset's time span.

    The last bucket is closed on the right so a tweet exactly at the grid end
    does not open an extra bucket.
    """
    spans = [d.time_span for d in datasets if d.time_span is not None]
    if not spans:
        return 0, 0
    origin = floor_to(min(s[0] for s in spans), width)
    end = max(s[1] for s in spans)
    return origin, max(1, math.ceil((end - origin) / width))


def _bucketed(d: Dataset, origin: int, width: int, n: int) -> list[list]:
    buckets: list[list] = [[] for _ in range(n)]
    for t in d:
        buckets[min((t.created_at - origin) // width, n - 1)].append(t)
    return buckets


def longitudinal_compare(
    a: Dataset,
    b: Dataset,
    kind: str,
    measure: str,
    width: timedelta | int = 3600,
    cumulative: bool = False,
    k: int = 1000,
    order: str = "truncate-first",
    allow_any_measure: bool = False,
    closeness_variant: str = "harmonic",
) -> LongitudinalSeries:
    """Compare rankings bucket by bucket (or over growing prefixes when ``cumulative``).

    Both datasets share one grid anchored at the earlier first tweet. A bucket
    where either network is empty, or eigenvector centrality does not
    converge, yields a row with absent scores.
    """
    if kind == "retweet" and measure != "degree" and not allow_any_measure:
        raise ValueError("retweet networks are compared on degree centrality only")
    w = _as_seconds(width)
    origin, n = bucket_grid([a, b], w)
    parts_a = _bucketed(a, origin, w, n)
    parts_b = _bucketed(b, origin, w, n)
    acc_a: dict = {}
    acc_b: dict = {}
    rows = []
    for i in range(n):
        ca, _ = interaction_counts(Dataset.from_tweets(a.label, parts_a[i]), kind)
        cb, _ = interaction_counts(Dataset.from_tweets(b.label, parts_b[i]), kind)
        if cumulative:
            for e, wt in ca.items():
                acc_a[e] = acc_a.get(e, 0) + wt
            for e, wt in cb.items():
                acc_b[e] = acc_b.get(e, 0) + wt
            ga, gb = InteractionGraph(kind, acc_a), InteractionGraph(kind, acc_b)
        else:
            ga, gb = InteractionGraph(kind, ca), InteractionGraph(kind, cb)
        rows.append(_compare_bucket(i, origin + i * w, ga, gb, measure, k, order, closeness_variant))
    return LongitudinalSeries(kind, measure, w, cumulative, origin, tuple(rows))


def _compare_bucket(i, start, ga, gb, measure, k, order, closeness_variant) -> LongitudinalRow:
    if ga.n_nodes == 0 or gb.n_nodes == 0:
        return LongitudinalRow(i, start, 0, 0.0, None, None)
    ra = centrality(ga, measure, closeness_variant)
    rb = centrality(gb, measure, closeness_variant)
    common = common_top_k(rank_nodes(ra), rank_nodes(rb), k, order)
    smaller = min(common.list_sizes)
    pct = common.m / smaller if smaller else 0.0
    if not (ra.converged and rb.converged):
        return LongitudinalRow(i, start, common.m, pct, None, None, converged=False)
    s = similarity(common)
    return LongitudinalRow(i, start, common.m, pct, s.tau, s.rho, s.tau_p_value, s.rho_p_value)
