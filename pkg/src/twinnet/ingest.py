"""Line-delimited JSON tweet ingest, dataset overlap, activity timelines and gap detection.

Input lines follow the platform's v1.1 tweet object layout (``id_str``,
``user``, ``entities``, ``retweeted_status`` ...). Unknown fields are ignored.
Anything that is not a JSON object with a usable id and timestamp is counted
as malformed instead of aborting the read.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from itertools import combinations
from statistics import median
from types import MappingProxyType
from typing import Any

logger = logging.getLogger(__name__)

LEGACY_TIME_FORMAT = "%a %b %d %H:%M:%S %z %Y"

_MONTHS = {
    m: i + 1
    for i, m in enumerate(
        ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"]
    )
}


@dataclass(frozen=True, slots=True)
class Tweet:
    """A normalized post.

    ``created_at`` is UTC epoch seconds. ``mentions`` keeps one
    ``(author_id, screen_name)`` pair per mention entity, so repeated
    mentions inside one post are preserved.
    """

    id: str
    author_id: str
    author_screen_name: str
    created_at: int
    text: str = ""
    in_reply_to_tweet_id: str | None = None
    in_reply_to_author_id: str | None = None
    retweeted_tweet_id: str | None = None
    retweeted_author_id: str | None = None
    quoted_tweet_id: str | None = None
    hashtags: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()
    mentions: tuple[tuple[str, str], ...] = ()

    @property
    def is_retweet(self) -> bool:
        return self.retweeted_tweet_id is not None

    @property
    def is_reply(self) -> bool:
        return self.in_reply_to_tweet_id is not None

    @property
    def is_quote(self) -> bool:
        return self.quoted_tweet_id is not None

    @property
    def created_datetime(self) -> datetime:
        return datetime.fromtimestamp(self.created_at, tz=timezone.utc)

    def to_json_dict(self) -> dict[str, Any]:
        """Serialize back into the platform layout accepted by :func:`parse_dataset`."""
        obj: dict[str, Any] = {
            "id_str": self.id,
            "created_at": format_legacy_time(self.created_at),
            "text": self.text,
            "user": {"id_str": self.author_id, "screen_name": self.author_screen_name},
            "in_reply_to_status_id_str": self.in_reply_to_tweet_id,
            "in_reply_to_user_id_str": self.in_reply_to_author_id,
            "entities": {
                "hashtags": [{"text": h} for h in self.hashtags],
                "urls": [{"expanded_url": u} for u in self.urls],
                "user_mentions": [
                    {"id_str": uid, "screen_name": name} for uid, name in self.mentions
                ],
            },
        }
        if self.retweeted_tweet_id is not None:
            obj["retweeted_status"] = {
                "id_str": self.retweeted_tweet_id,
                "user": {"id_str": self.retweeted_author_id},
            }
        if self.quoted_tweet_id is not None:
            obj["is_quote_status"] = True
            obj["quoted_status_id_str"] = self.quoted_tweet_id
        return obj


def format_legacy_time(epoch_seconds: int) -> str:
    return datetime.fromtimestamp(epoch_seconds, tz=timezone.utc).strftime(LEGACY_TIME_FORMAT)


def parse_timestamp(value: Any) -> int:
    """Return UTC epoch seconds for a legacy string, ISO 8601 string or epoch milliseconds."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, (int, float)):
        return int(value) // 1000
    if not isinstance(value, str):
        raise ValueError(f"unsupported timestamp {value!r}")
    s = value.strip()
    if s.isdigit():
        return int(s) // 1000
    parts = s.split()
    # "Wed Oct 10 20:19:24 +0000 2018"; hand-parsed because strptime dominates ingest time
    if len(parts) == 6 and parts[1] in _MONTHS:
        hh, mm, ss = parts[3].split(":")
        off = parts[4]
        sign = -1 if off[0] == "-" else 1
        offset = sign * (int(off[1:3]) * 3600 + int(off[3:5]) * 60)
        dt = datetime(
            int(parts[5]), _MONTHS[parts[1]], int(parts[2]), int(hh), int(mm), int(ss),
            tzinfo=timezone.utc,
        )
        return int(dt.timestamp()) - offset
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _id(value: Any) -> str | None:
    if value is None or value == "":
        return None
    return str(value)


def tweet_from_json(obj: Mapping[str, Any]) -> Tweet:
    """Build a :class:`Tweet` from one decoded platform object.

    Raises:
        ValueError: if the object has no id, author or timestamp.
    """
    tid = _id(obj.get("id_str")) or _id(obj.get("id"))
    if tid is None:
        raise ValueError("missing tweet id")
    user = obj.get("user") or {}
    author = _id(user.get("id_str")) or _id(user.get("id"))
    if author is None:
        raise ValueError("missing author id")
    if obj.get("created_at") is not None:
        created = parse_timestamp(obj["created_at"])
    elif obj.get("timestamp_ms") is not None:
        created = parse_timestamp(obj["timestamp_ms"])
    else:
        raise ValueError("missing timestamp")

    ext = obj.get("extended_tweet") or {}
    text = ext.get("full_text") or obj.get("full_text") or obj.get("text") or ""
    entities = ext.get("entities") or obj.get("entities") or {}

    hashtags = tuple(
        h["text"].lower() for h in entities.get("hashtags") or () if h.get("text")
    )
    urls = tuple(
        u.get("expanded_url") or u.get("url")
        for u in entities.get("urls") or ()
        if u.get("expanded_url") or u.get("url")
    )
    mentions = []
    for m in entities.get("user_mentions") or ():
        mid = _id(m.get("id_str")) or _id(m.get("id"))
        if mid is not None:
            mentions.append((mid, m.get("screen_name") or ""))

    rt = obj.get("retweeted_status")
    rt_id = rt_author = None
    if isinstance(rt, Mapping):
        rt_id = _id(rt.get("id_str")) or _id(rt.get("id"))
        rt_user = rt.get("user") or {}
        rt_author = _id(rt_user.get("id_str")) or _id(rt_user.get("id"))

    quoted = _id(obj.get("quoted_status_id_str")) or _id(obj.get("quoted_status_id"))
    if quoted is None and isinstance(obj.get("quoted_status"), Mapping):
        quoted = _id(obj["quoted_status"].get("id_str")) or _id(obj["quoted_status"].get("id"))

    return Tweet(
        id=tid,
        author_id=author,
        author_screen_name=user.get("screen_name") or "",
        created_at=created,
        text=text,
        in_reply_to_tweet_id=_id(obj.get("in_reply_to_status_id_str"))
        or _id(obj.get("in_reply_to_status_id")),
        in_reply_to_author_id=_id(obj.get("in_reply_to_user_id_str"))
        or _id(obj.get("in_reply_to_user_id")),
        retweeted_tweet_id=rt_id,
        retweeted_author_id=rt_author,
        quoted_tweet_id=quoted,
        hashtags=hashtags,
        urls=urls,
        mentions=tuple(mentions),
    )


@dataclass(frozen=True)
class Dataset:
    """Deduplicated, time-ordered tweets plus ingest diagnostics.

    ``tweets`` is a read-only mapping from id to :class:`Tweet`, iterated in
    ``(created_at, id)`` order. ``conflict_count`` counts duplicate lines whose
    bytes differ from the first occurrence of the same id.
    """

    label: str
    tweets: Mapping[str, Tweet]
    duplicate_count: int = 0
    malformed_count: int = 0
    conflict_count: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.tweets, MappingProxyType):
            ordered = sorted(self.tweets.values(), key=lambda t: (t.created_at, t.id))
            object.__setattr__(self, "tweets", MappingProxyType({t.id: t for t in ordered}))

    @classmethod
    def from_tweets(cls, label: str, tweets: Iterable[Tweet], **diagnostics: int) -> Dataset:
        """Build a dataset from tweets, keeping the first tweet seen for each id."""
        kept: dict[str, Tweet] = {}
        for t in tweets:
            kept.setdefault(t.id, t)
        return cls(label, kept, **diagnostics)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets.values())

    @property
    def ids(self) -> frozenset[str]:
        return frozenset(self.tweets)

    @property
    def time_span(self) -> tuple[int, int] | None:
        if not self.tweets:
            return None
        times = [t.created_at for t in self.tweets.values()]
        return min(times), max(times)

    def subset(self, keep, label: str | None = None) -> Dataset:
        """Return the tweets for which ``keep(tweet)`` is true as a new dataset."""
        return Dataset.from_tweets(label or self.label, (t for t in self if keep(t)))

    def to_lines(self) -> list[str]:
        return [json.dumps(t.to_json_dict(), ensure_ascii=False) for t in self]

    def summary(self) -> dict[str, Any]:
        span = self.time_span
        return {
            "label": self.label,
            "tweets": len(self),
            "duplicate_count": self.duplicate_count,
            "conflict_count": self.conflict_count,
            "malformed_count": self.malformed_count,
            "time_span": None if span is None else [format_iso(span[0]), format_iso(span[1])],
        }


def format_iso(epoch_seconds: int) -> str:
    return datetime.fromtimestamp(epoch_seconds, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_dataset(lines: Iterable[str | bytes], label: str) -> Dataset:
    """Parse JSON lines into a :class:`Dataset`.

    Blank lines are skipped. Lines that fail to decode, or decode to something
    that is not a tweet, add to ``malformed_count``. Repeated ids keep the first
    occurrence and add to ``duplicate_count``.
    """
    kept: dict[str, Tweet] = {}
    raw_of: dict[str, str] = {}
    duplicates = malformed = conflicts = 0
    for line in lines:
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError:
                malformed += 1
                continue
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("not an object")
            tweet = tweet_from_json(obj)
        except (ValueError, TypeError, KeyError, AttributeError, IndexError):
            malformed += 1
            continue
        if tweet.id in kept:
            duplicates += 1
            if raw_of[tweet.id] != line:
                conflicts += 1
            continue
        kept[tweet.id] = tweet
        raw_of[tweet.id] = line
    if malformed:
        logger.info("%s: skipped %d malformed lines", label, malformed)
    return Dataset(label, kept, duplicates, malformed, conflicts)


def read_dataset(path: str | os.PathLike, label: str | None = None) -> Dataset:
    """Read a ``.jsonl`` file. The label defaults to the file stem."""
    path = os.fspath(path)
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]
    with open(path, "rb") as fh:
        return parse_dataset(fh, label)


def write_dataset(d: Dataset, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in d.to_lines():
            fh.write(line + "\n")


@dataclass(frozen=True)
class OverlapReport:
    """Exclusive membership regions of the id union of two or three datasets.

    ``regions`` maps a tuple of labels to the ids present in exactly those
    datasets; ``("A",)`` is "unique to A", ``("A", "B")`` is "in A and B but
    not C".
    """

    labels: tuple[str, ...]
    regions: Mapping[tuple[str, ...], frozenset[str]]

    @property
    def counts(self) -> dict[tuple[str, ...], int]:
        return {k: len(v) for k, v in self.regions.items()}

    @property
    def union_size(self) -> int:
        return sum(len(v) for v in self.regions.values())

    def region(self, *labels: str) -> frozenset[str]:
        key = tuple(sorted(labels, key=self.labels.index))
        return self.regions[key]

    def to_dict(self) -> dict[str, Any]:
        return {
            "labels": list(self.labels),
            "union": self.union_size,
            "regions": {"&".join(k): len(v) for k, v in self.regions.items()},
        }


def dataset_overlap(a: Dataset, b: Dataset, c: Dataset | None = None) -> OverlapReport:
    """Partition the union of tweet ids into the exclusive regions of a Venn diagram."""
    datasets = [a, b] if c is None else [a, b, c]
    labels = tuple(d.label for d in datasets)
    if len(set(labels)) != len(labels):
        raise ValueError(f"dataset labels must be distinct, got {labels}")
    id_sets = [d.ids for d in datasets]
    union = frozenset().union(*id_sets)
    regions: dict[tuple[str, ...], frozenset[str]] = {}
    for size in range(1, len(datasets) + 1):
        for members in combinations(range(len(datasets)), size):
            inside = union.intersection(*(id_sets[i] for i in members))
            outside = frozenset().union(
                *(id_sets[i] for i in range(len(datasets)) if i not in members)
            )
            regions[tuple(labels[i] for i in members)] = inside - outside
    return OverlapReport(labels, MappingProxyType(regions))


def _as_seconds(width: timedelta | int | float) -> int:
    seconds = width.total_seconds() if isinstance(width, timedelta) else width
    if seconds <= 0 or int(seconds) != seconds:
        raise ValueError(f"interval width must be a positive whole number of seconds, got {width}")
    return int(seconds)


@dataclass(frozen=True)
class TimeSeries:
    """Zero-filled tweet counts over contiguous intervals starting at ``origin`` (epoch seconds)."""

    interval_width: int
    origin: int
    counts: tuple[int, ...]

    def interval_start(self, i: int) -> int:
        return self.origin + i * self.interval_width

    def __len__(self) -> int:
        return len(self.counts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["interval_start_iso8601", "count"])
        for i, c in enumerate(self.counts):
            w.writerow([format_iso(self.interval_start(i)), c])
        return buf.getvalue()


def floor_to(t: int, width: int) -> int:
    return t - t % width


def activity_timeline(
    d: Dataset, interval_width: timedelta | int, origin: int | None = None
) -> TimeSeries:
    """Count tweets per interval.

    The first interval starts at the first tweet's time floored to the width
    (or at ``origin`` when given, for a shared grid across datasets).
    """
    width = _as_seconds(interval_width)
    span = d.time_span
    if span is None:
        return TimeSeries(width, origin or 0, ())
    start = floor_to(span[0], width) if origin is None else origin
    if start > span[0]:
        raise ValueError("origin is after the first tweet")
    counts = [0] * ((span[1] - start) // width + 1)
    for t in d:
        counts[(t.created_at - start) // width] += 1
    return TimeSeries(width, start, tuple(counts))


@dataclass(frozen=True, slots=True)
class Gap:
    """A run of intervals ``start_interval..end_interval`` (inclusive) with suppressed activity.

    ``severity`` is the observed count over the count expected from the
    surrounding baseline.
    """

    start_interval: int
    end_interval: int
    severity: float
    baseline: float

    @property
    def length(self) -> int:
        return self.end_interval - self.start_interval + 1

    def to_dict(self, series: TimeSeries | None = None) -> dict[str, Any]:
        out: dict[str, Any] = {
            "start_interval": self.start_interval,
            "end_interval": self.end_interval,
            "severity": self.severity,
            "baseline": self.baseline,
        }
        if series is not None:
            out["start"] = format_iso(series.interval_start(self.start_interval))
            out["end"] = format_iso(series.interval_start(self.end_interval + 1))
            out["duration_seconds"] = self.length * series.interval_width
        return out


class GapList(list):
    """List of :class:`Gap`; ``too_short`` is set when the series was shorter than the window."""

    too_short: bool = False


def _outside_median(counts: list[int], lo: int, hi: int, window: int) -> float | None:
    before = counts[max(0, lo - window):lo]
    after = counts[hi + 1:hi + 1 + window]
    n_before = min(len(before), window // 2)
    n_after = min(len(after), window - n_before)
    n_before = min(len(before), window - n_after)
    sample = before[len(before) - n_before:] + after[:n_after]
    return median(sample) if sample else None


def detect_gaps(series: TimeSeries, window: int = 8, threshold: float = 0.25) -> GapList:
    """Find maximal runs of intervals far below the surrounding activity.

    An interval is low when its count is under ``threshold`` times the median
    of the ``window`` nearest intervals outside the candidate run. Candidate
    runs are seeded from single low intervals, grown while their neighbours
    are also low against the run's own baseline, merged when they touch, and
    kept only if every interval in the final run is low.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if not 0 < threshold < 1:
        raise ValueError("threshold must be in (0, 1)")
    counts = list(series.counts)
    result = GapList()
    if len(counts) < window:
        result.too_short = True
        logger.warning("series of %d intervals is shorter than window %d", len(counts), window)
        return result

    def low(i: int, lo: int, hi: int) -> bool:
        base = _outside_median(counts, lo, hi, window)
        return base is not None and base > 0 and counts[i] < threshold * base

    runs: list[list[int]] = []
    for i in range(len(counts)):
        if low(i, i, i):
            if runs and runs[-1][1] == i - 1:
                runs[-1][1] = i
            else:
                runs.append([i, i])

    changed = True
    while changed:
        changed = False
        for run in runs:
            while run[0] > 0 and low(run[0] - 1, run[0], run[1]):
                run[0] -= 1
                changed = True
            while run[1] < len(counts) - 1 and low(run[1] + 1, run[0], run[1]):
                run[1] += 1
                changed = True
        merged: list[list[int]] = []
        for run in sorted(runs):
            if merged and run[0] <= merged[-1][1] + 1:
                merged[-1][1] = max(merged[-1][1], run[1])
                changed = True
            else:
                merged.append(run)
        runs = merged

    for lo, hi in runs:
        base = _outside_median(counts, lo, hi, window)
        if base is None or base <= 0:
            continue
        if all(counts[i] < threshold * base for i in range(lo, hi + 1)):
            observed = sum(counts[lo:hi + 1])
            result.append(Gap(lo, hi, observed / (base * (hi - lo + 1)), float(base)))
    return result


def parse_duration(text: str) -> timedelta:
    """Parse ``"15m"``, ``"1h"``, ``"30s"``, ``"2d"`` or a bare number of seconds."""
    text = text.strip().lower()
    units = {"s": 1, "m": 60, "h": 3600, "d": 86400}
    if text and text[-1] in units:
        return timedelta(seconds=float(text[:-1]) * units[text[-1]])
    return timedelta(seconds=float(text))


__all__ = [
    "Dataset",
    "Gap",
    "GapList",
    "OverlapReport",
    "TimeSeries",
    "Tweet",
    "activity_timeline",
    "dataset_overlap",
    "detect_gaps",
    "parse_dataset",
    "parse_duration",
    "parse_timestamp",
    "read_dataset",
    "tweet_from_json",
    "write_dataset",
]
