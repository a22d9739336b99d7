"""Per-dataset feature counts and the pairwise delta report."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import asdict, dataclass, fields
from typing import Any

from twinnet.ingest import Dataset

COUNT_FIELDS = (
    "tweet_count",
    "retweet_count",
    "quote_count",
    "reply_count",
    "tweets_with_hashtags",
    "tweets_with_urls",
    "tweets_with_mentions",
    "author_count",
    "hashtag_uses",
    "unique_hashtags",
    "url_uses",
    "unique_urls",
    "mention_uses",
    "unique_mentioned",
)

TOP_FIELDS = (
    "most_prolific_author",
    "most_retweeted_tweet",
    "most_replied_to_tweet",
    "most_mentioned_account",
    "most_used_hashtag",
    "next_most_used_hashtag",
    "most_used_url",
)


@dataclass(frozen=True)
class DatasetStats:
    """Absolute counts and highest-count items for one dataset.

    Each ``most_*`` field is a ``(key, count)`` pair, or ``None`` when the
    dataset has nothing of that kind.
    """

    tweet_count: int = 0
    retweet_count: int = 0
    quote_count: int = 0
    reply_count: int = 0
    tweets_with_hashtags: int = 0
    tweets_with_urls: int = 0
    tweets_with_mentions: int = 0
    author_count: int = 0
    hashtag_uses: int = 0
    unique_hashtags: int = 0
    url_uses: int = 0
    unique_urls: int = 0
    mention_uses: int = 0
    unique_mentioned: int = 0
    most_prolific_author: tuple[str, int] | None = None
    most_retweeted_tweet: tuple[str, int] | None = None
    most_replied_to_tweet: tuple[str, int] | None = None
    most_mentioned_account: tuple[str, int] | None = None
    most_used_hashtag: tuple[str, int] | None = None
    next_most_used_hashtag: tuple[str, int] | None = None
    most_used_url: tuple[str, int] | None = None

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        for name in TOP_FIELDS:
            if out[name] is not None:
                out[name] = list(out[name])
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value", "count"])
        for name in COUNT_FIELDS:
            w.writerow([name, getattr(self, name), ""])
        for name in TOP_FIELDS:
            top = getattr(self, name)
            w.writerow([name, "" if top is None else top[0], "" if top is None else top[1]])
        return buf.getvalue()


def _ranked(counter: Counter) -> list[tuple[str, int]]:
    # highest count first, ties to the lexicographically smallest key
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def _top(counter: Counter) -> tuple[str, int] | None:
    if not counter:
        return None
    return min(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def dataset_stats(d: Dataset) -> DatasetStats:
    """Count posts, interaction types and entity uses in ``d``.

    A retweet's entities count toward the usage totals. A quote that is also
    a reply increments both ``quote_count`` and ``reply_count``.
    """
    authors: Counter = Counter()
    retweeted: Counter = Counter()
    replied: Counter = Counter()
    mentioned: Counter = Counter()
    hashtags: Counter = Counter()
    urls: Counter = Counter()
    n_rt = n_quote = n_reply = with_tags = with_urls = with_mentions = 0
    for t in d:
        authors[t.author_id] += 1
        if t.retweeted_tweet_id is not None:
            n_rt += 1
            retweeted[t.retweeted_tweet_id] += 1
        if t.quoted_tweet_id is not None:
            n_quote += 1
        if t.in_reply_to_tweet_id is not None:
            n_reply += 1
            replied[t.in_reply_to_tweet_id] += 1
        if t.hashtags:
            with_tags += 1
            hashtags.update(t.hashtags)
        if t.urls:
            with_urls += 1
            urls.update(t.urls)
        if t.mentions:
            with_mentions += 1
            mentioned.update(uid for uid, _ in t.mentions)

    ranked_tags = _ranked(hashtags)
    return DatasetStats(
        tweet_count=len(d),
        retweet_count=n_rt,
        quote_count=n_quote,
        reply_count=n_reply,
        tweets_with_hashtags=with_tags,
        tweets_with_urls=with_urls,
        tweets_with_mentions=with_mentions,
        author_count=len(authors),
        hashtag_uses=sum(hashtags.values()),
        unique_hashtags=len(hashtags),
        url_uses=sum(urls.values()),
        unique_urls=len(urls),
        mention_uses=sum(mentioned.values()),
        unique_mentioned=len(mentioned),
        most_prolific_author=_top(authors),
        most_retweeted_tweet=_top(retweeted),
        most_replied_to_tweet=_top(replied),
        most_mentioned_account=_top(mentioned),
        most_used_hashtag=ranked_tags[0] if ranked_tags else None,
        next_most_used_hashtag=ranked_tags[1] if len(ranked_tags) > 1 else None,
        most_used_url=_top(urls),
    )


@dataclass(frozen=True)
class FieldDelta:
    a: int
    b: int
    difference: int
    ratio: float | None


@dataclass(frozen=True)
class TopDelta:
    a: tuple[str, int] | None
    b: tuple[str, int] | None
    differs: bool


@dataclass(frozen=True)
class DeltaReport:
    """Field-by-field comparison of two :class:`DatasetStats`.

    ``ratio`` is ``a / b`` and is ``None`` when ``b`` is zero. ``flags`` lists
    the ``most_*`` fields whose top item differs between the datasets.
    """

    counts: dict[str, FieldDelta]
    tops: dict[str, TopDelta]

    @property
    def flags(self) -> list[str]:
        return [name for name, top in self.tops.items() if top.differs]

    def to_dict(self) -> dict[str, Any]:
        return {
            "counts": {k: asdict(v) for k, v in self.counts.items()},
            "tops": {
                k: {
                    "a": None if v.a is None else list(v.a),
                    "b": None if v.b is None else list(v.b),
                    "differs": v.differs,
                }
                for k, v in self.tops.items()
            },
            "flags": self.flags,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "a", "b", "difference", "ratio"])
        for name, fd in self.counts.items():
            w.writerow([name, fd.a, fd.b, fd.difference, "" if fd.ratio is None else repr(fd.ratio)])
        for name, td in self.tops.items():
            a = "" if td.a is None else f"{td.a[0]} ({td.a[1]})"
            b = "" if td.b is None else f"{td.b[0]} ({td.b[1]})"
            w.writerow([name, a, b, "differs" if td.differs else "same", ""])
        return buf.getvalue()


def stats_delta(a: DatasetStats, b: DatasetStats) -> DeltaReport:
    counts = {}
    for name in COUNT_FIELDS:
        va, vb = getattr(a, name), getattr(b, name)
        counts[name] = FieldDelta(va, vb, va - vb, va / vb if vb else None)
    tops = {}
    for name in TOP_FIELDS:
        ta, tb = getattr(a, name), getattr(b, name)
        ka = None if ta is None else ta[0]
        kb = None if tb is None else tb[0]
        tops[name] = TopDelta(ta, tb, ka != kb)
    return DeltaReport(counts, tops)


def stats_from_dict(data: dict[str, Any]) -> DatasetStats:
    kwargs = {}
    for f in fields(DatasetStats):
        v = data.get(f.name)
        kwargs[f.name] = tuple(v) if f.name in TOP_FIELDS and v is not None else v
    return DatasetStats(**kwargs)
