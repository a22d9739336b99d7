"""Synthetic tweet streams for testing and demos.

Activity and popularity follow Zipf-like weights so the resulting networks
have hubs, a giant component and a tail of small components, roughly like
real hashtag collections.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence

import numpy as np

from twinnet.ingest import Dataset, Tweet

DEFAULT_START = 1_546_300_800  # 2019-01-01T00:00:00Z


def _zipf_weights(n: int, exponent: float) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** exponent
    return w / w.sum()


def generate_tweets(
    n_tweets: int,
    n_accounts: int | None = None,
    start: int = DEFAULT_START,
    duration: int = 86_400,
    seed: int = 0,
    p_retweet: float = 0.5,
    p_reply: float = 0.12,
    p_quote: float = 0.05,
    mention_rate: float = 0.6,
    n_hashtags: int = 200,
    n_urls: int = 300,
) -> list[Tweet]:
    """Generate ``n_tweets`` time-ordered tweets spread uniformly over ``duration`` seconds."""
    rng = np.random.default_rng(seed)
    if n_accounts is None:
        n_accounts = max(10, n_tweets // 5)
    accounts = [f"u{i}" for i in range(n_accounts)]
    activity = _zipf_weights(n_accounts, 0.8)
    popularity = rng.permutation(_zipf_weights(n_accounts, 1.1))

    times = np.sort(rng.integers(start, start + duration, size=n_tweets))
    authors = rng.choice(n_accounts, size=n_tweets, p=activity)
    kinds = rng.random(n_tweets)
    targets_pool = rng.choice(n_accounts, size=4 * n_tweets + 8, p=popularity)
    tag_weights = _zipf_weights(n_hashtags, 1.0)
    url_weights = _zipf_weights(n_urls, 1.0)
    n_mentions = rng.poisson(mention_rate, size=n_tweets)
    n_tags = rng.poisson(0.7, size=n_tweets)
    has_url = rng.random(n_tweets) < 0.3
    tag_pool = rng.choice(n_hashtags, size=int(n_tags.sum()), p=tag_weights).tolist()
    url_pool = rng.choice(n_urls, size=int(has_url.sum()), p=url_weights).tolist()
    uniform = rng.random((n_tweets, 3))

    tweets: list[Tweet] = []
    originals: list[int] = []
    pool_pos = tag_pos = url_pos = 0
    for i in range(n_tweets):
        tid = str(1_000_000_000_000 + i)
        author = accounts[authors[i]]
        created = int(times[i])
        kind = kinds[i]
        if originals and kind < p_retweet:
            src = tweets[originals[int(uniform[i, 0] * len(originals))]]
            mentions = ((src.author_id, "n" + src.author_id),) + src.mentions
            tweets.append(
                Tweet(
                    tid, author, "n" + author, created, "RT " + src.text,
                    retweeted_tweet_id=src.id, retweeted_author_id=src.author_id,
                    hashtags=src.hashtags, urls=src.urls, mentions=mentions,
                )
            )
            continue
        reply_to = quote = None
        if originals and kind < p_retweet + p_reply:
            reply_to = tweets[originals[int(uniform[i, 1] * len(originals))]]
        elif originals and kind < p_retweet + p_reply + p_quote:
            quote = tweets[originals[int(uniform[i, 2] * len(originals))]]
        ment = []
        for _ in range(n_mentions[i]):
            ment.append(accounts[targets_pool[pool_pos]])
            pool_pos += 1
        if reply_to is not None:
            ment.insert(0, reply_to.author_id)
        tags = tuple(f"tag{j}" for j in tag_pool[tag_pos:tag_pos + n_tags[i]])
        tag_pos += n_tags[i]
        urls = ()
        if has_url[i]:
            urls = (f"https://example.org/{url_pool[url_pos]}",)
            url_pos += 1
        tweets.append(
            Tweet(
                tid, author, "n" + author, created, f"post {i}",
                in_reply_to_tweet_id=None if reply_to is None else reply_to.id,
                in_reply_to_author_id=None if reply_to is None else reply_to.author_id,
                quoted_tweet_id=None if quote is None else quote.id,
                hashtags=tags, urls=urls,
                mentions=tuple((m, "n" + m) for m in ment),
            )
        )
        originals.append(i)
    return tweets


def generate_dataset(n_tweets: int, label: str = "synthetic", **kwargs) -> Dataset:
    return Dataset.from_tweets(label, generate_tweets(n_tweets, **kwargs))


def random_subset(d: Dataset, fraction: float, seed: int = 0, label: str | None = None) -> Dataset:
    """Keep each tweet independently with probability ``fraction``."""
    rng = np.random.default_rng(seed)
    keep = rng.random(len(d)) < fraction
    return Dataset.from_tweets(label or d.label, (t for t, k in zip(d, keep) if k))


def drop_windows(d: Dataset, windows: Iterable[tuple[int, int]], label: str | None = None) -> Dataset:
    """Remove tweets with ``start <= created_at < end`` for every window."""
    windows = list(windows)
    return d.subset(
        lambda t: not any(s <= t.created_at < e for s, e in windows), label or d.label
    )


def steady_stream(
    per_hour: int, hours: int, start: int = DEFAULT_START, seed: int = 0, label: str = "stream"
) -> Dataset:
    """Evenly spaced posts at a constant rate, with a little jitter inside each slot."""
    rng = np.random.default_rng(seed)
    n = per_hour * hours
    step = 3600 / per_hour
    offsets = (np.arange(n) * step + rng.random(n) * step * 0.5).astype(int)
    return Dataset.from_tweets(
        label,
        (
            Tweet(str(1_000_000_000_000 + i), f"u{i % 97}", f"nu{i % 97}", start + int(o))
            for i, o in enumerate(offsets)
        ),
    )


def lines_for(tweets: Sequence[Tweet] | Dataset) -> list[str]:
    return [json.dumps(t.to_json_dict()) for t in tweets]
