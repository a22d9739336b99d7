"""Comparing two centrality rankings over their common top nodes.

The neighbourhood rank score gives each item the number of items that sit
below it in *both* rankings. Its baseline, ``m - rank_a``, is the score the
item would get if the second ranking matched the first; the score never
exceeds the baseline, and items whose lower neighbours all stay below them
remain on the diagonal of a baseline/score plot even when items above them
change places. Summed over all items the scores give the number of
concordant pairs, which ties the plot back to Kendall's tau.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache

from scipy import special

from twinnet.centrality import RankedList

ORDERS = ("truncate-first", "intersect-first")
EXACT_TAU_MAX_M = 30


@dataclass(frozen=True)
class CommonRanking:
    """Two rankings restricted to shared nodes and re-ranked densely to ``1..m``.

    ``list_sizes`` holds the lengths of the two lists after the top-k cut.
    """

    k_requested: int
    ranks_a: Mapping[str, int]
    ranks_b: Mapping[str, int]
    list_sizes: tuple[int, int] = (0, 0)

    @property
    def m(self) -> int:
        return len(self.ranks_a)

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.ranks_a, key=self.ranks_a.__getitem__))

    def paired_ranks(self) -> tuple[list[int], list[int]]:
        """Ranks in the second list, ordered by rank in the first list."""
        nodes = self.nodes
        return [self.ranks_a[v] for v in nodes], [self.ranks_b[v] for v in nodes]


def _dense(entries, keep) -> dict[str, int]:
    out = {}
    for v in entries:
        if v in keep:
            out[v] = len(out) + 1
    return out


def common_top_k(
    a: RankedList, b: RankedList, k: int = 1000, order: str = "truncate-first"
) -> CommonRanking:
    """Restrict two rankings to common nodes.

    ``truncate-first`` takes the top ``k`` of each list and keeps the nodes in
    both. ``intersect-first`` drops nodes missing from the other list, then
    takes the top ``k`` of each and intersects again.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ea, eb = list(a.entries), list(b.entries)
    if order == "intersect-first":
        shared = set(ea) & set(eb)
        ea = [v for v in ea if v in shared]
        eb = [v for v in eb if v in shared]
    elif order != "truncate-first":
        raise ValueError(f"unknown order {order!r}")
    ta, tb = ea[:k], eb[:k]
    common = set(ta) & set(tb)
    return CommonRanking(k, _dense(ta, common), _dense(tb, common), (len(ta), len(tb)))


def _count_inversions(seq: list[int]) -> int:
    """Inversions by bottom-up merge sort, O(m log m)."""
    arr = list(seq)
    n = len(arr)
    buf = [0] * n
    inversions = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, out = lo, mid, lo
            while i < mid and j < hi:
                if arr[i] <= arr[j]:
                    buf[out] = arr[i]
                    i += 1
                else:
                    buf[out] = arr[j]
                    inversions += mid - i
                    j += 1
                out += 1
            buf[out:out + mid - i] = arr[i:mid]
            out += mid - i
            buf[out:out + hi - j] = arr[j:hi]
        arr, buf = buf, arr
        width *= 2
    return inversions


def concordant_pairs(c: CommonRanking) -> tuple[int, int]:
    """``(concordant, discordant)`` pair counts; ties cannot occur after dense re-ranking."""
    _, y = c.paired_ranks()
    discordant = _count_inversions(y)
    return c.m * (c.m - 1) // 2 - discordant, discordant


@lru_cache(maxsize=None)
def _inversion_cdf(m: int) -> tuple[float, ...]:
    # Mahonian numbers: permutations of m items by inversion count
    counts = [1]
    for size in range(2, m + 1):
        nxt = [0] * (len(counts) + size - 1)
        running = 0
        for d in range(len(nxt)):
            if d < len(counts):
                running += counts[d]
            if d - size >= 0:
                running -= counts[d - size]
            nxt[d] = running
        counts = nxt
    total = math.factorial(m)
    cdf, acc = [], 0
    for cnt in counts:
        acc += cnt
        cdf.append(acc / total)
    return tuple(cdf)


def _tau_p_value(m: int, discordant: int) -> float:
    pairs = m * (m - 1) // 2
    if m <= EXACT_TAU_MAX_M:
        tail = min(discordant, pairs - discordant)
        return min(1.0, 2 * _inversion_cdf(m)[tail])
    s = pairs - 2 * discordant
    z = s / math.sqrt(m * (m - 1) * (2 * m + 5) / 18)
    return math.erfc(abs(z) / math.sqrt(2))


def kendall_tau(c: CommonRanking) -> tuple[float | None, float | None]:
    """Kendall's tau and its two-sided p-value, ``(None, None)`` when ``m < 2``.

    The p-value is exact (inversion-count distribution) for ``m <= 30`` and
    uses the normal approximation above that.
    """
    m = c.m
    if m < 2:
        return None, None
    conc, disc = concordant_pairs(c)
    tau = (conc - disc) / (m * (m - 1) / 2)
    return tau, _tau_p_value(m, disc)


def spearman_rho(c: CommonRanking) -> tuple[float | None, float | None]:
    """Spearman's rho ``1 - 6 sum(d^2) / (m (m^2 - 1))`` with a t-distribution p-value.

    The p-value is ``None`` for ``m < 3``.
    """
    m = c.m
    if m < 2:
        return None, None
    d2 = sum((c.ranks_a[v] - c.ranks_b[v]) ** 2 for v in c.ranks_a)
    rho = 1 - 6 * d2 / (m * (m * m - 1))
    if m < 3:
        return rho, None
    if abs(rho) >= 1.0:
        return rho, 0.0
    t = rho * math.sqrt((m - 2) / (1 - rho * rho))
    return rho, float(2 * special.stdtr(m - 2, -abs(t)))


@dataclass(frozen=True)
class SimilarityScore:
    tau: float | None
    tau_p_value: float | None
    rho: float | None
    rho_p_value: float | None
    n_compared: int

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "tau_p_value": self.tau_p_value,
            "rho": self.rho,
            "rho_p_value": self.rho_p_value,
            "n_compared": self.n_compared,
        }


def similarity(c: CommonRanking) -> SimilarityScore:
    tau, tp = kendall_tau(c)
    rho, rp = spearman_rho(c)
    return SimilarityScore(tau, tp, rho, rp, c.m)


def compare_rankings(
    a: RankedList, b: RankedList, k: int = 1000, order: str = "truncate-first"
) -> tuple[CommonRanking, SimilarityScore]:
    c = common_top_k(a, b, k, order)
    return c, similarity(c)


@dataclass(frozen=True, slots=True)
class RankPoint:
    node: str
    x: float
    y: float
    shade: float


def scatter_data(c: CommonRanking) -> list[RankPoint]:
    """One point per common node: ``(rank_a, rank_b)``, shaded by ``rank_a / m``."""
    m = c.m
    return [RankPoint(v, c.ranks_a[v], c.ranks_b[v], c.ranks_a[v] / m) for v in c.nodes]


def neighborhood_rank_score(c: CommonRanking) -> list[RankPoint]:
    """Points ``(baseline, score)`` per common node, in first-list order.

    ``score`` counts items ranked below the node in both lists;
    ``baseline = m - rank_a``.
    """
    m = c.m
    nodes = c.nodes
    tree = [0] * (m + 1)
    scores = {}
    # walk from the bottom of list a, counting already-seen items that are also lower in list b
    for v in reversed(nodes):
        rb = c.ranks_b[v]
        below = 0
        i = m
        while i > 0:
            below += tree[i]
            i -= i & -i
        i = rb
        while i > 0:
            below -= tree[i]
            i -= i & -i
        scores[v] = below
        i = rb
        while i <= m:
            tree[i] += 1
            i += i & -i
    return [RankPoint(v, m - c.ranks_a[v], scores[v], c.ranks_a[v] / m) for v in nodes]


def points_csv(points: list[RankPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", "x", "y", "shade"])
    for p in points:
        w.writerow([p.node, p.x, p.y, repr(p.shade)])
    return buf.getvalue()


def points_svg(points: list[RankPoint], title: str = "", size: int = 1000, margin: int = 60) -> str:
    """Grayscale scatter on a fixed ``size`` x ``size`` viewBox; darker means higher rank in list a."""
    span = size - 2 * margin
    xs = [p.x for p in points] or [0]
    ys = [p.y for p in points] or [0]
    lo = min(min(xs), min(ys))
    hi = max(max(xs), max(ys))
    scale = span / (hi - lo) if hi > lo else 0.0

    def px(v: float) -> float:
        return margin + (v - lo) * scale if scale else size / 2

    def py(v: float) -> float:
        return size - margin - (v - lo) * scale if scale else size / 2

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" '
        f'width="{size}" height="{size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" y2="{margin}" '
        'stroke="#cccccc" stroke-width="1"/>',
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" fill="none" '
        'stroke="black" stroke-width="1"/>',
    ]
    if title:
        out.append(
            f'<text x="{size / 2}" y="{margin / 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="20">{_escape(title)}</text>'
        )
    for p in points:
        g = int(round(220 * p.shade))
        out.append(
            f'<circle cx="{px(p.x):.2f}" cy="{py(p.y):.2f}" r="3" '
            f'fill="rgb({g},{g},{g})"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
