"""Demand correspondence of a bid list and an instrumented demand oracle.

Demand at a batch of prices is evaluated with integer numpy arrays: all
prices are brought to a common denominator ``D`` and compared against
``D * b`` exactly.  When the scaled values would not fit comfortably in
``int64`` the arrays fall back to Python integers (``dtype=object``).
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import cells
from .core import (
    MINUS_INFINITY,
    Bid,
    BidList,
    Bundle,
    DimensionMismatch,
    Instance,
    Point,
    discrete_convex_hull,
    to_point,
)

CATEGORIES = ("delta", "existence", "super", "search", "other")


class MarginalPrice(ValueError):
    """Raised when a price at which some bid is indifferent is used as non-marginal."""


class UpperBoundTooSmall(ValueError):
    pass


class NegativeWeight(ValueError):
    pass


# --------------------------------------------------------------------------
# single bids


def bid_demanded_goods(b: Bid | Sequence[int], p: Sequence) -> frozenset:
    """Goods in ``0..n`` maximising ``b_i - p_i`` (with ``b_0 = p_0 = 0``)."""
    vec = b.vector if isinstance(b, Bid) else tuple(b)
    if len(vec) != len(p):
        raise DimensionMismatch(f"bid has {len(vec)} entries but price has {len(p)}")
    values = [Fraction(0)] + [Fraction(bi) - Fraction(pi) for bi, pi in zip(vec, p)]
    best = max(values)
    return frozenset(i for i, v in enumerate(values) if v == best)


# --------------------------------------------------------------------------
# batched evaluation


def _scaled(bids: BidList, points: Sequence[Sequence]):
    """Scale ``points`` and bid vectors to a common integer grid.

    Returns ``(V, P)`` where ``V`` is ``(B, n)`` and ``P`` is ``(K, n)``.
    """
    pts = [to_point(p) for p in points]
    for p in pts:
        if len(p) != bids.n:
            raise DimensionMismatch(f"price {p} does not have {bids.n} entries")
    d = math.lcm(*(v.denominator for p in pts for v in p)) if pts and bids.n else 1
    nums = [[v.numerator * (d // v.denominator) for v in p] for p in pts]
    bound = max([abs(x) for row in nums for x in row] + [bids.magnitude * d, 1])
    dtype = np.int64 if bound < 2**60 else object
    P = np.array(nums, dtype=dtype).reshape(len(pts), bids.n)
    V = bids.vectors.astype(dtype) * d if dtype is np.int64 else np.array(
        [[int(x) * d for x in b.vector] for b in bids.bids], dtype=object
    ).reshape(len(bids), bids.n)
    return V, P


def _surplus(bids: BidList, points: Sequence[Sequence]) -> np.ndarray:
    """``(K, B, n+1)`` array of scaled ``b_i - p_i`` with the reject good first."""
    V, P = _scaled(bids, points)
    diff = V[None, :, :] - P[:, None, :]
    zero = np.zeros(diff.shape[:2] + (1,), dtype=diff.dtype)
    return np.concatenate([zero, diff], axis=2)


def _argmax_mask(bids: BidList, points: Sequence[Sequence]) -> np.ndarray:
    s = _surplus(bids, points)
    return s == s.max(axis=2, keepdims=True)


def _bundles_from_choice(bids: BidList, onehot: np.ndarray) -> list[Bundle]:
    w = bids.weights
    if w.dtype == object:
        onehot = onehot.astype(object)
    else:
        onehot = onehot.astype(np.int64)
    totals = (onehot * w[None, :, None]).sum(axis=1)
    return [tuple(int(x) for x in row[1:]) for row in totals]


def marginal_flags(bids: BidList, points: Sequence[Sequence]) -> list[bool]:
    if not len(bids) or not len(points):
        return [False] * len(points)
    mask = _argmax_mask(bids, points)
    return [bool(x) for x in (mask.sum(axis=2) > 1).any(axis=1)]


def is_marginal(bids: BidList, p: Sequence) -> bool:
    """True iff some bid is indifferent between two goods at ``p``."""
    return marginal_flags(bids, [p])[0]


def demand_nonmarginal_many(bids: BidList, points: Sequence[Sequence]) -> list[Bundle]:
    if not len(points):
        return []
    if not len(bids):
        for p in points:
            if len(p) != bids.n:
                raise DimensionMismatch(f"price {tuple(p)} does not have {bids.n} entries")
        return [(0,) * bids.n for _ in points]
    mask = _argmax_mask(bids, points)
    bad = (mask.sum(axis=2) > 1).any(axis=1)
    if bad.any():
        k = int(np.argmax(bad))
        raise MarginalPrice(f"price {tuple(map(str, points[k]))} is marginal")
    return _bundles_from_choice(bids, mask)


def demand_nonmarginal(bids: BidList, p: Sequence) -> Bundle:
    """Unique bundle demanded at a non-marginal price."""
    return demand_nonmarginal_many(bids, [p])[0]


def demand_with_priority(bids: BidList, points: Sequence[Sequence], priority: Sequence[int]) -> list[Bundle]:
    """Demand where each bid breaks ties towards the good listed first in ``priority``.

    Equivalent to evaluating demand at ``p + t * r`` for a tiny ``t > 0``
    with ``r_g = rank(g) - rank(0)``, hence always an element of ``D(p)``.
    """
    if not len(points):
        return []
    if not len(bids):
        return [(0,) * bids.n for _ in points]
    n = bids.n
    rank = np.empty(n + 1, dtype=np.int64)
    for pos, g in enumerate(priority):
        rank[g] = pos
    mask = _argmax_mask(bids, points)
    score = np.where(mask, (n + 1) - rank[None, None, :], -1)
    choice = score.argmax(axis=2)
    onehot = np.zeros(mask.shape, dtype=bool)
    np.put_along_axis(onehot, choice[:, :, None], True, axis=2)
    return _bundles_from_choice(bids, onehot)


def local_offsets(p: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
    """Points arbitrarily close to ``p``, one inside each local cell.

    Representative offsets of the unit-ball cells are shrunk by
    ``1/(4D)`` where ``D`` is the common denominator of ``p``; that keeps
    them clear of every integral hyperplane not passing through ``p``.
    """
    p = to_point(p)
    n = len(p)
    d = math.lcm(*(v.denominator for v in p)) if n else 1
    shrink = Fraction(1, 4 * d)
    return [
        tuple(pi + shrink * oi for pi, oi in zip(p, cells.representative(key)))
        for key in cells.cell_keys(n)
    ]


def demand_set(bids: BidList, p: Sequence) -> frozenset:
    """The demand correspondence ``D_B(p)`` (small instances only).

    Collects the bundles demanded in every local cell around ``p`` and
    returns their discrete convex hull.
    """
    p = to_point(p)
    if not is_marginal(bids, p):
        return frozenset([demand_nonmarginal(bids, p)])
    bundles = set(demand_nonmarginal_many(bids, local_offsets(p)))
    return discrete_convex_hull(bundles)


# --------------------------------------------------------------------------
# the oracle


@dataclass
class QueryLedger:
    """Counts demand queries, split by category."""

    by_category: Counter = field(default_factory=Counter)

    def __post_init__(self):
        self._lock = threading.Lock()

    def record(self, category: str, count: int = 1) -> None:
        if category not in CATEGORIES:
            raise ValueError(f"unknown query category {category!r}")
        with self._lock:
            self.by_category[category] += count

    @property
    def demand_queries(self) -> int:
        return sum(self.by_category.values())

    total = demand_queries

    def snapshot(self) -> dict:
        out = {c: self.by_category.get(c, 0) for c in CATEGORIES}
        out["total"] = self.total
        return out

    def reset(self) -> None:
        with self._lock:
            self.by_category.clear()


class DemandOracle:
    """Adversarial demand oracle for a hidden bid list.

    At marginal prices each bid resolves its tie towards the good that
    comes first in ``priority`` (a permutation of ``0..n``; default: reject
    first, then ascending goods).  Every answered price is counted in
    ``ledger``.
    """

    def __init__(self, bids: BidList | Instance, priority: Sequence[int] | None = None):
        if isinstance(bids, Instance):
            bids = bids.bidlist
        self._bids = bids
        self.n = bids.n
        if priority is None:
            priority = tuple(range(self.n + 1))
        priority = tuple(int(g) for g in priority)
        if sorted(priority) != list(range(self.n + 1)):
            raise ValueError(f"priority must be a permutation of 0..{self.n}")
        self.priority = priority
        self.ledger = QueryLedger()

    @property
    def instance(self) -> Instance:
        return Instance(self._bids)

    def query(self, p: Sequence, category: str = "other") -> Bundle:
        return self.query_many([p], category)[0]

    def query_many(self, points: Sequence[Sequence], category: str = "other") -> list[Bundle]:
        """Answer several prices; the ledger grows by ``len(points)``."""
        out = demand_with_priority(self._bids, points, self.priority)
        self.ledger.record(category, len(points))
        return out


def query(oracle: DemandOracle, p: Sequence, category: str = "other") -> Bundle:
    return oracle.query(p, category)


def find_magnitude(oracle, upper: int | None = None) -> int:
    """Smallest ``m`` with empty demand just above ``(m + 1/2) * (1, ..., 1)``.

    The probe adds ``k * eps`` to coordinate ``k`` (``eps = 1/(4n(n+1))``)
    so that no bid is ever indifferent at it.  Galloping search over
    ``m = 0, 1, 3, 7, ...`` followed by bisection costs
    ``2 * ceil(log2(M + 1))`` queries (one when ``M = 0``).
    """
    n = oracle.n
    half = Fraction(1, 2)
    eps = cells.epsilon(n) if n else Fraction(0)

    def empty(m: int) -> bool:
        bundle = oracle.query(tuple(m + half + k * eps for k in range(1, n + 1)), "other")
        return not any(bundle)

    lo, hi = -1, None
    k = 0
    while hi is None:
        m = 2**k - 1
        if upper is not None:
            m = min(m, upper)
        if empty(m):
            hi = m
        else:
            if upper is not None and m >= upper:
                raise UpperBoundTooSmall(f"demand is nonempty at ({upper}+1/2)*1")
            lo = m
        k += 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if empty(mid):
            hi = mid
        else:
            lo = mid
    return hi


# --------------------------------------------------------------------------
# valuations of positive bid lists


def valuation_positive(bids: BidList, x: Sequence[int]):
    """Value of bundle ``x`` to a list of positive bids.

    Each unit bid is assigned to one good in ``0..n``; the value is the
    best total of ``b_{i(b)}`` over assignments handing out exactly ``x``.
    Returns ``MINUS_INFINITY`` when no assignment exists.
    """
    if any(b.weight < 0 for b in bids):
        raise NegativeWeight("valuation_positive only accepts positive bid lists")
    x = tuple(int(v) for v in x)
    if len(x) != bids.n:
        raise DimensionMismatch(f"bundle {x} does not have {bids.n} entries")
    if any(v < 0 for v in x):
        return MINUS_INFINITY
    units = [b.vector for b in bids for _ in range(b.weight)]
    if sum(x) > len(units):
        return MINUS_INFINITY
    n = bids.n

    @lru_cache(maxsize=None)
    def best(k: int, rest: tuple):
        left = len(units) - k
        total = sum(rest)
        if total > left:
            return None
        if k == len(units):
            return 0
        vec = units[k]
        out = None
        if total < left:
            out = best(k + 1, rest)
        for g in range(n):
            if rest[g] > 0:
                sub = best(k + 1, rest[:g] + (rest[g] - 1,) + rest[g + 1 :])
                if sub is not None and (out is None or vec[g] + sub > out):
                    out = vec[g] + sub
        return out

    value = best(0, x)
    return MINUS_INFINITY if value is None else Fraction(value)
