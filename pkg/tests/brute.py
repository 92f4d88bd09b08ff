"""Slow reference implementations used as test oracles.

Nothing here relies on the cell decomposition or the vectorised demand
code of the package; each function follows the definitions directly
with Fractions and loops.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from sslearn.core import Bid, BidList, discrete_convex_hull, normalize


def goods(vec, p):
    vals = [Fraction(0)] + [Fraction(b) - Fraction(q) for b, q in zip(vec, p)]
    top = max(vals)
    return [g for g, v in enumerate(vals) if v == top]


def demand(bids: BidList, p):
    """Unique bundle at a non-marginal price."""
    x = [0] * bids.n
    for b in bids:
        gs = goods(b.vector, p)
        assert len(gs) == 1, f"{p} is marginal for {b}"
        if gs[0]:
            x[gs[0] - 1] += b.weight
    return tuple(x)


def neighbour_bundles(bids: BidList, p) -> set:
    """Bundles demanded at non-marginal prices arbitrarily close to ``p``.

    Moving to ``p + t d`` for generic small ``d`` makes every bid choose,
    among its tied goods, the one with the smallest ``d_g`` (``d_0 = 0``);
    only the order of ``(0, d_1, ..., d_n)`` matters.
    """
    n = bids.n
    out = set()
    for order in itertools.permutations(range(n + 1)):
        rank = {g: k for k, g in enumerate(order)}
        x = [0] * n
        for b in bids:
            g = min(goods(b.vector, p), key=lambda g: rank[g])
            if g:
                x[g - 1] += b.weight
        out.add(tuple(x))
    return out


def demand_set(bids: BidList, p) -> frozenset:
    return discrete_convex_hull(neighbour_bundles(bids, p))


def delta_weight(bids: BidList, q, subset=()) -> int:
    """Weight of bids with ``b_1 = q_1`` lying below the perturbed point ``q(S)``."""
    total = 0
    for b in bids:
        if b.vector[0] != q[0]:
            continue
        ok = True
        for i in range(2, bids.n + 1):
            limit = q[i - 1] - 1 if i in subset else q[i - 1]
            if b.vector[i - 1] > limit:
                ok = False
        if ok:
            total += b.weight
    return total


def valuation(bids: BidList, x):
    """Best assignment value of unit bids handing out exactly ``x`` (None if impossible)."""
    units = [b.vector for b in bids for _ in range(b.weight)]
    best = None
    for choice in itertools.product(range(bids.n + 1), repeat=len(units)):
        counts = [0] * bids.n
        for g in choice:
            if g:
                counts[g - 1] += 1
        if tuple(counts) != tuple(x):
            continue
        v = sum(u[g - 1] for u, g in zip(units, choice) if g)
        best = v if best is None else max(best, v)
    return best


def random_price(rng: random.Random, n: int, lo: int, hi: int, den: int = 12):
    """Random rational price, often marginal because of the small denominator."""
    return tuple(Fraction(rng.randint(lo * den, hi * den), den) for _ in range(n))


def generic_price(rng: random.Random, n: int, lo: int, hi: int):
    """Random price off every integral plane."""
    fr = rng.sample(range(1, 997), n)
    return tuple(Fraction(rng.randint(lo, hi - 1)) + Fraction(f, 997) for f in fr)


def random_list(rng: random.Random, n: int, size: int, M: int, W: int = 1, negative: bool = False) -> BidList:
    bids = []
    for _ in range(size):
        w = rng.randint(1, W)
        if negative and rng.random() < 0.4:
            w = -w
        bids.append(Bid(tuple(rng.randint(0, M) for _ in range(n)), w))
    return normalize(bids, n=n)
