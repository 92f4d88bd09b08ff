"""Learning bid lists with positive and negative weights.

The learner grows an arrangement of hyperplanes, starting from the faces
of the box ``[0, M]^n``, and super-queries every vertex.  While two
query points share a cell of the arrangement yet demand different
bundles, the segment between them crosses a facet of the demand
complex that is still missing: a binary search narrows the crossing
down, a super query near it reveals the facet, and its hyperplane joins
the arrangement.  Once no such pair is left every bid sits on a vertex
and its weight is read off the stored super query.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, Hyperplane, box_hyperplanes
from .core import Bid, BidList, ceil_point, normalize, to_point
from .oracle import demand_nonmarginal_many, find_magnitude
from .queries import existence_from_record, facets_at, super_query


class NoFacetFound(RuntimeError):
    pass


class LimitExceeded(RuntimeError):
    pass


@dataclass
class Limits:
    """Safety limits; ``None`` picks a default from ``n`` and ``M``."""

    max_hyperplanes: int | None = None
    max_vertices: int = 10**6


def hyperplane_capacity(n: int, M: int) -> int:
    """Number of integral planes that can carry a facet of a list in ``[0, M]^n``."""
    return n * (M + 1) + n * (n - 1) // 2 * (2 * M + 1)


# --------------------------------------------------------------------------
# segments


def _breakpoints(q: Sequence[Fraction], r: Sequence[Fraction]) -> list[Fraction]:
    """Parameters ``t`` in (0, 1) where ``q + t(r - q)`` meets an integral plane."""
    n = len(q)
    ext_q = (Fraction(0),) + tuple(q)
    ext_r = (Fraction(0),) + tuple(r)
    ts = set()
    for i in range(1, n + 1):
        for j in range(i):
            a = ext_q[i] - ext_q[j]
            b = ext_r[i] - ext_r[j]
            if a == b:
                continue
            lo, hi = min(a, b), max(a, b)
            for k in range(math.floor(lo), math.ceil(hi) + 1):
                t = (k - a) / (b - a)
                if 0 < t < 1:
                    ts.add(t)
    return sorted(ts)


def _along(q, r, t: Fraction) -> tuple[Fraction, ...]:
    return tuple(a + t * (b - a) for a, b in zip(q, r))


def binary_search_refine(oracle, q, r, xq=None, xr=None):
    """Close pair ``(s, s2)`` on the segment ``[q, r]`` with different demand.

    ``q`` and ``r`` must be non-marginal with different bundles.  The
    segment is cut at every crossing with an integral plane; demand is
    constant between consecutive crossings, so a binary search over those
    pieces finds two neighbours with different bundles.  The returned
    points lie in those pieces, at L-inf distance below 1/4, and are
    non-marginal for every integral bid list.

    Returns ``((s, x), (s2, x2))``.
    """
    q, r = to_point(q), to_point(r)
    if xq is None:
        xq = oracle.query(q, "search")
    if xr is None:
        xr = oracle.query(r, "search")
    if xq == xr:
        raise ValueError("the two points demand the same bundle")
    if max(abs(a - b) for a, b in zip(q, r)) < Fraction(1, 4):
        return (q, xq), (r, xr)
    ts = _breakpoints(q, r)
    bounds = [Fraction(0)] + ts + [Fraction(1)]
    lo, hi = 0, len(ts)
    blo, bhi = xq, xr
    while hi - lo > 1:
        mid = (lo + hi) // 2
        x = oracle.query(_along(q, r, (bounds[mid] + bounds[mid + 1]) / 2), "search")
        if x != blo:
            hi, bhi = mid, x
        else:
            lo = mid
    # pieces lo and hi meet at t* = bounds[hi]
    t_star = bounds[hi]
    span = max(abs(a - b) for a, b in zip(q, r))
    step = min(
        (t_star - bounds[lo]) / 2,
        (bounds[hi + 1] - t_star) / 2,
        Fraction(1, 16) / span,
    )
    s = _along(q, r, t_star - step)
    s2 = _along(q, r, t_star + step)
    return (s, blo), (s2, bhi)


def intersection_lambda(s, s2, i: int, j: int) -> tuple[Fraction, ...] | None:
    """Point of the segment ``[s, s2]`` where ``p_i - p_j`` is an integer.

    Goods are numbered ``0..n`` with ``p_0 = 0``.  The segment must be
    short enough that at most one integer value is crossed.
    """
    if i == j:
        raise ValueError("need two distinct goods")
    s, s2 = to_point(s), to_point(s2)

    def val(p):
        pi = p[i - 1] if i else Fraction(0)
        pj = p[j - 1] if j else Fraction(0)
        return pi - pj

    a, b = val(s), val(s2)
    if a == b:
        return s if a.denominator == 1 else None
    lo, hi = min(a, b), max(a, b)
    ks = range(math.ceil(lo), math.floor(hi) + 1)
    if len(ks) == 0:
        return None
    if len(ks) > 1:
        raise ValueError("segment crosses more than one integral value")
    t = (ks[0] - a) / (b - a)
    return _along(s, s2, t)


def _plane_through(p, i: int, j: int) -> Hyperplane:
    pi = p[i - 1] if i else Fraction(0)
    pj = p[j - 1] if j else Fraction(0)
    c = int(pi - pj)
    if i == 0:
        return Hyperplane.axis(j, -c)
    return Hyperplane.diff(i, j, c)


def candidate_pairs(n: int) -> list[tuple[int, int]]:
    """Ordered distinct pairs of goods, axis pairs first."""
    axis = [(i, 0) for i in range(1, n + 1)] + [(0, i) for i in range(1, n + 1)]
    rest = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return axis + rest


def find_separating_hyperplane(oracle, q, r, xq=None, xr=None, known=None, records=None) -> Hyperplane:
    """Hyperplane of a demand facet crossing the segment between witnesses.

    ``known`` is a collection of hyperplanes to skip; ``records`` caches
    super queries by centre and is updated in place.
    """
    known = known if known is not None else ()
    records = records if records is not None else {}
    (s, _), (s2, _) = binary_search_refine(oracle, q, r, xq, xr)
    n = len(s)
    tried = set()
    for i, j in candidate_pairs(n):
        p = intersection_lambda(s, s2, i, j)
        if p is None:
            continue
        h = _plane_through(p, i, j)
        if h in tried or h in known:
            continue
        tried.add(h)
        centre = ceil_point(p)
        if centre not in records:
            records[centre] = super_query(oracle, centre)
        if h in facets_at(records[centre], p):
            return h
    raise NoFacetFound(f"no facet found between {tuple(map(str, s))} and {tuple(map(str, s2))}")


# --------------------------------------------------------------------------
# the learner


@dataclass
class GeneralRun:
    """Outcome of :func:`learn_general_run`."""

    bids: BidList
    arrangement: Arrangement
    magnitude: int


def learn_general_run(oracle, limits: Limits | None = None, magnitude: int | None = None) -> GeneralRun:
    limits = limits or Limits()
    n = oracle.n
    M = find_magnitude(oracle) if magnitude is None else magnitude
    max_h = limits.max_hyperplanes
    if max_h is None:
        max_h = hyperplane_capacity(n, M)
    records: dict = {}
    arr = Arrangement(n, M)

    def visit(vertices):
        if len(arr.vertices) > limits.max_vertices:
            raise LimitExceeded(f"more than {limits.max_vertices} vertices")
        for v in vertices:
            if v not in records:
                records[v] = super_query(oracle, v)
            arr.add_record(records[v])

    def insert(h):
        if len(arr) >= max_h:
            raise LimitExceeded(f"more than {max_h} hyperplanes")
        return arr.add_hyperplane(h)

    for h in box_hyperplanes(n, M):
        insert(h)
    visit(sorted(arr.vertices))
    while True:
        pair = arr.find_witnesses()
        if pair is None:
            break
        (q, xq), (r, xr) = pair
        h = find_separating_hyperplane(oracle, q, r, xq, xr, known=arr, records=records)
        visit(insert(h))
    bids = []
    for v in sorted(arr.vertices):
        w = existence_from_record(arr.records[v])
        if w:
            bids.append(Bid(v, w))
    return GeneralRun(normalize(bids, n=n), arr, M)


def learn_general_bids(oracle, limits: Limits | None = None, magnitude: int | None = None) -> BidList:
    """Recover a hidden valid bid list (weights of either sign)."""
    return learn_general_run(oracle, limits, magnitude).bids


def random_nonmarginal_price(rng: random.Random, n: int, lo: int, hi: int, grain: int = 1024):
    """Random price in ``[lo, hi]^n`` avoiding every integral plane.

    Fractional parts are distinct multiples of ``1/grain``, never zero.
    """
    fracs = rng.sample(range(1, grain), n)
    return tuple(Fraction(rng.randint(lo, hi - 1)) + Fraction(f, grain) for f in fracs)


def verify_learned(oracle, learnt: BidList, trials: int = 1000, seed: int = 0, magnitude: int | None = None) -> bool:
    """Compare ``learnt`` with the oracle at random non-marginal prices."""
    if trials <= 0:
        return True
    rng = random.Random(seed)
    M = max(learnt.magnitude, find_magnitude(oracle) if magnitude is None else magnitude)
    points = [random_nonmarginal_price(rng, oracle.n, -1, M + 1) for _ in range(trials)]
    answers = oracle.query_many(points, "other")
    return demand_nonmarginal_many(learnt, points) == answers
