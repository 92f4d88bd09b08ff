"""Composite queries built from elementary demand queries.

* delta queries and their generalised form count the weight of bids that
  sit on a given hyperplane ``p_1 = q_1`` below ``q``;
* existence queries combine ``2^(n-1)`` generalised delta queries by
  inclusion-exclusion to read off the weight of the bid at ``q``;
* super queries sample one price inside every cell of the unit ball
  around an integral point, which pins down demand on the whole open
  ball (see :mod:`sslearn.cells`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import cells
from .arrangement import Hyperplane
from .core import Bundle, Point, discrete_convex_hull, to_point


class OutOfRange(ValueError):
    pass


def _offsets(n: int) -> list[Fraction]:
    """Perturbation sizes: ``1/(2n)`` for good 1, ``1/(2(n-i+1))`` for good i >= 2."""
    return [Fraction(1, 2 * n)] + [Fraction(1, 2 * (n - i + 1)) for i in range(2, n + 1)]


def _integral(q: Sequence) -> tuple[int, ...]:
    out = []
    for v in q:
        f = Fraction(v)
        if f.denominator != 1:
            raise ValueError(f"expected an integral point, got {tuple(map(str, q))}")
        out.append(int(f))
    return tuple(out)


def generalized_delta_points(q: Sequence[int], subset=()) -> tuple[Point, Point]:
    """Return ``(q-(S), q+(S))`` for integral ``q`` and ``S`` a subset of goods ``2..n``.

    Goods in ``S`` are pushed down by ``1/(2(n-i+1))``, the other goods
    ``i >= 2`` are pushed up by the same amount and good 1 moves by
    ``-/+ 1/(2n)``.
    """
    q = _integral(q)
    n = len(q)
    subset = set(subset)
    if any(g < 2 or g > n for g in subset):
        raise ValueError(f"subset must contain goods from 2..{n}, got {sorted(subset)}")
    off = _offsets(n)
    mid = [Fraction(q[0])] + [
        q[i - 1] - off[i - 1] if i in subset else q[i - 1] + off[i - 1] for i in range(2, n + 1)
    ]
    minus = (mid[0] - off[0],) + tuple(mid[1:])
    plus = (mid[0] + off[0],) + tuple(mid[1:])
    return minus, plus


def delta_points(q: Sequence[int]) -> tuple[Point, Point]:
    return generalized_delta_points(q, ())


def generalized_delta_query(oracle, q: Sequence[int], subset=(), category: str = "delta") -> int:
    """Drop in demand for good 1 between ``q-(S)`` and ``q+(S)`` (two queries)."""
    minus, plus = generalized_delta_points(q, subset)
    x_minus, x_plus = oracle.query_many([minus, plus], category)
    return x_minus[0] - x_plus[0]


def delta_query(oracle, q: Sequence[int], category: str = "delta") -> int:
    return generalized_delta_query(oracle, q, (), category)


def _nonempty_subsets(n: int):
    goods = range(2, n + 1)
    for size in range(1, n):
        yield from itertools.combinations(goods, size)


def existence_from_deltas(n: int, delta) -> int:
    """Weight of the bid at ``q`` given ``delta(S)`` for every ``S``."""
    total = delta(())
    for s in _nonempty_subsets(n):
        total -= (-1) ** (len(s) + 1) * delta(s)
    return total


def existence_query(oracle, p: Sequence[int], category: str = "existence") -> int:
    """Weight of the bid at integral ``p`` (0 if none); costs ``2^n`` queries."""
    p = _integral(p)
    return existence_from_deltas(len(p), lambda s: generalized_delta_query(oracle, p, s, category))


# --------------------------------------------------------------------------
# super queries


@dataclass(frozen=True)
class SuperQueryRecord:
    """Bundles demanded in each of the ``2^n * n!`` cells around ``center``."""

    center: tuple
    cells: dict

    @property
    def n(self) -> int:
        return len(self.center)

    def offset(self, p: Sequence) -> tuple[Fraction, ...]:
        return tuple(Fraction(v) - c for v, c in zip(p, self.center))

    def bundle_at(self, p: Sequence) -> Bundle:
        """Bundle at a price interior to one cell of the record."""
        return self.cells[cells.locate(self.offset(p))]


def super_query_points(p: Sequence[int]) -> list[tuple[tuple, tuple, Point]]:
    """``(a, order, price)`` for the representative of every cell around ``p``."""
    p = _integral(p)
    out = []
    for key in cells.cell_keys(len(p)):
        d = cells.representative(key)
        out.append((key[0], key[1], tuple(pi + di for pi, di in zip(p, d))))
    return out


def super_query(oracle, p: Sequence[int], category: str = "super") -> SuperQueryRecord:
    p = _integral(p)
    pts = super_query_points(p)
    bundles = oracle.query_many([pt for _, _, pt in pts], category)
    return SuperQueryRecord(p, {(a, order): b for (a, order, _), b in zip(pts, bundles)})


def _cells_around(rec: SuperQueryRecord, p: Sequence) -> list:
    d = rec.offset(p)
    if any(abs(v) >= 1 for v in d):
        raise OutOfRange(f"{tuple(map(str, p))} is not within distance 1 of {rec.center}")
    return cells.containing(d)


def local_demand(rec: SuperQueryRecord, p: Sequence) -> frozenset:
    """Demand set at any ``p`` with ``|p - center|_inf < 1``, read from the record."""
    keys = _cells_around(rec, to_point(p))
    bundles = {rec.cells[k] for k in keys}
    if len(keys) == 1:
        return frozenset(bundles)
    return discrete_convex_hull(bundles)


def _to_hyperplane(rec: SuperQueryRecord, raw: tuple[int, int, int]) -> Hyperplane:
    i, j, c = raw
    ci = rec.center[i - 1]
    cj = rec.center[j - 1] if j else 0
    return Hyperplane(i, j, c + ci - cj)


def facets_at(rec: SuperQueryRecord, p: Sequence) -> frozenset:
    """Hyperplanes through ``p`` across which demand changes next to ``p``.

    A hyperplane qualifies when two cells whose closures contain ``p``
    share a wall on it and hold different bundles.
    """
    keys = set(_cells_around(rec, to_point(p)))
    found = set()
    for key in keys:
        for raw, nb in cells.walls(key):
            if nb in keys and rec.cells[key] != rec.cells[nb]:
                found.add(_to_hyperplane(rec, raw))
    return frozenset(found)


def local_facets(rec: SuperQueryRecord) -> frozenset:
    """Hyperplanes of the facets through the centre of the record."""
    return facets_at(rec, rec.center)


def existence_from_record(rec: SuperQueryRecord) -> int:
    """Simulated existence query at the centre; no further oracle calls."""
    n = rec.n

    def delta(s):
        minus, plus = generalized_delta_points(rec.center, s)
        return rec.bundle_at(minus)[0] - rec.bundle_at(plus)[0]

    return existence_from_deltas(n, delta)
