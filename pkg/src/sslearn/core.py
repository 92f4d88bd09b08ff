"""Exact arithmetic primitives and the bid-list data model.

Prices are tuples of :class:`fractions.Fraction`, bundles are tuples of
Python ints and bids carry integral vectors with signed integer weights.
Nothing in the package ever touches floating point: marginality is a
question of exact equality between differences of prices.

Coordinates are 0-indexed (``p[0]`` is the price of good 1).  Whenever a
function talks about *goods* it uses the auction numbering ``0..n`` where
good 0 is the notional reject good whose price and bid value are always 0.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction
Point = tuple  # tuple[Fraction, ...]
Bundle = tuple  # tuple[int, ...]


class MinusInfinityType:
    """The value of bundles outside the effective domain of a valuation.

    Compares below every rational and absorbs addition.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MINUS_INFINITY"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("MINUS_INFINITY")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self

    def __neg__(self):
        raise ArithmeticError("negating minus infinity is not supported")


MINUS_INFINITY = MinusInfinityType()


class DimensionMismatch(ValueError):
    pass


def to_point(values: Iterable) -> Point:
    """Convert ints, Fractions or ``"p/q"`` strings into an exact price point."""
    out = []
    for v in values:
        if type(v) is Fraction:
            out.append(v)
        elif isinstance(v, float):
            raise TypeError("floating point prices are not accepted; use Fraction or 'p/q'")
        else:
            out.append(Fraction(v))
    return tuple(out)


def parse_point(text: str) -> Point:
    """Parse a comma-separated list of exact rationals such as ``"3,5/2"``."""
    parts = [s.strip() for s in text.split(",") if s.strip()]
    if any("." in s or "e" in s.lower() for s in parts):
        raise ValueError(f"decimal literals are not exact; write p/q instead: {text!r}")
    return tuple(Fraction(s) for s in parts)


def format_point(p: Sequence) -> str:
    return "(" + ", ".join(str(Fraction(v)) for v in p) + ")"


def common_denominator(p: Sequence[Fraction]) -> int:
    return math.lcm(*(Fraction(v).denominator for v in p)) if len(p) else 1


def scale_point(p: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    """Return integer numerators over the least common denominator of ``p``."""
    d = common_denominator(p)
    return tuple(int(Fraction(v) * d) for v in p), d


def ceil_point(p: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(math.ceil(v) for v in p)


def linf(p: Sequence, q: Sequence) -> Fraction:
    return max((abs(Fraction(a) - Fraction(b)) for a, b in zip(p, q)), default=Fraction(0))


@dataclass(frozen=True, order=True)
class Bid:
    """A bid: integral vector ``vector`` with nonzero integer ``weight``."""

    vector: tuple
    weight: int

    def __post_init__(self):
        vec = tuple(int(v) for v in self.vector)
        if any(v < 0 for v in vec):
            raise ValueError(f"bid vector entries must be non-negative: {vec}")
        if int(self.weight) != self.weight or self.weight == 0:
            raise ValueError(f"bid weight must be a nonzero integer, got {self.weight!r}")
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "weight", int(self.weight))

    @property
    def n(self) -> int:
        return len(self.vector)


@dataclass(frozen=True)
class BidList:
    """A normalised bid list on ``n`` goods.

    Build instances with :func:`normalize` (or :meth:`from_pairs`); the
    constructor assumes its input is already canonical.
    """

    n: int
    bids: tuple = ()

    def __len__(self):
        return len(self.bids)

    def __iter__(self):
        return iter(self.bids)

    @classmethod
    def from_pairs(cls, pairs: Iterable, n: int | None = None) -> "BidList":
        """Normalise ``(vector, weight)`` pairs."""
        return normalize([Bid(tuple(v), w) for v, w in pairs], n=n)

    @cached_property
    def vectors(self) -> np.ndarray:
        """Bid vectors as a ``(B, n)`` integer array."""
        if not self.bids:
            return np.zeros((0, self.n), dtype=np.int64)
        dtype = np.int64 if self.magnitude < 2**40 else object
        return np.array([b.vector for b in self.bids], dtype=dtype).reshape(len(self.bids), self.n)

    @cached_property
    def weights(self) -> np.ndarray:
        if not self.bids:
            return np.zeros(0, dtype=np.int64)
        dtype = np.int64 if max(abs(b.weight) for b in self.bids) < 2**40 else object
        return np.array([b.weight for b in self.bids], dtype=dtype)

    @property
    def magnitude(self) -> int:
        return max((max(b.vector, default=0) for b in self.bids), default=0)

    @property
    def max_weight(self) -> int:
        return max((b.weight for b in self.bids), default=0)

    @property
    def unit_count(self) -> int:
        """Number of unit bids, i.e. the sum of absolute weights."""
        return sum(abs(b.weight) for b in self.bids)

    @property
    def is_positive(self) -> bool:
        return all(b.weight > 0 for b in self.bids)

    def weight_at(self, vector: Sequence[int]) -> int:
        vec = tuple(int(v) for v in vector)
        for b in self.bids:
            if b.vector == vec:
                return b.weight
        return 0

    def __add__(self, other: "BidList") -> "BidList":
        if other.n != self.n:
            raise DimensionMismatch(f"cannot combine bid lists on {self.n} and {other.n} goods")
        return normalize(list(self.bids) + list(other.bids), n=self.n)

    def __neg__(self) -> "BidList":
        return BidList(self.n, tuple(Bid(b.vector, -b.weight) for b in self.bids))

    def __sub__(self, other: "BidList") -> "BidList":
        return self + (-other)

    def translate(self, offset: Sequence[int]) -> "BidList":
        off = tuple(int(v) for v in offset)
        return normalize([Bid(tuple(a + o for a, o in zip(b.vector, off)), b.weight) for b in self.bids], n=self.n)

    def to_dict(self) -> dict:
        return {"n": self.n, "bids": [{"vector": list(b.vector), "weight": b.weight} for b in self.bids]}

    def dumps(self) -> str:
        """Canonical text serialisation (byte-comparable for equal lists)."""
        lines = ["{", f'  "n": {self.n},']
        if not self.bids:
            lines.append('  "bids": []')
        else:
            lines.append('  "bids": [')
            rows = [
                f'    {{"vector": {json.dumps(list(b.vector))}, "weight": {b.weight}}}' for b in self.bids
            ]
            lines.append(",\n".join(rows))
            lines.append("  ]")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "BidList":
        data = json.loads(text)
        n = int(data["n"])
        bids = []
        for entry in data.get("bids", []):
            vec = tuple(entry["vector"])
            if len(vec) != n:
                raise DimensionMismatch(f"bid vector {vec} does not have {n} entries")
            bids.append(Bid(vec, entry["weight"]))
        return normalize(bids, n=n)

    def __str__(self):
        body = ", ".join(f"{b.vector}:{b.weight:+d}" for b in self.bids)
        return f"BidList(n={self.n}, [{body}])"


@dataclass(frozen=True)
class Instance:
    """A hidden bid list together with its magnitude ``M`` and weight bound ``W``."""

    bidlist: BidList

    @property
    def n(self) -> int:
        return self.bidlist.n

    @property
    def magnitude(self) -> int:
        return self.bidlist.magnitude

    @property
    def max_weight(self) -> int:
        return self.bidlist.max_weight

    @property
    def size(self) -> int:
        return len(self.bidlist)


def normalize(bids: Iterable[Bid], n: int | None = None) -> BidList:
    """Merge bids sharing a vector, drop zero totals and sort lexicographically.

    >>> normalize([Bid((2, 4), 1), Bid((2, 4), 1)]).bids
    (Bid(vector=(2, 4), weight=2),)
    """
    totals: dict[tuple, int] = {}
    for b in bids:
        if n is None:
            n = b.n
        elif b.n != n:
            raise DimensionMismatch(f"bid {b.vector} has {b.n} entries, expected {n}")
        totals[b.vector] = totals.get(b.vector, 0) + b.weight
    if n is None:
        raise ValueError("cannot infer the number of goods of an empty bid sequence; pass n")
    merged = tuple(Bid(v, w) for v, w in sorted(totals.items()) if w != 0)
    return BidList(n, merged)


def bidlists_equal(a: BidList, b: BidList) -> bool:
    return a.n == b.n and set(a.bids) == set(b.bids)


def load_bidlist(path) -> BidList:
    with open(path) as fh:
        return BidList.loads(fh.read())


def save_bidlist(bidlist: BidList, path) -> None:
    with open(path, "w") as fh:
        fh.write(bidlist.dumps())


def random_bidlist(
    rng: random.Random,
    n: int,
    size: int,
    magnitude: int,
    max_weight: int = 1,
    negative: bool = False,
) -> BidList:
    """Draw ``size`` bids with vectors in ``[0, magnitude]^n``.

    Weights are drawn from ``1..max_weight`` (and their negatives when
    ``negative`` is set).  Vectors may repeat, so the normalised list can
    be shorter than ``size``.
    """
    bids = []
    for _ in range(size):
        vec = tuple(rng.randint(0, magnitude) for _ in range(n))
        w = rng.randint(1, max_weight)
        if negative and rng.random() < 0.5:
            w = -w
        bids.append(Bid(vec, w))
    return normalize(bids, n=n)


def random_distinct_positive_bidlist(
    rng: random.Random, n: int, size: int, magnitude: int, max_weight: int = 1
) -> BidList:
    """``size`` positive bids at pairwise distinct vectors (when the grid allows it)."""
    cells = (magnitude + 1) ** n
    size = min(size, cells)
    seen: set[tuple] = set()
    while len(seen) < size:
        seen.add(tuple(rng.randint(0, magnitude) for _ in range(n)))
    return normalize([Bid(v, rng.randint(1, max_weight)) for v in sorted(seen)], n=n)


# --------------------------------------------------------------------------
# discrete convex hulls


def _solve_exact(cols: list[list[Fraction]], rhs: list[Fraction]):
    """Solve ``A x = rhs`` for ``A`` with the given columns (full column rank).

    Returns ``None`` when the system is inconsistent.
    """
    m = len(rhs)
    k = len(cols)
    aug = [[Fraction(cols[c][r]) for c in range(k)] + [Fraction(rhs[r])] for r in range(m)]
    row = 0
    pivots = []
    for c in range(k):
        piv = next((r for r in range(row, m) if aug[r][c] != 0), None)
        if piv is None:
            return None
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][c]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(c)
        row += 1
    for r in range(row, m):
        if aug[r][k] != 0:
            return None
    return [aug[i][k] for i in range(k)]


def _rank(vectors: list[list[Fraction]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def discrete_convex_hull(bundles: Iterable[Sequence[int]]) -> frozenset:
    """Integer points of the convex hull of ``bundles``.

    Brute force over the integral bounding box.  A point is kept when it is
    a convex combination of some affinely independent subset whose size is
    one more than the affine dimension of the input (Caratheodory), solved
    in exact arithmetic.  Meant for the handful of bundles met in tests.
    """
    pts = sorted({tuple(int(v) for v in b) for b in bundles})
    if len(pts) <= 1:
        return frozenset(pts)
    n = len(pts[0])
    base = pts[0]
    diffs = [[p[i] - base[i] for i in range(n)] for p in pts[1:]]
    dim = _rank(diffs)
    simplices = []
    for subset in itertools.combinations(range(len(pts)), dim + 1):
        origin = pts[subset[0]]
        cols = [[pts[s][i] - origin[i] for i in range(n)] for s in subset[1:]]
        if _rank(cols) == dim:
            simplices.append((origin, cols, subset))
    lo = [min(p[i] for p in pts) for i in range(n)]
    hi = [max(p[i] for p in pts) for i in range(n)]
    inside = set(pts)
    for y in itertools.product(*(range(lo[i], hi[i] + 1) for i in range(n))):
        if y in inside:
            continue
        for origin, cols, _ in simplices:
            lam = _solve_exact(cols, [y[i] - origin[i] for i in range(n)])
            if lam is not None and all(v >= 0 for v in lam) and sum(lam) <= 1:
                inside.add(y)
                break
    return frozenset(inside)
