"""Arrangements of hyperplanes with normals ``e_i`` or ``e_i - e_j``.

A :class:`Hyperplane` ``(i, j, c)`` is the set ``p_i - p_j = c`` with the
convention ``p_0 = 0``: ``j == 0`` gives the axis plane ``p_i = c`` and
``0 < i < j`` gives a difference plane.  Any ``n`` such planes with
independent normals form a spanning tree on the goods ``0..n``, so their
intersection is found by propagating values from ``p_0 = 0`` and is
integral whenever the offsets are.

:class:`Arrangement` keeps the hyperplanes found so far, the vertices they
produce inside the box ``[0, M]^n``, and the super-query points already
asked together with their bundles.  Query points are grouped by their
sign vectors; two points in one group with different bundles are
witnesses of a hyperplane that is still missing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import cells


class DuplicateHyperplane(ValueError):
    pass


class OnHyperplane(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Hyperplane:
    """The plane ``p_i - p_j = offset`` (``p_0 = 0``)."""

    i: int
    j: int
    offset: int

    def __post_init__(self):
        if self.i < 1 or self.j < 0:
            raise ValueError(f"bad goods ({self.i}, {self.j})")
        if self.j and self.j <= self.i:
            raise ValueError("difference planes need i < j; use Hyperplane.diff")
        if Fraction(self.offset).denominator != 1:
            raise ValueError("offsets must be integral")
        object.__setattr__(self, "offset", int(self.offset))

    @classmethod
    def axis(cls, i: int, c: int) -> "Hyperplane":
        return cls(i, 0, c)

    @classmethod
    def diff(cls, i: int, j: int, c: int) -> "Hyperplane":
        """``p_i - p_j = c`` for any distinct goods, reoriented if needed."""
        if i == j:
            raise ValueError("need two distinct goods")
        if i == 0:
            raise ValueError("p_0 - p_j = c is the axis plane p_j = -c; use Hyperplane.axis")
        if j == 0:
            return cls(i, 0, c)
        if i > j:
            return cls(j, i, -c)
        return cls(i, j, c)

    @property
    def kind(self) -> str:
        return "axis" if self.j == 0 else "diff"

    def value(self, p: Sequence) -> Fraction:
        """``p_i - p_j - offset``; zero exactly on the plane."""
        pj = Fraction(p[self.j - 1]) if self.j else Fraction(0)
        return Fraction(p[self.i - 1]) - pj - self.offset

    def contains(self, p: Sequence) -> bool:
        return self.value(p) == 0

    def __str__(self) -> str:
        if self.j == 0:
            return f"p{self.i}={self.offset}"
        return f"p{self.i}-p{self.j}={self.offset}"


def solve_intersection(hs: Iterable[Hyperplane], n: int) -> tuple[int, ...] | None:
    """The unique common point of ``n`` hyperplanes, or ``None``.

    Returns ``None`` when the normals are dependent (the planes do not
    form a spanning tree on the goods) or the system is inconsistent.
    """
    hs = list(hs)
    if len(hs) != n:
        raise ValueError(f"need exactly {n} hyperplanes, got {len(hs)}")
    adj: dict[int, list[tuple[int, int]]] = {g: [] for g in range(n + 1)}
    for h in hs:
        # p_i - p_j = c
        adj[h.i].append((h.j, -h.offset))
        adj[h.j].append((h.i, h.offset))
    value = {0: 0}
    stack = [0]
    while stack:
        g = stack.pop()
        for other, delta in adj[g]:
            # p_other = p_g + delta
            want = value[g] + delta
            if other in value:
                if value[other] != want:
                    return None
            else:
                value[other] = want
                stack.append(other)
    if len(value) != n + 1:
        return None
    return tuple(value[g] for g in range(1, n + 1))


def box_hyperplanes(n: int, M: int) -> list[Hyperplane]:
    hs = []
    for i in range(1, n + 1):
        hs.append(Hyperplane.axis(i, 0))
        if M:
            hs.append(Hyperplane.axis(i, M))
    return hs


class Arrangement:
    """Hyperplanes, box vertices and sign-grouped query points.

    Query points must have denominators dividing ``4n(n+1)`` (super-query
    representatives around integral centres); they are stored scaled to
    integers.
    """

    def __init__(self, n: int, M: int, hyperplanes: Iterable[Hyperplane] = ()):
        self.n = n
        self.M = M
        self.scale = 4 * n * (n + 1)
        self.hyperplanes: list[Hyperplane] = []
        self._hset: set[Hyperplane] = set()
        self.vertices: set[tuple[int, ...]] = set()
        self.records: dict = {}
        self._points: list[np.ndarray] = []
        self._bundle_ids: list[np.ndarray] = []
        self._bundles: dict[tuple, int] = {}
        self._bundle_list: list[tuple] = []
        self._P = np.zeros((0, n), dtype=np.int64)
        self._B = np.zeros(0, dtype=np.int64)
        self._S = np.zeros((0, 0), dtype=bool)
        for h in hyperplanes:
            self.add_hyperplane(h)

    def __contains__(self, h: Hyperplane) -> bool:
        return h in self._hset

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def _in_box(self, v: tuple[int, ...]) -> bool:
        return all(0 <= x <= self.M for x in v)

    def add_hyperplane(self, h: Hyperplane) -> list[tuple[int, ...]]:
        """Insert ``h`` and return the box vertices it creates."""
        if h in self._hset:
            raise DuplicateHyperplane(str(h))
        self._flush()
        new = []
        for rest in itertools.combinations(self.hyperplanes, self.n - 1):
            v = solve_intersection((h,) + rest, self.n)
            if v is not None and self._in_box(v) and v not in self.vertices:
                self.vertices.add(v)
                new.append(v)
        self.hyperplanes.append(h)
        self._hset.add(h)
        if len(self._P):
            col = self._sides(self._P, [h])
            self._S = np.concatenate([self._S, col], axis=1)
        else:
            self._S = np.zeros((0, len(self.hyperplanes)), dtype=bool)
        return sorted(new)

    # ---- signatures ------------------------------------------------------

    def _sides(self, P: np.ndarray, hs: Sequence[Hyperplane]) -> np.ndarray:
        """Boolean ``(K, len(hs))``: True on the positive side."""
        if not hs:
            return np.zeros((len(P), 0), dtype=bool)
        ii = np.array([h.i for h in hs])
        jj = np.array([h.j for h in hs])
        off = np.array([h.offset for h in hs], dtype=np.int64) * self.scale
        ext = np.concatenate([np.zeros((len(P), 1), dtype=P.dtype), P], axis=1)
        val = ext[:, ii] - ext[:, jj] - off[None, :]
        if (val == 0).any():
            raise OnHyperplane("a stored query point lies on a hyperplane")
        return val > 0

    def signature(self, p: Sequence) -> tuple[int, ...]:
        """Strict side (+1 or -1) of ``p`` for every hyperplane, in insertion order."""
        out = []
        for h in self.hyperplanes:
            v = h.value(p)
            if v == 0:
                raise OnHyperplane(f"{tuple(map(str, p))} lies on {h}")
            out.append(1 if v > 0 else -1)
        return tuple(out)

    def add_points(self, points: Sequence[Sequence], bundles: Sequence[tuple]) -> None:
        rows = []
        ids = []
        for p, b in zip(points, bundles):
            row = []
            for v in p:
                s = Fraction(v) * self.scale
                if s.denominator != 1:
                    raise ValueError(f"query point {tuple(map(str, p))} is off the 1/{self.scale} grid")
                row.append(int(s))
            rows.append(row)
            b = tuple(b)
            if b not in self._bundles:
                self._bundles[b] = len(self._bundle_list)
                self._bundle_list.append(b)
            ids.append(self._bundles[b])
        if rows:
            self._points.append(np.array(rows, dtype=np.int64))
            self._bundle_ids.append(np.array(ids, dtype=np.int64))

    def add_record(self, rec) -> None:
        """Store a super-query record taken at a vertex (or any integral point)."""
        self.records[tuple(rec.center)] = rec
        pts, bundles = [], []
        for key, bundle in rec.cells.items():
            d = cells.representative(key)
            pts.append(tuple(c + x for c, x in zip(rec.center, d)))
            bundles.append(bundle)
        self.add_points(pts, bundles)

    def _flush(self) -> None:
        if not self._points:
            return
        P = np.concatenate(self._points)
        B = np.concatenate(self._bundle_ids)
        self._points.clear()
        self._bundle_ids.clear()
        S = self._sides(P, self.hyperplanes)
        self._P = np.concatenate([self._P, P])
        self._B = np.concatenate([self._B, B])
        self._S = np.concatenate([self._S.reshape(-1, len(self.hyperplanes)), S])

    @property
    def point_count(self) -> int:
        return len(self._P) + sum(len(x) for x in self._points)

    def _point(self, k: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self.scale) for x in self._P[k])

    def find_witnesses(self):
        """Two stored points with equal signatures and different bundles, or ``None``.

        Returns ``((q, x), (q2, x2))`` with the points and their bundles.
        """
        self._flush()
        if len(self._P) < 2:
            return None
        packed = np.packbits(self._S, axis=1)
        if packed.shape[1] == 0:
            gid = np.zeros(len(self._P), dtype=np.int64)
        else:
            _, gid = np.unique(packed, axis=0, return_inverse=True)
            gid = gid.reshape(-1)
        order = np.lexsort((self._B, gid))
        g, b = gid[order], self._B[order]
        hit = np.nonzero((g[1:] == g[:-1]) & (b[1:] != b[:-1]))[0]
        if not len(hit):
            return None
        k = int(hit[0])
        a, c = int(order[k]), int(order[k + 1])
        return (
            (self._point(a), self._bundle_list[self._B[a]]),
            (self._point(c), self._bundle_list[self._B[c]]),
        )


def find_witnesses(arr: Arrangement):
    return arr.find_witnesses()


def signature(arr: Arrangement, p: Sequence) -> tuple[int, ...]:
    return arr.signature(p)


def add_hyperplane(arr: Arrangement, h: Hyperplane) -> list[tuple[int, ...]]:
    return arr.add_hyperplane(h)
