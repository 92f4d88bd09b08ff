"""Cells of the unit ball around an integral price.

An offset ``d`` with ``|d|_inf < 1`` is located by its orthant ``a`` (the
sign of each coordinate) and by the order of its fractional parts
``f_u = d_u + [a_u < 0]``.  Each pair ``(a, order)`` is a simplex of the
Kuhn triangulation of the ``2^n`` unit cubes meeting at the centre.  No
hyperplane ``p_u = c`` or ``p_u - p_v = c`` with integral ``c`` meets the
interior of such a simplex, so an integral bid list demands one bundle
throughout each of the ``2^n * n!`` cells.

The cell key ``(a, order)`` lists coordinates by increasing fractional
part.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Sequence

Key = tuple  # (a, order)


def epsilon(n: int) -> Fraction:
    return Fraction(1, 4 * n * (n + 1))


def cell_keys(n: int) -> list[Key]:
    return [
        (a, order)
        for a in itertools.product((-1, 1), repeat=n)
        for order in itertools.permutations(range(n))
    ]


def representative(key: Key) -> tuple[Fraction, ...]:
    """Interior offset of cell ``key``.

    Fractional parts are ``1/2 + k*eps`` for the k-th coordinate of the
    order (k = 1..n) with ``eps = 1/(4n(n+1))``.  They are distinct and lie
    in (1/2, 3/4), so the offset avoids every integral hyperplane with
    normal ``e_u`` or ``e_u - e_v``.
    """
    a, order = key
    n = len(a)
    eps = epsilon(n)
    f = [Fraction(0)] * n
    for k, u in enumerate(order, start=1):
        f[u] = Fraction(1, 2) + k * eps
    return tuple(f[u] if a[u] > 0 else f[u] - 1 for u in range(n))


def locate(d: Sequence[Fraction]) -> Key:
    """Key of the cell whose interior contains ``d``.

    Raises ``ValueError`` when ``d`` is on a cell wall or outside the ball.
    """
    keys = containing(d)
    if len(keys) != 1:
        raise ValueError(f"offset {tuple(map(str, d))} is not interior to a single cell")
    return keys[0]


def containing(d: Sequence[Fraction]) -> list[Key]:
    """Keys of all cells whose closure contains the offset ``d``."""
    n = len(d)
    if any(abs(v) >= 1 for v in d):
        raise ValueError("offset must satisfy |d|_inf < 1")
    choices = []
    for v in d:
        if v > 0:
            choices.append(((1, v),))
        elif v < 0:
            choices.append(((-1, v + 1),))
        else:
            choices.append(((1, Fraction(0)), (-1, Fraction(1))))
    keys = []
    for combo in itertools.product(*choices):
        a = tuple(c[0] for c in combo)
        f = [c[1] for c in combo]
        ranked = sorted(range(n), key=lambda u: f[u])
        groups = [list(g) for _, g in itertools.groupby(ranked, key=lambda u: f[u])]
        for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
            keys.append((a, tuple(u for part in parts for u in part)))
    return keys


def walls(key: Key) -> Iterator[tuple[tuple[int, int, int], Key]]:
    """Yield ``(hyperplane, neighbour)`` for every interior wall of a cell.

    The hyperplane is ``(i, j, c)`` in goods numbering (``i`` in 1..n,
    ``j`` in 0..n, ``j == 0`` for axis planes, otherwise ``i < j``) and
    means ``d_i - d_j = c`` for the offset from the centre.  Walls on the
    boundary of the ball have no neighbour and are skipped.
    """
    a, order = key
    n = len(a)
    for k in range(n - 1):
        u, v = order[k], order[k + 1]
        c = int(a[v] < 0) - int(a[u] < 0)
        swapped = order[:k] + (v, u) + order[k + 2 :]
        if u < v:
            plane = (u + 1, v + 1, c)
        else:
            plane = (v + 1, u + 1, -c)
        yield plane, (a, swapped)
    first, last = order[0], order[-1]
    if a[first] > 0:
        flipped = a[:first] + (-1,) + a[first + 1 :]
        yield (first + 1, 0, 0), (flipped, order[1:] + (first,))
    if a[last] < 0:
        flipped = a[:last] + (1,) + a[last + 1 :]
        yield (last + 1, 0, 0), (flipped, (last,) + order[:-1])
