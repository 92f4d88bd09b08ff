"""Validity of signed bid lists.

A bid list describes a strong-substitutes demand exactly when, at every
price and for every pair of goods, the bids indifferent between the two
goods have a non-negative total weight.  :func:`is_valid` checks this on
the lattice ``(1/(n+1)) Z^n`` intersected with ``[-1, M+1]^n``; with that
spacing every face of the arrangement of integral planes meeting the box
receives a sample point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrangement import Hyperplane
from .core import BidList, normalize, to_point
from .oracle import bid_demanded_goods


@dataclass(frozen=True)
class ViolationWitness:
    """A price and pair of goods whose indifferent bids weigh less than zero.

    Falsy, so ``if is_valid(bids):`` reads naturally.
    """

    p: tuple
    i: int
    j: int
    total: int

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        price = ",".join(str(v) for v in self.p)
        return f"violation at p=({price}) goods=({self.i},{self.j}) weight={self.total}"


def indifference_support(bids: BidList, p: Sequence, i: int, j: int) -> tuple[BidList, int]:
    """Bids that demand both ``i`` and ``j`` at ``p``, and their total weight."""
    if i == j:
        raise ValueError("need two distinct goods")
    p = to_point(p)
    chosen = [b for b in bids if {i, j} <= bid_demanded_goods(b, p)]
    return normalize(chosen, n=bids.n), sum(b.weight for b in chosen)


def candidate_hyperplanes(bids: BidList) -> set:
    """Every plane that could carry a facet of the demand complex of ``bids``."""
    out = set()
    n = bids.n
    for b in bids:
        for i in range(1, n + 1):
            out.add(Hyperplane.axis(i, b.vector[i - 1]))
            for j in range(i + 1, n + 1):
                out.add(Hyperplane.diff(i, j, b.vector[i - 1] - b.vector[j - 1]))
    return out


def _lattice(n: int, lo: int, hi: int, step: int) -> np.ndarray:
    """Scaled lattice points ``[lo*step, hi*step]^n`` in lexicographic order."""
    axis = np.arange(lo * step, hi * step + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def pair_supports(bids: BidList, points: np.ndarray, step: int) -> np.ndarray:
    """Support weights at scaled ``points`` for every pair ``i < j`` of goods.

    Returns ``(K, P)`` with pairs ordered as ``itertools.combinations``.
    """
    n = bids.n
    V = bids.vectors.astype(np.int64) * step
    w = bids.weights.astype(np.int64)
    diff = V[None, :, :] - points[:, None, :]
    s = np.concatenate([np.zeros(diff.shape[:2] + (1,), dtype=np.int64), diff], axis=2)
    mask = s == s.max(axis=2, keepdims=True)
    cols = []
    for i, j in itertools.combinations(range(n + 1), 2):
        cols.append((mask[:, :, i] & mask[:, :, j]).astype(np.int64) @ w)
    return np.stack(cols, axis=1)


def is_valid(bids: BidList, margin: int = 1, chunk: int = 4096):
    """``True`` or the first :class:`ViolationWitness` in lexicographic scan order."""
    n = bids.n
    if not len(bids) or n == 0:
        return True
    step = n + 1
    pts = _lattice(n, -margin, bids.magnitude + margin, step)
    pairs = list(itertools.combinations(range(n + 1), 2))
    for start in range(0, len(pts), chunk):
        block = pts[start : start + chunk]
        sup = pair_supports(bids, block, step)
        bad = sup < 0
        if bad.any():
            k, c = np.argwhere(bad)[0]
            p = tuple(Fraction(int(v), step) for v in block[k])
            i, j = pairs[c]
            return ViolationWitness(p, i, j, int(sup[k, c]))
    return True
