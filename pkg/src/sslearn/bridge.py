"""Demand from a valuation oracle.

For a strong-substitutes valuation the utility ``v(x) - p.x`` is
M-natural concave, so a bundle that no single exchange ``x - e_i + e_j``
(with ``e_0 = 0``) improves is a global maximiser.  Steepest ascent from
the empty bundle reaches one after at most ``L + 1`` rounds, where ``L``
bounds the size of bundles in the domain.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .core import MINUS_INFINITY, BidList, to_point
from .oracle import valuation_positive


class DomainError(ValueError):
    pass


class ValuationOracle:
    """Counts calls to a valuation ``evaluator``; ``L`` bounds bundle sizes."""

    def __init__(self, evaluator: Callable, n: int, L: int):
        self.evaluator = evaluator
        self.n = n
        self.L = L
        self.queries = 0

    def value(self, x: Sequence[int]):
        self.queries += 1
        return self.evaluator(tuple(int(v) for v in x))

    @classmethod
    def from_bids(cls, bids: BidList) -> "ValuationOracle":
        """Valuation oracle of a positive list; ``L`` is its total weight."""
        return cls(lambda x: valuation_positive(bids, x), bids.n, sum(b.weight for b in bids))


def utility(vo: ValuationOracle, x: Sequence[int], p: Sequence):
    v = vo.value(x)
    if v is MINUS_INFINITY:
        return MINUS_INFINITY
    return Fraction(v) - sum(Fraction(pi) * xi for pi, xi in zip(to_point(p), x))


def lifted_value(vo: ValuationOracle, x0: int, x: Sequence[int]):
    """Value of ``(x0, x)`` under the lift to a function on ``n + 1`` goods."""
    if x0 != -sum(x):
        return MINUS_INFINITY
    return vo.value(x)


def _moves(n: int):
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j:
                yield i, j


def demand_from_valuation(vo: ValuationOracle, p: Sequence) -> tuple[int, ...]:
    """A utility-maximising bundle at ``p`` found by steepest ascent."""
    p = to_point(p)
    n = vo.n
    cache: dict[tuple, object] = {}

    def u(x):
        if x not in cache:
            cache[x] = MINUS_INFINITY if min(x, default=0) < 0 else utility(vo, x, p)
        return cache[x]

    x = (0,) * n
    if u(x) is MINUS_INFINITY:
        raise DomainError("v(0) is minus infinity")
    while True:
        best, best_u = None, u(x)
        for i, j in _moves(n):
            y = list(x)
            if i:
                y[i - 1] -= 1
            if j:
                y[j - 1] += 1
            y = tuple(y)
            uy = u(y)
            if uy is not MINUS_INFINITY and uy > best_u:
                best, best_u = y, uy
        if best is None:
            return x
        x = best
