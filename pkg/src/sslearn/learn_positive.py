"""Learning bid lists whose weights are all positive.

One bid is located coordinate by coordinate with binary searches: the
first coordinate is the largest ``k`` at which some bid still demands
good 1 just below ``(k, M, ..., M)``; each later coordinate is the
smallest ``k`` keeping the delta query at ``(x_1, ..., x_{i-1}, k, M, ...)``
positive.  The bid found is then subtracted from every later answer and
the search repeats until the residual demand is empty.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from . import cells
from .core import Bid, BidList, normalize
from .oracle import demand_nonmarginal_many, find_magnitude
from .queries import delta_points, delta_query


class InvariantViolation(RuntimeError):
    """A binary-search invariant failed; the hidden list is not all-positive."""


class ResidualOracle:
    """Answers of ``base`` minus the demand of the bids already learnt.

    Only meaningful at prices that are non-marginal for every integral bid
    list, which is all the learner ever asks.
    """

    def __init__(self, base, learnt: BidList):
        self.base = base
        self.learnt = learnt
        self.n = base.n
        self.ledger = base.ledger

    def query_many(self, points: Sequence[Sequence], category: str = "other") -> list[tuple]:
        answers = self.base.query_many(points, category)
        known = demand_nonmarginal_many(self.learnt, points)
        return [tuple(a - b for a, b in zip(x, y)) for x, y in zip(answers, known)]

    def query(self, p: Sequence, category: str = "other") -> tuple:
        return self.query_many([p], category)[0]


def _smallest_true(pred: Callable[[int], bool], lo: int, hi: int) -> int:
    """Smallest ``k`` in ``(lo, hi]`` with ``pred(k)``, given ``pred(hi)`` and not ``pred(lo)``."""
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def find_one_positive_bid(oracle, M: int, observer: Callable | None = None) -> tuple[tuple[int, ...], int]:
    """Vector and weight of one bid of a nonempty all-positive list.

    ``observer(i, point)`` is called after coordinate ``i`` (1-based) is
    fixed, with ``point = (x_1, ..., x_i, M, ..., M)``.
    """
    n = oracle.n

    def good1_demanded(k: int) -> bool:
        minus, _ = delta_points((k,) + (M,) * (n - 1))
        return oracle.query(minus, "search")[0] > 0

    # largest k in [0, M] with good 1 still demanded; true at k = 0
    x1 = _smallest_true(lambda k: not good1_demanded(k), 0, M + 1) - 1
    if x1 < 0:
        raise InvariantViolation("no demand for good 1 at the lowest price")
    x = [x1] + [M] * (n - 1)
    if observer:
        observer(1, tuple(x))

    deltas: dict[tuple, int] = {}

    def delta(q) -> int:
        q = tuple(q)
        if q not in deltas:
            deltas[q] = delta_query(oracle, q, "search")
        return deltas[q]

    for i in range(1, n):
        if delta(x) <= 0:
            raise InvariantViolation(f"delta query not positive at {tuple(x)}")

        def positive(k: int, i=i) -> bool:
            return delta(x[:i] + [k] + x[i + 1 :]) > 0

        x[i] = _smallest_true(positive, -1, M)
        if observer:
            observer(i + 1, tuple(x))
    weight = delta(x)
    if weight <= 0:
        raise InvariantViolation(f"non-positive weight {weight} at {tuple(x)}")
    return tuple(x), weight


def _low_price(n: int) -> tuple[Fraction, ...]:
    # every bid strictly prefers some good to rejecting here
    rep = cells.representative(((-1,) * n, tuple(range(n))))
    return rep


def learn_positive_bids(oracle, magnitude: int | None = None, observer: Callable | None = None) -> BidList:
    """Recover a hidden all-positive bid list exactly."""
    n = oracle.n
    M = find_magnitude(oracle) if magnitude is None else magnitude
    learnt = BidList(n, ())
    low = _low_price(n)
    while True:
        residual = ResidualOracle(oracle, learnt)
        if not any(residual.query(low, "other")):
            return learnt
        vec, weight = find_one_positive_bid(residual, M, observer)
        learnt = normalize(list(learnt.bids) + [Bid(vec, weight)], n=n)
