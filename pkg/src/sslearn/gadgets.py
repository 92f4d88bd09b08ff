"""Island gadgets, boundary bids and the lower-bound experiments.

An island gadget at ``x`` puts unit bids of alternating sign on the two
cubes ``x + {0,1}^n`` and ``x + {2,3}^n``.  Its demand cancels outside
``x + [0,3]^n``, so adding it to a list changes answers only near ``x``.
Boundary bids sit on the faces of the box ``[0, 4k]^n`` and are meant
to cover the gadget's negative weights; with the gadget on one of the
``k^n`` points of ``4 * {0..k-1}^n`` a learner has to find which.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import cells
from .core import Bid, BidList, bidlists_equal, normalize, to_point
from .learn_general import Limits, learn_general_run
from .learn_positive import learn_positive_bids
from .oracle import DemandOracle, demand_nonmarginal_many
from .validity import is_valid


class CellOutOfRange(ValueError):
    pass


class PreconditionUnmet(ValueError):
    pass


def rho(v: Sequence[int]) -> int:
    """+1 if ``v`` has an even number of odd entries, -1 otherwise."""
    odd = sum(int(x) % 2 for x in v)
    return 1 if odd % 2 == 0 else -1


def island_gadget(x: Sequence[int], n: int | None = None) -> BidList:
    x = tuple(int(v) for v in x)
    n = len(x) if n is None else n
    if len(x) != n:
        raise ValueError(f"gadget position {x} does not have {n} entries")
    bids = []
    for corner in itertools.product((0, 1), repeat=n):
        bids.append(Bid(tuple(a + c for a, c in zip(x, corner)), rho(corner)))
        upper = tuple(c + 2 for c in corner)
        bids.append(Bid(tuple(a + c for a, c in zip(x, upper)), -rho(upper)))
    return normalize(bids, n=n)


def boundary_bids(n: int, M: int) -> BidList:
    """Unit bids at ``m e_i`` and ``m e_i + M e_j`` (``i != j``) for ``m < M``.

    The ``n`` copies of the origin merge into one bid of weight ``n``.
    """
    if M < 1:
        raise ValueError("boundary bids need M >= 1")
    bids = []
    for i in range(n):
        for m in range(M):
            v = [0] * n
            v[i] = m
            bids.append(Bid(tuple(v), 1))
            for j in range(n):
                if j != i:
                    w = list(v)
                    w[j] = M
                    bids.append(Bid(tuple(w), 1))
    return normalize(bids, n=n)


def gadget_cells(n: int, k: int) -> list[tuple[int, ...]]:
    return [tuple(4 * c for c in cell) for cell in itertools.product(range(k), repeat=n)]


def adversarial_instance(n: int, k: int, gadget_cell: Sequence[int]) -> BidList:
    """Boundary bids for ``M = 4k`` plus a gadget at ``gadget_cell``."""
    cell = tuple(int(v) for v in gadget_cell)
    if len(cell) != n or any(v % 4 or not 0 <= v < 4 * k for v in cell):
        raise CellOutOfRange(f"{cell} is not a point of 4*{{0..{k - 1}}}^{n}")
    return island_gadget(cell, n) + boundary_bids(n, 4 * k)


def closed_form_bid_count(n: int, k: int) -> int:
    """Closed-form instance size counting unordered pairs of goods."""
    return 2 ** (n + 1) + 4 * k * (n + math.comb(n, 2))


def gadget_leak_check(x: Sequence[int], base: BidList, n: int, M: int) -> bool:
    """True iff adding a gadget at ``x`` leaves demand unchanged away from it.

    Compares demand with and without the gadget at every super-query
    point around every integral ``q`` in ``[-1, M+1]^n`` outside
    ``x + [0,3]^n``.
    """
    x = tuple(int(v) for v in x)
    with_gadget = base + island_gadget(x, n)
    offsets = np.array(
        [[int(v * 4 * n * (n + 1)) for v in cells.representative(key)] for key in cells.cell_keys(n)]
    )
    centres = [
        q
        for q in itertools.product(range(-1, M + 2), repeat=n)
        if not all(0 <= a - b <= 3 for a, b in zip(q, x))
    ]
    if not centres:
        return True
    scale = 4 * n * (n + 1)
    grid = (np.array(centres)[:, None, :] * scale + offsets[None, :, :]).reshape(-1, n)
    points = [tuple(Fraction(int(v), scale) for v in row) for row in grid]
    return demand_nonmarginal_many(with_gadget, points) == demand_nonmarginal_many(base, points)


def parity_count_check(c: Sequence) -> bool:
    """Equal numbers of even- and odd-parity 0/1 vectors below ``c``."""
    c = to_point(c)
    if all(v < 1 for v in c):
        raise PreconditionUnmet("some entry of c must be at least 1")
    even = odd = 0
    for v in itertools.product((0, 1), repeat=len(c)):
        if all(a <= b for a, b in zip(v, c)):
            if sum(v) % 2:
                odd += 1
            else:
                even += 1
    return even == odd


def locate_gadget(learnt: BidList, n: int, k: int) -> tuple[int, ...] | None:
    """Position of the gadget in a learnt adversarial instance."""
    rest = learnt - boundary_bids(n, 4 * k)
    if not len(rest):
        return None
    return tuple(min(b.vector[i] for b in rest) for i in range(n))


def lower_bound_experiment(n: int, k: int, seed: int = 0, limits: Limits | None = None) -> dict:
    """Hide a gadget at a random place, learn the instance, report the cost."""
    rng = random.Random(seed)
    cell = tuple(4 * rng.randrange(k) for _ in range(n))
    hidden = adversarial_instance(n, k, cell)
    oracle = DemandOracle(hidden)
    run = learn_general_run(oracle, limits)
    ledger = oracle.ledger.snapshot()
    return {
        "n": n,
        "k": k,
        "M": 4 * k,
        "B": len(hidden),
        "B_units": hidden.unit_count,
        "B_formula": closed_form_bid_count(n, k),
        "W": hidden.max_weight,
        "hidden_cell": cell,
        "located_cell": locate_gadget(run.bids, n, k),
        "recovered": bidlists_equal(run.bids, hidden),
        "hyperplanes": len(run.arrangement),
        "vertices": len(run.arrangement.vertices),
        "queries_used": ledger["total"],
        "queries_by_category": {c: v for c, v in ledger.items() if c != "total"},
        "k_power_n": k**n,
        "floor": k**n - 1,
    }


def axis_instance(rng: random.Random, n: int, size: int, M: int) -> BidList:
    """``size`` unit bids at distinct points ``m e_1`` with ``0 <= m <= M``."""
    ms = rng.sample(range(M + 1), size)
    return normalize([Bid((m,) + (0,) * (n - 1), 1) for m in ms], n=n)


def axis_experiment(n: int, size: int, M: int, seed: int = 0) -> dict:
    """Learn an axis instance with the positive learner and compare to ``B log(M/B)``."""
    rng = random.Random(seed)
    hidden = axis_instance(rng, n, size, M)
    oracle = DemandOracle(hidden)
    learnt = learn_positive_bids(oracle)
    floor = size * int(math.floor(math.log2(M / size))) if size and M >= size else 0
    return {
        "n": n,
        "B": size,
        "M": M,
        "queries_used": oracle.ledger.total,
        "floor": floor,
        "recovered": bidlists_equal(learnt, hidden),
    }


MIXED_SIGN_EXAMPLE = BidList.from_pairs([((3, 3), -1), ((1, 3), 1), ((3, 1), 1), ((5, 5), 1)], n=2)


def mixed_sign_instance(rng: random.Random, n: int, magnitude: int = 6, tries: int = 1000) -> BidList:
    """Random valid list holding one negative bid.

    A negative unit bid at ``v`` is propped up by positive bids at
    ``v - d e_i`` for most goods ``i`` and a few random positive bids;
    candidates are drawn until one passes :func:`is_valid`.  Needs
    ``n >= 2``: with one good a lone negative bid is never valid.
    """
    if n < 2:
        raise ValueError("mixed-sign lists need at least two goods")
    for _ in range(tries):
        v = [rng.randint(1, magnitude - 1) for _ in range(n)]
        d = rng.randint(1, min(v))
        bids = [Bid(tuple(v), -1)]
        for g in range(n):
            if rng.random() < 0.8:
                u = list(v)
                u[g] -= d
                bids.append(Bid(tuple(u), 1))
        for _ in range(rng.randint(0, 3)):
            bids.append(Bid(tuple(rng.randint(0, magnitude) for _ in range(n)), 1))
        cand = normalize(bids, n=n)
        if any(b.weight < 0 for b in cand) and is_valid(cand) is True:
            return cand
    raise RuntimeError("no valid mixed-sign list found")
