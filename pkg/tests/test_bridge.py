import itertools
import random
from fractions import Fraction as F

import pytest

import brute
from sslearn.bridge import DomainError, ValuationOracle, demand_from_valuation, lifted_value, utility
from sslearn.core import MINUS_INFINITY, BidList
from sslearn.learn_general import random_nonmarginal_price
from sslearn.oracle import demand_nonmarginal

SMALL = BidList.from_pairs([((2, 3), 1)], n=2)


def _domain(n, L):
    return [x for x in itertools.product(range(L + 1), repeat=n) if sum(x) <= L]


def _best(vo, p):
    us = {x: utility(vo, x, p) for x in _domain(vo.n, vo.L)}
    top = max(u for u in us.values() if u is not MINUS_INFINITY)
    return top, {x for x, u in us.items() if u == top}


def test_utility_examples():
    vo = ValuationOracle.from_bids(SMALL)
    assert utility(vo, (1, 0), (1, 1)) == 1
    assert utility(vo, (0, 0), (7, 7)) == 0
    assert utility(vo, (1, 1), (0, 0)) is MINUS_INFINITY
    assert vo.queries == 3


def test_demand_examples():
    vo = ValuationOracle.from_bids(SMALL)
    assert demand_from_valuation(vo, (1, 1)) == (0, 1)
    assert demand_from_valuation(vo, (3, 4)) == (0, 0)
    assert demand_from_valuation(vo, (2, 3)) in {(0, 0), (1, 0), (0, 1)}


def test_domain_error():
    vo = ValuationOracle(lambda x: MINUS_INFINITY, 2, 1)
    with pytest.raises(DomainError):
        demand_from_valuation(vo, (0, 0))


def test_lifted_value():
    vo = ValuationOracle.from_bids(SMALL)
    assert lifted_value(vo, -1, (0, 1)) == 3
    assert lifted_value(vo, 0, (0, 1)) is MINUS_INFINITY


def test_lift_exchange_property():
    rng = random.Random(71)
    for _ in range(15):
        n = rng.randint(1, 3)
        bids = brute.random_list(rng, n, rng.randint(1, 3), 4, W=2)
        vo = ValuationOracle.from_bids(bids)
        dom = []
        for x in _domain(n, vo.L):
            z = (-sum(x),) + x
            if lifted_value(vo, z[0], x) is not MINUS_INFINITY:
                dom.append(z)

        def f(z):
            return lifted_value(vo, z[0], z[1:])

        for z, y in itertools.product(dom, repeat=2):
            for i in range(n + 1):
                if z[i] <= y[i]:
                    continue
                ok = False
                for j in range(n + 1):
                    if z[j] >= y[j]:
                        continue
                    a, b = list(z), list(y)
                    a[i] -= 1
                    a[j] += 1
                    b[i] += 1
                    b[j] -= 1
                    fa, fb = f(tuple(a)), f(tuple(b))
                    if fa is not MINUS_INFINITY and fb is not MINUS_INFINITY and f(z) + f(y) <= fa + fb:
                        ok = True
                        break
                assert ok


def test_equivalence_and_cost():
    rng = random.Random(72)
    done = 0
    while done < 40:
        n = rng.randint(1, 3)
        bids = brute.random_list(rng, n, rng.randint(1, 4), 6, W=2)
        if sum(b.weight for b in bids) > 6:
            continue
        done += 1
        vo = ValuationOracle.from_bids(bids)
        for _ in range(15):
            p = random_nonmarginal_price(rng, n, -1, 7, grain=97)
            before = vo.queries
            x = demand_from_valuation(vo, p)
            assert vo.queries - before <= (n + 1) ** 2 * (vo.L + 1)
            assert x == demand_nonmarginal(bids, p)
        for _ in range(5):
            p = brute.random_price(rng, n, 0, 6, den=2)
            x = demand_from_valuation(vo, p)
            top, argmax = _best(vo, p)
            assert x in argmax
            assert x in brute.demand_set(bids, p)


def test_fractional_prices_exact():
    vo = ValuationOracle.from_bids(SMALL)
    assert demand_from_valuation(vo, (F(1, 3), F(4, 3))) == (1, 0)
