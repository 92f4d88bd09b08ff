import itertools
import math
import random
from fractions import Fraction as F

import pytest

import brute
from sslearn import cells
from sslearn.arrangement import Hyperplane
from sslearn.core import BidList
from sslearn.gadgets import island_gadget, mixed_sign_instance
from sslearn.oracle import DemandOracle, demand_set, is_marginal
from sslearn.queries import (
    OutOfRange,
    delta_points,
    delta_query,
    existence_from_record,
    existence_query,
    facets_at,
    generalized_delta_points,
    generalized_delta_query,
    local_demand,
    local_facets,
    super_query,
    super_query_points,
)

SINGLE = BidList.from_pairs([((3, 2), 1)], n=2)
GADGET = island_gadget((2, 2), 2)


def test_delta_points():
    assert delta_points((3, 2)) == ((F(11, 4), F(5, 2)), (F(13, 4), F(5, 2)))
    assert delta_points((5,)) == ((F(9, 2),), (F(11, 2),))
    minus, plus = delta_points((0, 0, 0))
    assert minus == (F(-1, 6), F(1, 4), F(1, 2))
    assert plus == (F(1, 6), F(1, 4), F(1, 2))


def test_delta_query_examples():
    oracle = DemandOracle(SINGLE)
    assert delta_query(oracle, (3, 2)) == 1
    assert delta_query(oracle, (2, 2)) == 0
    assert oracle.ledger.total == 4
    both = BidList.from_pairs([((3, 2), 1), ((3, 1), -1)], n=2)
    assert delta_query(DemandOracle(both), (3, 3)) == 0


def test_generalized_delta_examples():
    oracle = DemandOracle(SINGLE)
    assert generalized_delta_query(oracle, (3, 2), ()) == delta_query(oracle, (3, 2))
    assert generalized_delta_points((3, 2), {2})[0][1] == F(3, 2)
    assert generalized_delta_query(oracle, (3, 2), {2}) == 0
    two = BidList.from_pairs([((3, 2), 1), ((3, 3), 1)], n=2)
    assert generalized_delta_query(DemandOracle(two), (3, 3), {2}) == 1


def test_delta_weight_sum():
    rng = random.Random(21)
    for _ in range(500):
        n = rng.randint(1, 4)
        bids = brute.random_list(rng, n, rng.randint(0, 8), 4, W=3, negative=True)
        q = tuple(rng.randint(0, 4) for _ in range(n))
        oracle = DemandOracle(bids, priority=tuple(rng.sample(range(n + 1), n + 1)))
        assert delta_query(oracle, q) == brute.delta_weight(bids, q)


def test_generalized_delta_weight_sum():
    rng = random.Random(22)
    for _ in range(300):
        n = rng.randint(2, 4)
        bids = brute.random_list(rng, n, rng.randint(0, 8), 4, W=3, negative=True)
        q = tuple(rng.randint(0, 4) for _ in range(n))
        s = {g for g in range(2, n + 1) if rng.random() < 0.5}
        assert generalized_delta_query(DemandOracle(bids), q, s) == brute.delta_weight(bids, q, s)


def test_switching_bids():
    rng = random.Random(23)
    for _ in range(100):
        n = rng.randint(2, 3)
        bids = brute.random_list(rng, n, 8, 3)
        q = tuple(rng.randint(0, 3) for _ in range(n))
        s = {g for g in range(2, n + 1) if rng.random() < 0.5}
        minus, plus = generalized_delta_points(q, s)
        for b in bids:
            lo, hi = brute.goods(b.vector, minus), brute.goods(b.vector, plus)
            below = b.vector[0] == q[0] and all(
                b.vector[i - 1] <= (q[i - 1] - 1 if i in s else q[i - 1]) for i in range(2, n + 1)
            )
            assert (lo != hi) == below
            if below:
                assert lo == [1] and hi == [0]


def test_existence_examples():
    oracle = DemandOracle(SINGLE)
    assert existence_query(oracle, (3, 2)) == 1
    assert existence_query(oracle, (3, 3)) == 0
    assert existence_query(DemandOracle(GADGET), (2, 3)) == -1


def test_existence_matches_lookup():
    rng = random.Random(24)
    for _ in range(300):
        n = rng.randint(1, 4)
        bids = brute.random_list(rng, n, rng.randint(0, 8), 3, W=3, negative=True)
        q = tuple(rng.randint(0, 3) for _ in range(n))
        oracle = DemandOracle(bids)
        assert existence_query(oracle, q) == bids.weight_at(q)
        assert oracle.ledger.total == 2**n


def test_alternating_binomial_sum():
    for m in range(1, 21):
        assert sum((-1) ** (i + 1) * math.comb(m, i) for i in range(1, m + 1)) == 1


def test_super_query_points():
    assert len(super_query_points((0, 0))) == 8
    assert len(super_query_points((0, 0, 0))) == 48
    eps = F(1, 24)
    pts = {(a, o): p for a, o, p in super_query_points((3, 2))}
    assert pts[((1, 1), (0, 1))] == (3 + F(1, 2) + eps, 2 + F(1, 2) + 2 * eps)


def test_constructed_points_are_nonmarginal():
    rng = random.Random(25)
    for _ in range(30):
        n = rng.randint(1, 3)
        bids = brute.random_list(rng, n, 10, 4, negative=True)
        q = tuple(rng.randint(-1, 5) for _ in range(n))
        pts = [p for _, _, p in super_query_points(q)]
        for s in itertools.chain.from_iterable(itertools.combinations(range(2, n + 1), r) for r in range(n)):
            pts.extend(generalized_delta_points(q, s))
        assert not any(is_marginal(bids, p) for p in pts)


def test_super_query_examples():
    rec = super_query(DemandOracle(BidList(2, ())), (1, 1))
    assert set(rec.cells.values()) == {(0, 0)}
    assert len(rec.cells) == 8
    rec = super_query(DemandOracle(SINGLE), (3, 2))
    assert rec.cells[((1, 1), (0, 1))] == (0, 0)
    assert rec.cells[((-1, 1), (0, 1))] == (1, 0)
    oracle = DemandOracle(GADGET)
    rec = super_query(oracle, (3, 3))
    assert oracle.ledger.snapshot()["super"] == 8
    for a, order, p in super_query_points((3, 3)):
        assert rec.cells[(a, order)] == brute.demand(GADGET, p)


def test_local_demand_examples():
    rec = super_query(DemandOracle(SINGLE), (3, 2))
    assert local_demand(rec, (F(29, 10), F(5, 2))) == {(1, 0)}
    assert local_demand(rec, (3, F(5, 2))) == {(0, 0), (1, 0)}
    rep = tuple(c + d for c, d in zip((3, 2), cells.representative(((1, 1), (0, 1)))))
    assert local_demand(rec, rep) == {rec.cells[((1, 1), (0, 1))]}
    with pytest.raises(OutOfRange):
        local_demand(rec, (4, 2))


def test_local_facets_examples():
    rec = super_query(DemandOracle(SINGLE), (3, 2))
    assert local_facets(rec) == {Hyperplane.axis(1, 3), Hyperplane.axis(2, 2), Hyperplane.diff(1, 2, 1)}
    assert local_facets(super_query(DemandOracle(BidList(2, ())), (3, 2))) == set()
    assert local_facets(super_query(DemandOracle(SINGLE), (0, 0))) == set()


def test_facets_at_off_centre():
    rec = super_query(DemandOracle(SINGLE), (3, 3))
    # on the ray p1 = 3 above the bid, not through the centre
    assert facets_at(rec, (3, F(5, 2))) == {Hyperplane.axis(1, 3)}


def test_existence_from_record_examples():
    oracle = DemandOracle(SINGLE)
    rec = super_query(oracle, (3, 2))
    before = oracle.ledger.total
    assert existence_from_record(rec) == 1
    assert oracle.ledger.total == before
    assert existence_from_record(super_query(DemandOracle(BidList(2, ())), (1, 1))) == 0
    assert existence_from_record(super_query(DemandOracle(GADGET), (5, 5))) == -1


def test_existence_from_record_matches_query():
    rng = random.Random(26)
    for _ in range(200):
        n = rng.randint(1, 3)
        bids = brute.random_list(rng, n, rng.randint(0, 6), 3, W=2, negative=True)
        q = tuple(rng.randint(0, 3) for _ in range(n))
        oracle = DemandOracle(bids)
        assert existence_from_record(super_query(oracle, q)) == existence_query(oracle, q)


def test_local_reconstruction():
    rng = random.Random(27)
    for k in range(12):
        n = 2 if k < 8 else 3
        bids = mixed_sign_instance(rng, n) if k % 2 else brute.random_list(rng, n, 5, 4, W=2)
        centre = tuple(rng.randint(0, 4) for _ in range(n))
        rec = super_query(DemandOracle(bids), centre)
        for _ in range(150):
            d = tuple(F(rng.randint(-11, 11), 12) for _ in range(n))
            p = tuple(c + v for c, v in zip(centre, d))
            assert local_demand(rec, p) == brute.demand_set(bids, p)
