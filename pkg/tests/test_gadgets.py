import itertools
import math
import random
from fractions import Fraction as F

import pytest

from sslearn.core import BidList, bidlists_equal
from sslearn.gadgets import (
    CellOutOfRange,
    PreconditionUnmet,
    adversarial_instance,
    axis_experiment,
    boundary_bids,
    gadget_cells,
    gadget_leak_check,
    island_gadget,
    locate_gadget,
    lower_bound_experiment,
    mixed_sign_instance,
    closed_form_bid_count,
    parity_count_check,
    rho,
)
from sslearn.oracle import demand_nonmarginal
from sslearn.validity import indifference_support, is_valid


@pytest.mark.parametrize("v,expected", [((0, 0), 1), ((0, 1), -1), ((1, 1), 1), ((2, 3, 5), 1), ((3,), -1)])
def test_rho(v, expected):
    assert rho(v) == expected


def test_gadget_two_goods():
    g = island_gadget((2, 2), 2)
    assert {(b.vector, b.weight) for b in g} == {
        ((2, 2), 1), ((2, 3), -1), ((3, 2), -1), ((3, 3), 1),
        ((4, 4), -1), ((4, 5), 1), ((5, 4), 1), ((5, 5), -1),
    }


def test_gadget_one_good():
    g = island_gadget((5,), 1)
    assert [(b.vector, b.weight) for b in g] == [((5,), 1), ((6,), -1), ((7,), -1), ((8,), 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gadget_weights(n):
    x = tuple(range(1, n + 1))
    g = island_gadget(x, n)
    assert len(g) == 2 ** (n + 1)
    assert sum(b.weight for b in g) == 0
    for b in g:
        d = tuple(a - c for a, c in zip(b.vector, x))
        assert b.weight == (rho(d) if max(d) <= 1 else -rho(d))


def test_boundary_bids():
    b = boundary_bids(2, 8)
    assert len(b) == 31 and b.unit_count == 32
    assert all(x.weight > 0 for x in b)
    assert b.weight_at((0, 0)) == 2
    one = boundary_bids(1, 4)
    assert [x.vector for x in one] == [(0,), (1,), (2,), (3,)]
    with pytest.raises(ValueError):
        boundary_bids(2, 0)


def test_adversarial_instance():
    inst = adversarial_instance(2, 2, (0, 0))
    assert bidlists_equal(inst, island_gadget((0, 0), 2) + boundary_bids(2, 8))
    moved = adversarial_instance(2, 2, (4, 4)) - boundary_bids(2, 8)
    assert bidlists_equal(moved, island_gadget((4, 4), 2))
    for bad in [(1, 0), (8, 0), (0,)]:
        with pytest.raises(CellOutOfRange):
            adversarial_instance(2, 2, bad)
    assert closed_form_bid_count(2, 2) == 8 + 8 * 3
    assert len(gadget_cells(3, 2)) == 8


def test_locate_gadget():
    for cell in gadget_cells(2, 3):
        assert locate_gadget(adversarial_instance(2, 3, cell), 2, 3) == cell
    assert locate_gadget(boundary_bids(2, 8), 2, 2) is None


@pytest.mark.parametrize("n,M", [(1, 8), (2, 12)])
def test_no_leak(n, M):
    for x in itertools.product(range(0, M - 2, 4), repeat=n):
        assert gadget_leak_check(x, BidList(n, ()), n, M)
        assert gadget_leak_check(x, boundary_bids(n, M), n, M)


def test_incomplete_gadget_is_seen_far_away():
    broken = island_gadget((2, 2), 2) - BidList.from_pairs([((5, 5), -1)], n=2)
    assert demand_nonmarginal(broken, (F(1, 3), F(1, 5))) != (0, 0)
    assert demand_nonmarginal(island_gadget((2, 2), 2), (F(1, 3), F(1, 5))) == (0, 0)


def test_parity():
    assert parity_count_check((1, 0))
    assert parity_count_check((1, 1, 1))
    assert parity_count_check((F(3, 2), F(1, 2), 7))
    with pytest.raises(PreconditionUnmet):
        parity_count_check((F(1, 2), F(1, 2)))


def test_lower_bound_two_goods():
    r = lower_bound_experiment(2, 2, seed=3)
    assert r["recovered"] and r["located_cell"] == r["hidden_cell"]
    assert r["queries_used"] >= r["floor"] == 3
    assert sum(r["queries_by_category"].values()) == r["queries_used"]
    assert r["B_formula"] == closed_form_bid_count(2, 2)
    assert lower_bound_experiment(2, 2, seed=3) == r


def test_lower_bound_one_good():
    for seed in range(4):
        r = lower_bound_experiment(1, 4, seed=seed)
        assert r["recovered"] and r["queries_used"] >= 3


def test_axis_experiment():
    r = axis_experiment(2, 4, 64, seed=1)
    assert r["recovered"]
    assert r["floor"] == 4 * math.floor(math.log2(16))
    assert r["queries_used"] >= r["floor"]


def test_mixed_sign_instance():
    rng = random.Random(81)
    for n in (2, 3):
        bids = mixed_sign_instance(rng, n)
        assert any(b.weight < 0 for b in bids) and is_valid(bids) is True
    with pytest.raises(ValueError):
        mixed_sign_instance(rng, 1)


def test_adversarial_instance_fails_validity():
    # The literal construction has no bid at (M, M); the diagonal facet of
    # the upper gadget cube is then uncovered.
    inst = adversarial_instance(2, 2, (4, 4))
    w = is_valid(inst)
    assert not w
    assert (w.p, w.i, w.j, w.total) == ((F(13, 3), F(13, 3)), 1, 2, -1)
    assert indifference_support(inst, w.p, 1, 2)[1] == -1
    # independent symptom: raising p1 across p1 = p2 raises demand for good 1
    p2 = F(13, 3) + F(1, 50)
    lo = demand_nonmarginal(inst, (p2 - F(1, 1000), p2))
    hi = demand_nonmarginal(inst, (p2 + F(1, 1000), p2))
    assert hi[0] > lo[0]


def test_boundary_up_to_m_fixes_only_diagonal_placements():
    # letting m run up to M adds M e_i and M e_i + M e_j
    extra = BidList.from_pairs([((8, 0), 1), ((0, 8), 1), ((8, 8), 2)], n=2)
    assert is_valid(adversarial_instance(2, 2, (0, 0)) + extra) is True
    assert is_valid(adversarial_instance(2, 2, (4, 4)) + extra) is True
    assert not is_valid(adversarial_instance(2, 2, (0, 4)) + extra)
