"""Learn a random all-positive bid list from demand queries alone.

Run with ``python demos/learn_positive.py``.
"""

import random

from sslearn import DemandOracle, bidlists_equal, learn_positive_bids, random_bidlist


def main():
    rng = random.Random(7)
    hidden = random_bidlist(rng, 3, 8, 40, max_weight=3)
    print("hidden list:")
    for b in hidden:
        print("  ", b.vector, "weight", b.weight)

    oracle = DemandOracle(hidden)
    found = []
    learnt = learn_positive_bids(oracle, observer=lambda i, p: found.append((i, p)))
    print("\nsearch trace (coordinate fixed, point reached):")
    for i, p in found[:9]:
        print("  ", i, p)
    print("   ...")
    print("\nrecovered exactly:", bidlists_equal(learnt, hidden))
    for cat, count in oracle.ledger.snapshot().items():
        print(f"  {cat:>10}: {count}")


if __name__ == "__main__":
    main()
