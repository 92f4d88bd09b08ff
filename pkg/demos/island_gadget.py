"""Hide an island gadget among boundary bids and find it again.

The gadget changes demand only near its own position, so a learner has
to look everywhere.  The script also shows that the instance, as built,
fails the validity check: demand for good 1 rises when its price rises.

Run with ``python demos/island_gadget.py``.
"""

from fractions import Fraction

from sslearn import adversarial_instance, demand_nonmarginal, is_valid, lower_bound_experiment


def main():
    for n, k in [(1, 4), (2, 2), (2, 3)]:
        r = lower_bound_experiment(n, k, seed=2)
        print(
            f"n={n} k={k}: hidden at {r['hidden_cell']}, located at {r['located_cell']}, "
            f"{r['queries_used']} queries (floor {r['floor']})"
        )

    inst = adversarial_instance(2, 2, (4, 4))
    print("\nvalidity check:", is_valid(inst))
    p2 = Fraction(13, 3) + Fraction(1, 50)
    for p1 in (p2 - Fraction(1, 1000), p2 + Fraction(1, 1000)):
        print(f"  p=({p1}, {p2}) -> demand {demand_nonmarginal(inst, (p1, p2))}")


if __name__ == "__main__":
    main()
