"""Learn a list with a negative bid and compare with the valuation route.

Run with ``python demos/mixed_signs.py``.
"""

from fractions import Fraction

from sslearn import (
    MIXED_SIGN_EXAMPLE,
    DemandOracle,
    ValuationOracle,
    demand_from_valuation,
    demand_nonmarginal,
    learn_general_run,
    verify_learned,
)
from sslearn.core import BidList


def main():
    oracle = DemandOracle(MIXED_SIGN_EXAMPLE)
    run = learn_general_run(oracle)
    print("learnt:", [(b.vector, b.weight) for b in run.bids])
    print("hyperplanes:", ", ".join(str(h) for h in run.arrangement.hyperplanes))
    print("queries:", oracle.ledger.total)
    print("agrees at 1000 random prices:", verify_learned(DemandOracle(MIXED_SIGN_EXAMPLE), run.bids))

    positive = BidList.from_pairs([((3, 2), 1), ((1, 4), 2)], n=2)
    vo = ValuationOracle.from_bids(positive)
    p = (Fraction(1, 2), Fraction(7, 3))
    print("\nfrom valuations:", demand_from_valuation(vo, p), "after", vo.queries, "value queries")
    print("from bids:      ", demand_nonmarginal(positive, p))


if __name__ == "__main__":
    main()
