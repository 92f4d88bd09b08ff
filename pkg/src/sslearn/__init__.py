"""Learning strong-substitutes demand from demand queries.

Bid lists with signed integer weights describe strong-substitutes demand
exactly.  The package evaluates their demand with exact rational
arithmetic, wraps it in an instrumented demand oracle and implements
query algorithms that recover a hidden bid list from that oracle.
"""

from .core import (
    MINUS_INFINITY,
    Bid,
    BidList,
    DimensionMismatch,
    Instance,
    bidlists_equal,
    normalize,
    parse_point,
    random_bidlist,
)
from .oracle import (
    DemandOracle,
    MarginalPrice,
    QueryLedger,
    demand_nonmarginal,
    demand_set,
    find_magnitude,
    is_marginal,
)
from .queries import delta_query, existence_query, local_demand, super_query
from .arrangement import Arrangement, Hyperplane
from .learn_positive import learn_positive_bids
from .learn_general import Limits, learn_general_bids, learn_general_run, verify_learned
from .validity import indifference_support, is_valid
from .bridge import ValuationOracle, demand_from_valuation
from .gadgets import (
    MIXED_SIGN_EXAMPLE,
    adversarial_instance,
    boundary_bids,
    island_gadget,
    lower_bound_experiment,
)

__version__ = "0.1.0"
