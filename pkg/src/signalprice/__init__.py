"""Revenue-maximizing signaling in posted-price auctions.

Public signaling is solved as an LP over q-uniform posteriors; private
signaling by bisection over a dual feasibility problem driven by the
ellipsoid method with a dynamic-programming separation oracle.
"""
from .core import (AuctionInstance, SignalingScheme, ValuationDistribution, buy_probability,
                   empirical_instance, posterior_of_signal, revenue, revenue_from,
                   sample_valuations, scheme_value, uninformative_scheme)
from .decomposition import (PosteriorDistribution, decompose, enumerate_q_uniform,
                            is_decreasing, q_for, q_public)
from .errors import (InconsistentDistribution, InconsistentSolution, InfeasiblePrior,
                     InvalidInstance, InvalidScheme, NumericalFailure, SignalPriceError,
                     TooLarge, ZeroProbabilitySignal)
from .estimators import PostedPriceOptimizer, PrivateSignalingSolver, PublicSignalingSolver
from .maxlinrev import dp_max_linrev
from .oracles import (Graph, brute_force_max_linrev, brute_force_public, full_revelation_value,
                      gen_hardness_instance, gen_random_instance, no_signaling_value)
from .pricing import (ScalarDistribution, decrease_distribution, exact_optimal_prices,
                      find_apx_prices, lift_prices)
from .private import (dense_lp6_solve, lift_relaxed, private_params, recover_scheme_private,
                      separation_oracle, solve_private)
from .public import public_params, recover_scheme_public, solve_public

__version__ = "0.1.0"
