import os

# Input validation vs. derived-quantity tolerances.
INPUT_TOL = 1e-12
DERIVED_TOL = 1e-9
# A buyer buys when expected valuation >= price - TIE_TOL; absorbs rounding in
# posteriors recovered from LP solutions.
TIE_TOL = 1e-9

DEFAULT_CAP = 2_000_000


def enumeration_cap(cap=None):
    """Resolve the enumeration cap: explicit argument, then SIGNALPRICE_CAP, then default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("SIGNALPRICE_CAP")
    if env:
        return int(float(env))
    return DEFAULT_CAP
