"""Posted prices for non-Bayesian auctions with scalar valuations."""
import math
from dataclasses import dataclass

import numpy as np

from ._config import TIE_TOL
from .errors import InvalidInstance
from .validation import check_prices, check_probability_vector, check_profile

# Projected valuations are snapped to this many decimals so that equal
# expected values coming from different vectors merge into one atom.
_SNAP_DECIMALS = 12


@dataclass(frozen=True)
class ScalarDistribution:
    """Finite distribution on ``[0, 1]`` with sorted, distinct support."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if values.size == 0 or values.shape != probs.shape:
            raise InvalidInstance("scalar distribution needs matching, non-empty values/probs")
        if np.any(probs <= 0.0):
            raise InvalidInstance("support probabilities must be strictly positive")
        check_probability_vector(probs, "scalar distribution")
        if not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0:
            raise InvalidInstance("scalar valuations must lie in [0, 1]")
        uniq, inv = np.unique(values, return_inverse=True)
        merged = np.bincount(inv, weights=probs, minlength=uniq.size)
        uniq.setflags(write=False)
        merged.setflags(write=False)
        object.__setattr__(self, "values", uniq)
        object.__setattr__(self, "probs", merged)

    @classmethod
    def from_dict(cls, mapping):
        return cls(list(mapping.keys()), list(mapping.values()))

    @classmethod
    def point(cls, value):
        return cls([value], [1.0])

    def as_dict(self):
        return {float(v): float(p) for v, p in zip(self.values, self.probs)}

    def accept_probs(self, prices):
        """``Pr[v >= p]`` for each entry of ``prices`` (ties buy)."""
        prices = np.asarray(prices, dtype=float)
        tail = np.concatenate([np.cumsum(self.probs[::-1])[::-1], [0.0]])
        idx = np.searchsorted(self.values, prices - TIE_TOL, side="left")
        return tail[idx]

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class PriceGrid:
    """Prices ``x / b`` for ``x = 0..b``."""

    b: int

    def __post_init__(self):
        if int(self.b) < 1:
            raise InvalidInstance(f"grid size b must be >= 1, got {self.b}")
        object.__setattr__(self, "b", int(self.b))

    @property
    def values(self):
        return np.arange(self.b + 1) / self.b

    def __len__(self):
        return self.b + 1


@dataclass(frozen=True)
class PricingResult:
    prices: np.ndarray
    estimate: float
    grid: PriceGrid = None


def _check_dists(dists):
    dists = list(dists)
    if not dists:
        raise InvalidInstance("need at least one buyer distribution")
    for d in dists:
        if not isinstance(d, ScalarDistribution):
            raise InvalidInstance(f"expected ScalarDistribution, got {type(d).__name__}")
    return dists


def project(inst, profile):
    """Push each buyer's valuation distribution through ``v -> v @ xi_i``."""
    profile = check_profile(profile, inst.n_buyers, inst.n_states)
    out = []
    for dist, xi in zip(inst.buyers, profile):
        vals = np.clip(np.round(dist.values @ xi, _SNAP_DECIMALS), 0.0, 1.0)
        out.append(ScalarDistribution(vals, dist.probs))
    return out


def scalar_revenue_from(dists, prices, start=0):
    """Expected revenue of buyers ``start..n-1`` (0-indexed) at ``prices``."""
    dists = _check_dists(dists)
    prices = check_prices(prices, len(dists))
    r = 0.0
    for i in range(len(dists) - 1, start - 1, -1):
        z = float(dists[i].accept_probs(prices[i]))
        r = z * prices[i] + (1.0 - z) * r
    return float(r)


def scalar_revenue(dists, prices):
    return scalar_revenue_from(dists, prices, 0)


def _best_price(dist, candidates, r):
    """Maximize ``p z(p) + (1 - z(p)) r``; near-ties go to the higher price."""
    candidates = np.asarray(candidates, dtype=float)
    z = dist.accept_probs(candidates)
    vals = candidates * z + (1.0 - z) * r
    best = vals.max()
    ok = np.flatnonzero(vals >= best - 1e-12)
    k = ok[np.argmax(candidates[ok])]
    return float(candidates[k]), float(vals[k])


def exact_optimal_prices(dists):
    """Exact revenue-maximizing prices by backward induction.

    For each buyer the objective is piecewise linear in the price with
    breakpoints at support values, so the support values plus the price 1
    (which never does worse than not selling) are the only candidates.

    Returns ``(prices, value)``.
    """
    dists = _check_dists(dists)
    n = len(dists)
    prices = np.zeros(n)
    r = 0.0
    for i in range(n - 1, -1, -1):
        cand = np.union1d(dists[i].values, [1.0])
        prices[i], r = _best_price(dists[i], cand, r)
    return prices, r


def empirical_scalar(dist, K, rng):
    counts = rng.multinomial(int(K), dist.probs)
    keep = counts > 0
    return ScalarDistribution(dist.values[keep], counts[keep] / counts.sum())


def find_apx_prices(dists, K, b, seed=None):
    """Sample-based grid pricing (Find-APX-Prices).

    Builds the empirical distribution of ``K`` i.i.d. samples per buyer, then
    runs backward induction over the price grid ``{0, 1/b, ..., 1}``. With
    ``K=None`` the input distributions are used as-is.
    """
    dists = _check_dists(dists)
    grid = PriceGrid(b)
    if K is not None:
        if int(K) < 1:
            raise InvalidInstance(f"K must be >= 1, got {K}")
        root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        seeds = root.spawn(len(dists))
        dists = [empirical_scalar(d, K, np.random.default_rng(s)) for d, s in zip(dists, seeds)]
    n = len(dists)
    prices = np.zeros(n)
    r = 0.0
    for i in range(n - 1, -1, -1):
        prices[i], r = _best_price(dists[i], grid.values, r)
    return PricingResult(prices=prices, estimate=r, grid=grid)


def lift_prices(dists, prices):
    """Raise each price to at least the continuation revenue of later buyers.

    One backward pass suffices because the continuation revenue after buyer
    ``i`` depends only on the (already lifted) later prices. Revenue never
    decreases: a sale at ``p_i >= Rev_{>i}`` is worth at least the lost
    continuation.
    """
    dists = _check_dists(dists)
    out = check_prices(prices, len(dists)).copy()
    r = 0.0
    for i in range(len(dists) - 1, -1, -1):
        out[i] = max(out[i], r)
        z = float(dists[i].accept_probs(out[i]))
        r = z * out[i] + (1.0 - z) * r
    return out


def decrease_distribution(dists, eps):
    """Shift every support value down by ``eps``, clamping at 0.

    The result satisfies ``Pr[v' >= p - eps] >= Pr[v >= p]`` for every price.
    """
    if eps <= 0:
        raise InvalidInstance(f"eps must be positive, got {eps}")
    return [ScalarDistribution(np.maximum(d.values - eps, 0.0), d.probs)
            for d in _check_dists(dists)]


def apx_grid_size(eps):
    """Grid size ``ceil(2 / eps)`` for an ``eps``-optimal grid price vector."""
    return int(math.ceil(2.0 / eps))


def apx_sample_size(eps, tau, n, b):
    """Samples ``ceil(8 / eps^2 * ln(2 b^n / tau))`` for confidence ``1 - tau``."""
    return int(math.ceil(8.0 / eps ** 2 * (math.log(2.0 / tau) + n * math.log(b))))


def apx_defaults(eps, tau, n):
    """``(K, b)`` for which Find-APX-Prices is ``eps``-optimal w.p. ``1 - tau``."""
    b = apx_grid_size(eps)
    return apx_sample_size(eps, tau, n, b), b
