"""Auction instances, signaling schemes and exact revenue evaluation.

Buyers arrive in index order; buyer ``i`` with posterior ``xi`` accepts a
posted price ``p`` iff its expected valuation ``v @ xi`` is at least ``p``.
The first acceptance ends the auction.
"""
from dataclasses import dataclass, field

import numpy as np

from ._config import DERIVED_TOL, INPUT_TOL, TIE_TOL
from .errors import InvalidInstance, InvalidScheme, ZeroProbabilitySignal
from .validation import check_prices, check_probability_vector, check_profile


@dataclass(frozen=True)
class ValuationDistribution:
    """Finite-support distribution over valuation vectors in ``[0, 1]^d``.

    ``values`` has shape ``(k, d)`` and ``probs`` shape ``(k,)``.
    """

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if values.shape[0] != probs.shape[0]:
            raise InvalidInstance("support and probabilities differ in length")
        if values.shape[0] == 0:
            raise InvalidInstance("empty valuation distribution")
        if np.any(probs <= 0.0):
            raise InvalidInstance("support probabilities must be strictly positive")
        check_probability_vector(probs, "valuation probabilities")
        if not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0:
            raise InvalidInstance("valuation components must lie in [0, 1]")
        values.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_pairs(cls, pairs):
        """Build from ``[(vector, prob), ...]``."""
        pairs = list(pairs)
        if not pairs:
            raise InvalidInstance("empty valuation distribution")
        return cls([np.atleast_1d(v) for v, _ in pairs], [p for _, p in pairs])

    @property
    def dim(self):
        return self.values.shape[1]

    @property
    def support(self):
        return [(tuple(v), float(p)) for v, p in zip(self.values, self.probs)]

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class AuctionInstance:
    """States, common prior and one valuation distribution per buyer."""

    states: tuple
    prior: np.ndarray
    buyers: tuple

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        prior = check_probability_vector(self.prior, "prior").copy()
        if len(states) != prior.size:
            raise InvalidInstance(f"{len(states)} state labels but prior has {prior.size} entries")
        if len(set(states)) != len(states):
            raise InvalidInstance("state labels must be unique")
        buyers = tuple(self.buyers)
        if not buyers:
            raise InvalidInstance("an instance needs at least one buyer")
        for i, dist in enumerate(buyers):
            if not isinstance(dist, ValuationDistribution):
                raise InvalidInstance(f"buyer {i} is not a ValuationDistribution")
            if dist.dim != prior.size:
                raise InvalidInstance(
                    f"buyer {i} valuations have dimension {dist.dim}, expected {prior.size}")
        prior.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "buyers", buyers)

    @property
    def n_buyers(self):
        return len(self.buyers)

    @property
    def n_states(self):
        return self.prior.size


@dataclass(frozen=True)
class SignalingScheme:
    """Signaling scheme with a factorized price function.

    signals
        One tuple of signal labels per buyer.
    kernel
        One mapping ``profile -> probability`` per state, where a profile is a
        tuple holding one label per buyer.
    prices
        One mapping ``label -> price`` per buyer.
    """

    signals: tuple
    kernel: tuple
    prices: tuple

    def __post_init__(self):
        signals = tuple(tuple(str(s) for s in labels) for labels in self.signals)
        kernel = tuple(
            {tuple(str(s) for s in prof): float(pr) for prof, pr in row.items()}
            for row in self.kernel
        )
        prices = tuple({str(k): float(v) for k, v in pm.items()} for pm in self.prices)
        n = len(signals)
        if n == 0 or len(prices) != n:
            raise InvalidScheme("signals and prices must list the same (positive) number of buyers")
        label_sets = [set(labels) for labels in signals]
        for t, row in enumerate(kernel):
            total = 0.0
            for prof, pr in row.items():
                if len(prof) != n:
                    raise InvalidScheme(f"profile {prof} does not have {n} components")
                if pr < -INPUT_TOL or not np.isfinite(pr):
                    raise InvalidScheme(f"negative probability {pr} in state {t}")
                for i, s in enumerate(prof):
                    if s not in label_sets[i]:
                        raise InvalidScheme(f"unknown signal {s!r} for buyer {i}")
                    if pr > 0 and s not in prices[i]:
                        raise InvalidScheme(f"no price for signal {s!r} of buyer {i}")
                total += pr
            if abs(total - 1.0) > DERIVED_TOL:
                raise InvalidScheme(f"kernel row {t} sums to {total!r}")
        for i, pm in enumerate(prices):
            for s, p in pm.items():
                if not 0.0 <= p <= 1.0:
                    raise InvalidScheme(f"price {p} for signal {s!r} of buyer {i} outside [0, 1]")
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "prices", prices)

    @property
    def n_buyers(self):
        return len(self.signals)


@dataclass(frozen=True)
class EmpiricalSample:
    """``draws[k, i]`` is the valuation vector of buyer ``i`` in draw ``k``."""

    draws: np.ndarray
    seed: object = None
    counts: tuple = field(default=(), repr=False)

    @property
    def n_draws(self):
        return self.draws.shape[0]


def _check_scheme_for(inst, scheme):
    if scheme.n_buyers != inst.n_buyers:
        raise InvalidScheme(f"scheme has {scheme.n_buyers} buyers, instance has {inst.n_buyers}")
    if len(scheme.kernel) != inst.n_states:
        raise InvalidScheme(f"scheme has {len(scheme.kernel)} kernel rows, instance has "
                            f"{inst.n_states} states")


def buy_probabilities(dist, xi, prices):
    """Vectorized :func:`buy_probability` over an array of prices."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (dist.dim,):
        raise InvalidInstance(f"posterior has shape {xi.shape}, expected ({dist.dim},)")
    expected = dist.values @ xi
    prices = np.asarray(prices, dtype=float)
    accept = expected[None, :] >= prices.reshape(-1, 1) - TIE_TOL
    return (accept * dist.probs[None, :]).sum(axis=1).reshape(prices.shape)


def buy_probability(dist, xi, price):
    """Probability that a buyer drawn from ``dist`` with belief ``xi`` accepts ``price``.

    Equality counts as a purchase.
    """
    check_prices([price], 1)
    return float(buy_probabilities(dist, xi, np.array([price]))[0])


def revenue_given_probs(accept, prices):
    """Backward recursion ``R_i = z_i p_i + (1 - z_i) R_{i+1}`` with ``R_{n+1} = 0``."""
    r = 0.0
    for z, p in zip(reversed(list(accept)), reversed(list(prices))):
        r = z * p + (1.0 - z) * r
    return float(r)


def revenue_from(inst, profile, prices, start_buyer):
    """Expected revenue of the auction restricted to buyers ``start_buyer, ..., n-1``.

    Buyers are 0-indexed; ``start_buyer == n`` gives the empty auction (0).
    """
    n, d = inst.n_buyers, inst.n_states
    if not 0 <= start_buyer <= n:
        raise InvalidInstance(f"start_buyer must lie in [0, {n}], got {start_buyer}")
    profile = check_profile(profile, n, d, tol=DERIVED_TOL)
    prices = check_prices(prices, n)
    accept = [
        buy_probability(inst.buyers[i], profile[i], prices[i]) for i in range(start_buyer, n)
    ]
    return revenue_given_probs(accept, prices[start_buyer:])


def revenue(inst, profile, prices):
    """Exact expected revenue for posteriors ``profile`` and posted ``prices``.

    ``profile`` is either an ``(n, d)`` array or a single common posterior.
    """
    return revenue_from(inst, profile, prices, 0)


def _signal_marginals(inst, scheme):
    """``out[i][label][theta] = mu_theta * phi_{i,theta}(label)``."""
    out = [dict() for _ in range(inst.n_buyers)]
    for t, row in enumerate(scheme.kernel):
        mu = inst.prior[t]
        for prof, pr in row.items():
            for i, s in enumerate(prof):
                vec = out[i].setdefault(s, np.zeros(inst.n_states))
                vec[t] += mu * pr
    return out


def _normalize_marginal(joint, buyer, signal):
    total = joint.sum()
    if total <= 0.0:
        raise ZeroProbabilitySignal(f"signal {signal!r} of buyer {buyer} is never sent")
    return joint / total


def posterior_of_signal(inst, scheme, buyer, signal):
    """Bayes posterior of ``buyer`` after observing ``signal``."""
    _check_scheme_for(inst, scheme)
    if not 0 <= buyer < inst.n_buyers:
        raise InvalidInstance(f"buyer index {buyer} out of range")
    joint = _signal_marginals(inst, scheme)[buyer].get(str(signal))
    if joint is None:
        raise ZeroProbabilitySignal(f"signal {signal!r} of buyer {buyer} is never sent")
    return _normalize_marginal(joint, buyer, signal)


def scheme_value(inst, scheme):
    """Seller's expected revenue under the committed scheme and price function."""
    _check_scheme_for(inst, scheme)
    marginals = _signal_marginals(inst, scheme)
    posteriors = [
        {s: joint / joint.sum() for s, joint in m.items() if joint.sum() > 0.0}
        for m in marginals
    ]
    # revenue depends on the profile only, so aggregate its probability first
    weight = {}
    for t, row in enumerate(scheme.kernel):
        mu = inst.prior[t]
        if mu == 0.0:
            continue
        for prof, pr in row.items():
            if pr > 0.0:
                weight[prof] = weight.get(prof, 0.0) + mu * pr
    total = 0.0
    for prof, wt in weight.items():
        accept = [
            float(buy_probabilities(inst.buyers[i], posteriors[i][s],
                                    np.array([scheme.prices[i][s]]))[0])
            for i, s in enumerate(prof)
        ]
        prices = [scheme.prices[i][s] for i, s in enumerate(prof)]
        total += wt * revenue_given_probs(accept, prices)
    return float(total)


def uninformative_scheme(inst, prices, label="s0"):
    """One signal per buyer, sent in every state, with fixed prices."""
    prices = check_prices(prices, inst.n_buyers)
    n = inst.n_buyers
    profile = (label,) * n
    return SignalingScheme(
        signals=[(label,)] * n,
        kernel=[{profile: 1.0} for _ in range(inst.n_states)],
        prices=[{label: float(p)} for p in prices],
    )


def _buyer_seeds(seed, n):
    return np.random.SeedSequence(seed).spawn(n)


def sample_counts(inst, K, seed):
    """Per-buyer multinomial counts over support atoms for ``K`` i.i.d. draws."""
    if K < 1:
        raise InvalidInstance(f"K must be >= 1, got {K}")
    counts = []
    for dist, ss in zip(inst.buyers, _buyer_seeds(seed, inst.n_buyers)):
        rng = np.random.default_rng(ss)
        counts.append(rng.multinomial(int(K), dist.probs))
    return counts


def sample_valuations(inst, K, seed):
    """Draw ``K`` i.i.d. valuation matrices, independently per buyer.

    Each buyer gets its own sub-stream derived from ``seed``, so the draws of
    one buyer do not depend on how many buyers precede it.
    """
    if K < 1:
        raise InvalidInstance(f"K must be >= 1, got {K}")
    draws = np.empty((int(K), inst.n_buyers, inst.n_states))
    counts = []
    for i, (dist, ss) in enumerate(zip(inst.buyers, _buyer_seeds(seed, inst.n_buyers))):
        rng = np.random.default_rng(ss)
        idx = rng.choice(len(dist), size=int(K), p=dist.probs)
        draws[:, i, :] = dist.values[idx]
        counts.append(np.bincount(idx, minlength=len(dist)))
    return EmpiricalSample(draws=draws, seed=seed, counts=tuple(counts))


def empirical_distribution(dist, counts):
    """Distribution over the atoms of ``dist`` with frequencies ``counts / sum(counts)``."""
    counts = np.asarray(counts)
    keep = counts > 0
    return ValuationDistribution(dist.values[keep], counts[keep] / counts.sum())


def empirical_instance(inst, K, seed):
    """Instance whose buyers are the empirical distributions of ``K`` samples.

    ``K=None`` returns ``inst`` unchanged (exact mode).
    """
    if K is None:
        return inst
    counts = sample_counts(inst, K, seed)
    buyers = [empirical_distribution(d, c) for d, c in zip(inst.buyers, counts)]
    return AuctionInstance(inst.states, inst.prior, buyers)
