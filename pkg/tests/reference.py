"""Slow, independent reference implementations used as test oracles.

Nothing here imports the solver modules: revenues are computed by walking
every joint valuation draw through the auction.
"""
import itertools
from fractions import Fraction

import numpy as np


def naive_revenue(supports, posteriors, prices, tie_tol=0.0):
    """Expected revenue by enumerating joint draws.

    ``supports[i]`` is a list of ``(vector, prob)``; ``posteriors[i]`` the
    belief of buyer ``i``. The first buyer whose expected value reaches the
    price buys.
    """
    total = 0.0
    for draw in itertools.product(*supports):
        prob = 1.0
        for _, p in draw:
            prob *= p
        for (v, _), xi, price in zip(draw, posteriors, prices):
            if float(np.dot(v, xi)) >= price - tie_tol:
                total += prob * price
                break
    return total


def naive_scalar_revenue(dists, prices):
    """``dists[i]`` is a dict value -> prob."""
    supports = [[((v,), p) for v, p in d.items()] for d in dists]
    return naive_revenue(supports, [(1.0,)] * len(dists), prices)


def best_scalar_prices(dists, candidates=None):
    """Exhaustive optimum over candidate prices (support values plus 1 by default)."""
    if candidates is None:
        candidates = [sorted(set(d) | {1.0}) for d in dists]
    best, arg = -1.0, None
    for prices in itertools.product(*candidates):
        r = naive_scalar_revenue(dists, prices)
        if r > best + 1e-15:
            best, arg = r, prices
    return best, arg


def multinomial_law(xi, q):
    """Exact law of the mean of ``q`` basis draws from ``xi`` with rational arithmetic."""
    xi = [Fraction(x).limit_denominator(10 ** 9) for x in xi]
    d = len(xi)
    law = {}
    for seq in itertools.product(range(d), repeat=q):
        counts = tuple(seq.count(j) for j in range(d))
        w = Fraction(1)
        for j in seq:
            w *= xi[j]
        law[counts] = law.get(counts, Fraction(0)) + w
    return {k: v for k, v in law.items() if v > 0}
