"""Public signaling: LP over q-uniform posteriors and scheme recovery."""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _lp
from ._config import DERIVED_TOL
from .core import SignalingScheme, revenue
from .decomposition import (PosteriorDistribution, basis_rows, enumerate_q_uniform,
                            q_public, q_uniform_size, restore_mean)
from .errors import InconsistentDistribution, InfeasiblePrior, InvalidInstance
from .pricing import exact_optimal_prices, find_apx_prices, project

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PublicSolution:
    """Distribution over posteriors, a price vector per posterior, and true revenue.

    ``prices[k]`` is the price vector posted when the common posterior is
    ``gamma.atoms[k]``. ``value`` is the exact expected revenue; ``estimate``
    is the LP objective computed from the (possibly sampled) coefficients.
    """

    gamma: PosteriorDistribution
    prices: np.ndarray
    value: float
    estimate: float
    q: int
    b: int = None


class PublicParams(NamedTuple):
    eta: float
    eps: float
    tau: float
    q: int
    b: int
    K: int


def public_params(lam, d, n):
    """Theoretical parameters for additive error ``lam``.

    ``tau`` uses the exact count ``|Xi^q|`` of q-uniform posteriors.
    """
    if not 0 < lam < 1:
        raise InvalidInstance(f"lambda must lie in (0, 1), got {lam}")
    eta, eps = lam / 3.0, lam / 6.0
    q = q_public(eta)
    tau = lam / (3.0 * q_uniform_size(d, q))
    b = int(np.ceil(2.0 / eps))
    K = int(np.ceil(8.0 / eps ** 2 * (np.log(2.0 / tau) + n * np.log(b))))
    return PublicParams(eta=eta, eps=eps, tau=tau, q=q, b=b, K=K)


def estimate_coefficients(inst, posteriors, K, b, seed=None, exact=False):
    """Price vector and revenue estimate for every posterior in ``posteriors``.

    Sampling mode runs Find-APX-Prices on the instance projected at each
    posterior, with an independent sub-seed per posterior. ``exact=True``
    skips sampling: grid-restricted exact pricing when ``b`` is given,
    unrestricted exact pricing otherwise.

    Returns ``(prices, estimates)`` with shapes ``(m, n)`` and ``(m,)``.
    """
    posteriors = np.atleast_2d(posteriors)
    m = posteriors.shape[0]
    prices = np.zeros((m, inst.n_buyers))
    est = np.zeros(m)
    seeds = np.random.SeedSequence(seed).spawn(m)
    for k, xi in enumerate(posteriors):
        dists = project(inst, xi)
        if exact and b is None:
            prices[k], est[k] = exact_optimal_prices(dists)
        else:
            res = find_apx_prices(dists, None if exact else K, b, seeds[k])
            prices[k], est[k] = res.prices, res.estimate
    return prices, est


def solve_public(inst, q, K=None, b=None, seed=None, exact_coefficients=False, cap=None):
    """Best distribution over q-uniform posteriors with estimated revenues.

    Returns a :class:`PublicSolution` whose ``value`` is re-evaluated exactly
    at the chosen prices.
    """
    if not exact_coefficients and (K is None or b is None):
        raise InvalidInstance("sampling mode needs both K and b")
    xs = enumerate_q_uniform(inst.n_states, q, cap)
    post = xs.posteriors
    prices, est = estimate_coefficients(inst, post, K, b, seed, exact=exact_coefficients)
    A_eq = np.vstack([post.T, np.ones(len(xs))])
    b_eq = np.concatenate([inst.prior, [1.0]])
    res = _lp.maximize(est, A_eq=A_eq, b_eq=b_eq)
    if not res.ok:
        raise InfeasiblePrior(f"LP over q-uniform posteriors failed ({res.message}); "
                              f"try a larger q")
    scale, extra = restore_mean(res.x, post, inst.prior, basis_rows(xs))
    x = scale * np.clip(res.x, 0.0, None) + extra
    keep = x > 1e-15
    gamma = PosteriorDistribution(post[keep], x[keep])
    value = float(sum(w * revenue(inst, xi, p)
                      for w, xi, p in zip(gamma.weights, gamma.atoms, prices[keep])))
    logger.info("solve_public q=%d b=%s support=%d estimate=%.6f value=%.6f",
                q, b, len(gamma), res.value, value)
    return PublicSolution(gamma=gamma, prices=prices[keep], value=value,
                          estimate=float(res.value), q=q, b=b)


def recover_scheme_public(inst, sol):
    """Public signaling scheme with one signal per posterior in the support.

    Signal ``s_k`` is sent in state ``theta`` with probability
    ``gamma_k * xi_k(theta) / mu_theta``.
    """
    gamma = sol.gamma
    if np.max(np.abs(gamma.mean - inst.prior)) > DERIVED_TOL:
        raise InconsistentDistribution(
            f"posterior mean {gamma.mean} differs from prior {inst.prior}")
    n = inst.n_buyers
    labels = [f"s{k + 1}" for k in range(len(gamma))]
    kernel = []
    for t, mu in enumerate(inst.prior):
        if mu <= 0.0:
            kernel.append({(labels[0],) * n: 1.0})
            continue
        col = gamma.weights * gamma.atoms[:, t] / mu
        col = col / col.sum()
        kernel.append({(s,) * n: float(x) for s, x in zip(labels, col) if x > 0.0})
    prices = [{s: float(sol.prices[k, i]) for k, s in enumerate(labels)} for i in range(n)]
    return SignalingScheme(signals=[tuple(labels)] * n, kernel=kernel, prices=prices)
