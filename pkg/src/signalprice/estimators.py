"""scikit-learn style wrappers around the solvers.

``fit`` takes an :class:`~signalprice.core.AuctionInstance` in place of a
feature matrix; fitted attributes end with an underscore.
"""
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import AuctionInstance, revenue, scheme_value
from .errors import InvalidInstance
from .pricing import exact_optimal_prices, find_apx_prices, project
from .private import solve_private
from .public import public_params, recover_scheme_public, solve_public


def _check_instance(inst):
    if not isinstance(inst, AuctionInstance):
        raise InvalidInstance(f"expected an AuctionInstance, got {type(inst).__name__}")
    return inst


class PostedPriceOptimizer(BaseEstimator):
    """Revenue-maximizing posted prices for a fixed posterior profile.

    With ``b=None`` prices are exact; otherwise they lie on the grid of step
    ``1/b``, optimized against ``K`` samples (exact distributions when
    ``K=None``).
    """

    def __init__(self, b=None, K=None, seed=None):
        self.b = b
        self.K = K
        self.seed = seed

    def fit(self, inst, posterior=None):
        inst = _check_instance(inst)
        profile = inst.prior if posterior is None else posterior
        dists = project(inst, profile)
        if self.b is None:
            if self.K is not None:
                raise InvalidInstance("sampling needs a price grid (set b)")
            self.prices_, self.estimate_ = exact_optimal_prices(dists)
        else:
            res = find_apx_prices(dists, self.K, self.b, self.seed)
            self.prices_, self.estimate_ = res.prices, res.estimate
        self.profile_ = np.asarray(profile, dtype=float)
        self.value_ = revenue(inst, self.profile_, self.prices_)
        return self

    def predict(self, inst=None):
        check_is_fitted(self, "prices_")
        return self.prices_.copy()

    def score(self, inst, posterior=None):
        """Exact expected revenue of the fitted prices."""
        check_is_fitted(self, "prices_")
        profile = self.profile_ if posterior is None else posterior
        return revenue(_check_instance(inst), profile, self.prices_)


class PublicSignalingSolver(BaseEstimator):
    """Public signaling over q-uniform posteriors.

    Give either ``lam`` (theoretical parameters) or ``q`` with
    ``exact_coefficients=True`` or with ``b`` and ``K``.
    """

    def __init__(self, q=None, b=None, K=None, lam=None, seed=None, exact_coefficients=False):
        self.q = q
        self.b = b
        self.K = K
        self.lam = lam
        self.seed = seed
        self.exact_coefficients = exact_coefficients

    def fit(self, inst, y=None):
        inst = _check_instance(inst)
        q, b, K = self.q, self.b, self.K
        if self.lam is not None:
            pp = public_params(self.lam, inst.n_states, inst.n_buyers)
            q = pp.q if q is None else q
            b = pp.b if b is None else b
            K = pp.K if K is None else K
        if q is None:
            raise InvalidInstance("set q or lam")
        self.solution_ = solve_public(inst, q, K=K, b=b, seed=self.seed,
                                      exact_coefficients=self.exact_coefficients)
        self.scheme_ = recover_scheme_public(inst, self.solution_)
        self.gamma_ = self.solution_.gamma
        self.value_ = self.solution_.value
        return self

    def predict(self, inst=None):
        """The recovered signaling scheme."""
        check_is_fitted(self, "scheme_")
        return self.scheme_

    def score(self, inst, y=None):
        check_is_fitted(self, "scheme_")
        return scheme_value(_check_instance(inst), self.scheme_)


class PrivateSignalingSolver(BaseEstimator):
    """Private signaling via bisection and the ellipsoid method."""

    def __init__(self, lam=None, q=None, b=None, K=None, delta=None, beta=None, seed=None,
                 exact_coefficients=False, check_every=100):
        self.lam = lam
        self.q = q
        self.b = b
        self.K = K
        self.delta = delta
        self.beta = beta
        self.seed = seed
        self.exact_coefficients = exact_coefficients
        self.check_every = check_every

    def fit(self, inst, y=None):
        inst = _check_instance(inst)
        self.solution_ = solve_private(
            inst, lam=self.lam, q=self.q, b=self.b, delta=self.delta, beta=self.beta,
            K=self.K, seed=self.seed, exact_coefficients=self.exact_coefficients,
            check_every=self.check_every)
        self.scheme_ = self.solution_.scheme
        self.gamma_ = self.solution_.gamma
        self.value_ = self.solution_.value
        return self

    def predict(self, inst=None):
        check_is_fitted(self, "scheme_")
        return self.scheme_

    def score(self, inst, y=None):
        check_is_fitted(self, "scheme_")
        return scheme_value(_check_instance(inst), self.scheme_)
