"""q-uniform posteriors and the multinomial decomposition of a posterior.

A posterior is q-uniform when every entry is a multiple of ``1/q``, i.e. it
is the average of ``q`` basis vectors. Averaging ``q`` i.i.d. basis vectors
drawn from ``xi`` gives a random q-uniform posterior whose law has mean
``xi``; :func:`decompose` returns that law exactly.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ._config import enumeration_cap
from .errors import InvalidInstance, TooLarge
from .validation import check_posterior


@dataclass(frozen=True)
class QUniformSet:
    """All q-uniform posteriors over ``d`` states.

    ``counts[k]`` is the integer vector with ``posteriors[k] = counts[k] / q``.
    Rows are in decreasing lexicographic order of ``counts``.
    """

    d: int
    q: int
    counts: np.ndarray

    @property
    def posteriors(self):
        return self.counts / self.q

    def __len__(self):
        return self.counts.shape[0]

    def index(self, counts):
        """Row index of an integer count vector."""
        hits = np.flatnonzero(np.all(self.counts == np.asarray(counts), axis=1))
        if hits.size == 0:
            raise KeyError(tuple(counts))
        return int(hits[0])


@dataclass(frozen=True)
class PosteriorDistribution:
    """Weighted finite set of posteriors (rows of ``atoms``) with their mean."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if atoms.shape[0] != weights.size or weights.size == 0:
            raise InvalidInstance("atoms and weights must be non-empty and aligned")
        if np.any(weights <= 0):
            raise InvalidInstance("atom weights must be positive")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def mean(self):
        return self.weights @ self.atoms

    def __len__(self):
        return self.weights.size


def q_uniform_size(d, q):
    """``C(q + d - 1, d - 1)``."""
    return math.comb(q + d - 1, d - 1)


def _compositions(q, d):
    """Integer vectors of length ``d`` summing to ``q``, decreasing lexicographic."""
    if d == 1:
        yield (q,)
        return
    for first in range(q, -1, -1):
        for rest in _compositions(q - first, d - 1):
            yield (first,) + rest


def enumerate_q_uniform(d, q, cap=None):
    if d < 1 or q < 1:
        raise InvalidInstance(f"need d >= 1 and q >= 1, got d={d}, q={q}")
    size = q_uniform_size(d, q)
    limit = enumeration_cap(cap)
    if size > limit:
        raise TooLarge(f"|Xi^q| = {size} exceeds cap {limit} (d={d}, q={q})")
    counts = np.array(list(_compositions(q, d)), dtype=np.int64).reshape(size, d)
    counts.setflags(write=False)
    return QUniformSet(d=d, q=q, counts=counts)


def _multinomial_log_weights(counts, xi):
    q = counts[0].sum()
    with np.errstate(divide="ignore"):
        logxi = np.log(xi)
    terms = np.where(counts > 0, counts * logxi, 0.0)
    return gammaln(q + 1) - gammaln(counts + 1).sum(axis=1) + terms.sum(axis=1)


def decompose(xi, q, cap=None):
    """Exact law of the empirical mean of ``q`` basis vectors drawn i.i.d. from ``xi``.

    Atom ``k / q`` has weight ``multinomial(q; k) * prod_j xi_j^k_j``. Atoms
    of zero weight (those using a state outside the support of ``xi``) are
    omitted.
    """
    xi = check_posterior(xi)
    d = xi.size
    support = np.flatnonzero(xi > 0)
    sub = enumerate_q_uniform(support.size, q, cap)
    w = np.exp(_multinomial_log_weights(sub.counts, xi[support]))
    keep = w > 0
    counts = np.zeros((int(keep.sum()), d), dtype=np.int64)
    counts[:, support] = sub.counts[keep]
    w = w[keep]
    return PosteriorDistribution(counts / q, w / w.sum())


def decompose_sampled(xi, q, n_samples, seed=None):
    """Monte-Carlo version of :func:`decompose` with merged duplicate atoms.

    Only meant for stress tests where the exact atom set is too large.
    """
    xi = check_posterior(xi)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(q, xi, size=int(n_samples))
    uniq, freq = np.unique(counts, axis=0, return_counts=True)
    return PosteriorDistribution(uniq / q, freq / freq.sum())


def conditional_on_state(gamma, state, j, q):
    """Condition ``gamma`` on atoms whose ``state`` entry equals ``j / q``."""
    mask = np.isclose(gamma.atoms[:, state] * q, j, atol=1e-9)
    if not mask.any():
        return None
    w = gamma.weights[mask]
    return PosteriorDistribution(gamma.atoms[mask], w / w.sum())


def decreasing_fraction(gamma, xi, V, eps):
    """Per-row probability ``Pr_{xt ~ gamma}[V_i xt >= V_i xi - eps]``."""
    V = np.atleast_2d(np.asarray(V, dtype=float))
    xi = np.asarray(xi, dtype=float)
    if V.shape[1] != xi.size or gamma.atoms.shape[1] != xi.size:
        raise InvalidInstance("dimension mismatch between V, xi and gamma")
    lhs = gamma.atoms @ V.T
    rhs = V @ xi - eps
    ok = lhs >= rhs[None, :] - 1e-12
    return gamma.weights @ ok


def is_decreasing(gamma, xi, V, alpha, eps):
    """Whether ``gamma`` is (alpha, eps)-decreasing around ``xi`` for every row of ``V``."""
    return bool(np.all(decreasing_fraction(gamma, xi, V, eps) >= 1.0 - alpha - 1e-12))


def q_for(alpha, eps):
    """``ceil(32 / eps^2 * ln(4 / alpha))``."""
    if not (0 < alpha and 0 < eps < 1):
        raise InvalidInstance(f"need alpha > 0 and 0 < eps < 1, got {alpha}, {eps}")
    return int(math.ceil(32.0 / eps ** 2 * math.log(4.0 / alpha)))


def q_public(eta):
    """``ceil(128 / eta^2 * ln(6 / eta))``."""
    if not 0 < eta < 1:
        raise InvalidInstance(f"need 0 < eta < 1, got {eta}")
    return int(math.ceil(128.0 / eta ** 2 * math.log(6.0 / eta)))


def restore_mean(weights, atoms, prior, basis, tol=1e-14):
    """Repair LP round-off so that ``weights @ atoms`` equals ``prior``.

    ``basis[t]`` is the row of ``atoms`` equal to the ``t``-th basis vector.
    Weights are scaled down just enough that no state is over-covered, and the
    leftover prior mass of each state goes to its basis posterior. Returns
    ``(scale, extra)`` where the repaired weights are
    ``scale * weights + extra`` and ``extra`` is supported on ``basis``.
    """
    weights = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    prior = np.asarray(prior, dtype=float)
    mean = weights @ atoms
    over = mean > prior
    scale = 1.0
    if np.any(over):
        scale = float(np.min(prior[over] / mean[over]))
    resid = prior - scale * mean
    extra = np.zeros(atoms.shape[0])
    for t, r in enumerate(resid):
        if r > tol:
            extra[basis[t]] += r
    return scale, extra


def basis_rows(qset):
    """Row index in ``qset`` of each basis posterior."""
    return [qset.index(qset.q * np.eye(qset.d, dtype=np.int64)[t]) for t in range(qset.d)]
