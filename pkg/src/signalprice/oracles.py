"""Baselines, exhaustive references and instance generators.

The brute-force routines avoid the solvers they are meant to check: public
optima come from enumerating vertices of the consistency polytope and price
vectors, MAX-LINREV from enumerating every (posterior, price) profile.
"""
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from ._config import enumeration_cap
from .core import AuctionInstance, ValuationDistribution
from .decomposition import enumerate_q_uniform
from .errors import InvalidInstance, TooLarge
from .maxlinrev import linrev_objective
from .pricing import PriceGrid, exact_optimal_prices, project, scalar_revenue


def no_signaling_value(inst):
    """Optimal revenue when every buyer keeps the prior."""
    return exact_optimal_prices(project(inst, inst.prior))[1]


def full_revelation_value(inst):
    """Optimal revenue when the state is revealed to every buyer."""
    total = 0.0
    for t, mu in enumerate(inst.prior):
        if mu > 0.0:
            total += mu * exact_optimal_prices(project(inst, np.eye(inst.n_states)[t]))[1]
    return float(total)


def _best_by_enumeration(dists, candidates, limit):
    count = math.prod(len(c) for c in candidates)
    if count > limit:
        raise TooLarge(f"{count} price vectors exceed cap {limit}")
    best, arg = 0.0, np.array([c[0] for c in candidates], dtype=float)
    for prices in itertools.product(*candidates):
        r = scalar_revenue(dists, prices)
        if r > best:
            best, arg = r, np.array(prices, dtype=float)
    return best, arg


def _vertex_optimum(posteriors, coef, prior):
    """Maximum of ``coef @ g`` over ``g >= 0`` with ``g @ posteriors = prior``.

    Enumerates basic solutions on ``d`` posteriors (the simplex row is
    implied by the others since every posterior sums to one).
    """
    m, d = posteriors.shape
    best, best_g = -np.inf, None
    for subset in itertools.combinations(range(m), d):
        M = posteriors[list(subset)].T
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        g = np.linalg.solve(M, prior)
        if g.min() < -1e-12:
            continue
        val = float(coef[list(subset)] @ g)
        if val > best:
            best = val
            best_g = np.zeros(m)
            best_g[list(subset)] = np.clip(g, 0.0, None)
    return best, best_g


@dataclass(frozen=True)
class BruteForcePublic:
    """Exact q-restricted public optimum with unrestricted prices (``value``)
    and with prices on the grid of step ``1/b`` (``grid_value``)."""

    value: float
    grid_value: float
    weights: np.ndarray
    grid_weights: np.ndarray
    posteriors: np.ndarray


def brute_force_public(inst, q, b=None, cap=None):
    """Exhaustive public optimum over q-uniform posteriors.

    Per posterior the best price vector is found by enumerating candidate
    prices (projected support values plus the no-sale price 1 for the
    unrestricted optimum, the grid otherwise); the distribution over
    posteriors by enumerating vertices.
    """
    limit = enumeration_cap(cap)
    xs = enumerate_q_uniform(inst.n_states, q, cap)
    post = xs.posteriors
    n_vert = math.comb(len(xs), inst.n_states)
    if n_vert > limit:
        raise TooLarge(f"{n_vert} candidate vertices exceed cap {limit}")
    free = np.zeros(len(xs))
    on_grid = np.zeros(len(xs))
    grid = None if b is None else list(PriceGrid(b).values)
    for k, xi in enumerate(post):
        dists = project(inst, xi)
        free[k] = _best_by_enumeration(
            dists, [sorted(set(dd.values) | {1.0}) for dd in dists], limit)[0]
        if grid is not None:
            on_grid[k] = _best_by_enumeration(dists, [grid] * len(dists), limit)[0]
    value, weights = _vertex_optimum(post, free, inst.prior)
    if grid is None:
        grid_value, grid_weights = float("nan"), None
    else:
        grid_value, grid_weights = _vertex_optimum(post, on_grid, inst.prior)
    return BruteForcePublic(value=float(value), grid_value=float(grid_value), weights=weights,
                            grid_weights=grid_weights, posteriors=post)


def brute_force_max_linrev(w, z, grid, cap=None):
    """Exact MAX-LINREV by enumeration; returns ``(value, xi_idx, p_idx)``."""
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    n, m, B = z.shape
    count = (m * B) ** n
    limit = enumeration_cap(cap)
    if count > limit:
        raise TooLarge(f"{count} MAX-LINREV profiles exceed cap {limit}")
    cells = list(itertools.product(range(m), range(B)))
    best, arg = -np.inf, None
    for prof in itertools.product(cells, repeat=n):
        xi_idx = tuple(k for k, _ in prof)
        p_idx = tuple(p for _, p in prof)
        val = linrev_objective(z, w, grid, xi_idx, p_idx)
        if val > best:
            best, arg = val, (xi_idx, p_idx)
    return float(best), arg[0], arg[1]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..m-1``."""

    m: int
    edges: frozenset

    def __post_init__(self):
        m = int(self.m)
        edges = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InvalidInstance(f"self-loop at vertex {u}")
            if not (0 <= u < m and 0 <= v < m):
                raise InvalidInstance(f"edge ({u}, {v}) references a missing vertex")
            edges.add(frozenset((u, v)))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "edges", frozenset(edges))

    def adjacent(self, u, v):
        return frozenset((u, v)) in self.edges

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(int(data["m"]), [tuple(e) for e in data["edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstance(f"malformed graph: {exc}") from exc

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InvalidInstance(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InvalidInstance(f"malformed graph JSON: {exc}") from exc
        return cls.from_dict(data)


def hardness_outside_value(m, l=5, eps=0.5):
    """Unclamped common valuation ``1/2 + l / ((1 - eps) 2 m)`` of the extra type."""
    return 0.5 + l / ((1.0 - eps) * 2.0 * m)


def gen_hardness_instance(graph, k=2, l=5, eps=0.5, clamp=True):
    """Single-buyer instance built from ``graph``.

    One state per vertex under a uniform prior. Vertex type ``u`` values its
    own state at 1, neighbouring states at 0 and the rest at 1/2, each with
    probability ``1/m^2``; the remaining mass ``1 - 1/m`` goes to a type with
    the same value ``1/2 + l/((1 - eps) 2m)`` in every state. That value
    exceeds 1 for small ``m``; ``clamp`` caps it at 1 so the instance stays
    in the unit cube. ``k`` only parameterizes the reduction's analysis.
    """
    m = graph.m
    if m < 2:
        raise InvalidInstance(f"hardness gadget needs m >= 2 vertices, got {m}")
    if k < 1:
        raise InvalidInstance(f"k must be >= 1, got {k}")
    vo = hardness_outside_value(m, l, eps)
    if vo > 1.0:
        if not clamp:
            raise InvalidInstance(f"extra-type valuation {vo:.4f} exceeds 1 for m={m}")
        vo = 1.0
    values = np.full((m + 1, m), 0.5)
    for u in range(m):
        for v in range(m):
            if u == v:
                values[u, v] = 1.0
            elif graph.adjacent(u, v):
                values[u, v] = 0.0
    values[m] = vo
    probs = np.concatenate([np.full(m, 1.0 / m ** 2), [1.0 - 1.0 / m]])
    return AuctionInstance([f"theta{u}" for u in range(m)], np.full(m, 1.0 / m),
                           [ValuationDistribution(values, probs)])


def gen_random_instance(seed, n, d, support_size):
    """Random instance: normalized uniform prior and supports with uniform
    valuation vectors and normalized uniform weights."""
    if n < 1 or d < 1 or support_size < 1:
        raise InvalidInstance("n, d and support_size must be positive")
    rng = np.random.default_rng(seed)
    prior = rng.random(d) + 1e-3
    prior /= prior.sum()
    buyers = []
    for _ in range(n):
        values = rng.random((support_size, d))
        probs = rng.random(support_size) + 1e-3
        buyers.append(ValuationDistribution(values, probs / probs.sum()))
    return AuctionInstance([f"s{t}" for t in range(d)], prior, buyers)
