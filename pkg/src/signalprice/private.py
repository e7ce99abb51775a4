"""Private signaling: the exponential LP over (posterior, price) profiles, its
relaxation and dual, bisection with the ellipsoid method, and scheme recovery.

Variables of the primal, per buyer ``i``, q-uniform posterior index ``k`` and
grid price index ``p``:

* ``gamma[i, k]``: probability that buyer ``i`` ends with posterior ``k``;
* ``t[i, k, p]``: probability that, in addition, the price is ``grid[p]``;
* ``y[(theta, ks, ps)]``: joint probability of state ``theta`` and the
  per-buyer profile ``(ks, ps)``; kept sparse.

The dual has variables ``a[i, theta]``, ``w[theta, i, k, p] <= 0`` and
``c[i, k]``; its exponentially many rows (one per ``y`` column) are
separated by :func:`signalprice.maxlinrev.dp_max_linrev`.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.sparse import coo_matrix

from . import _lp
from ._config import DERIVED_TOL, enumeration_cap
from .core import SignalingScheme, buy_probabilities, empirical_instance
from .decomposition import basis_rows, enumerate_q_uniform, q_for, q_uniform_size, restore_mean
from .ellipsoid import Cut, ellipsoid_feasibility
from .errors import InconsistentSolution, InvalidInstance, NumericalFailure, TooLarge
from .maxlinrev import dp_max_linrev, linrev_objective
from .pricing import PriceGrid

logger = logging.getLogger(__name__)

# a row of the dual counts as violated only beyond this margin
VIOLATION_TOL = 1e-9


class YColumnId(NamedTuple):
    """One ``y`` column: a state and per-buyer posterior and price indices."""

    theta: int
    xi: tuple
    p: tuple


@dataclass(frozen=True)
class PrivateProgram:
    """Index spaces and revenue coefficients shared by every private LP.

    ``z[i, k, p]`` is buyer ``i``'s acceptance probability at posterior ``k``
    and price ``grid[p]`` under the (possibly empirical) distributions used
    for optimization; ``z_true`` uses the instance's own distributions.
    """

    inst: object
    q: int
    b: int
    posteriors: np.ndarray
    grid: np.ndarray
    z: np.ndarray
    z_true: np.ndarray
    basis: tuple

    @property
    def n(self):
        return self.inst.n_buyers

    @property
    def d(self):
        return self.inst.n_states

    @property
    def m(self):
        return self.posteriors.shape[0]

    @property
    def B(self):
        return self.grid.size

    # dual layout: a (n, d) | w (d, n, m, B) | c (n, m)
    @property
    def n_a(self):
        return self.n * self.d

    @property
    def n_w(self):
        return self.d * self.n * self.m * self.B

    @property
    def n_c(self):
        return self.n * self.m

    @property
    def dual_dim(self):
        return self.n_a + self.n_w + self.n_c

    def w_index(self, theta, i, k, p):
        return self.n_a + ((theta * self.n + i) * self.m + k) * self.B + p

    def c_index(self, i, k):
        return self.n_a + self.n_w + i * self.m + k

    def a_index(self, i, theta):
        return i * self.d + theta

    def revenue(self, col, true=False):
        """Revenue of the profile of ``col`` (a :class:`YColumnId`)."""
        z = self.z_true if true else self.z
        return linrev_objective(z, np.zeros_like(z), self.grid, col.xi, col.p)

    def label(self, i, k, p):
        counts = np.rint(self.posteriors[k] * self.q).astype(int)
        xi = ",".join(f"{c}/{self.q}" for c in counts)
        return f"{xi}|{p}/{self.b}"


def acceptance_tensor(inst, posteriors, grid):
    """``z[i, k, p]``: probability buyer ``i`` buys at ``grid[p]`` with posterior ``k``."""
    z = np.empty((inst.n_buyers, posteriors.shape[0], grid.size))
    for i, dist in enumerate(inst.buyers):
        for k, xi in enumerate(posteriors):
            z[i, k] = buy_probabilities(dist, xi, grid)
    return z


def build_program(inst, q, b, K=None, seed=None, cap=None):
    """Enumerate posteriors and grid and tabulate acceptance probabilities.

    ``K=None`` uses the exact distributions; otherwise each buyer's
    distribution is replaced by the empirical one of ``K`` draws.
    """
    qset = enumerate_q_uniform(inst.n_states, q, cap)
    grid = PriceGrid(b).values
    posteriors = qset.posteriors
    z_true = acceptance_tensor(inst, posteriors, grid)
    if K is None:
        z = z_true
    else:
        z = acceptance_tensor(empirical_instance(inst, K, seed), posteriors, grid)
    limit = enumeration_cap(cap)
    dim = inst.n_buyers * (inst.n_states + len(qset) * (inst.n_states * grid.size + 1))
    if dim > limit:
        raise TooLarge(f"dual dimension {dim} exceeds cap {limit}")
    return PrivateProgram(inst=inst, q=q, b=b, posteriors=posteriors, grid=grid, z=z,
                          z_true=z_true, basis=tuple(basis_rows(qset)))


@dataclass
class DualPoint:
    """Dual variables ``a (n, d)``, ``w (d, n, m, B)`` and ``c (n, m)``."""

    a: np.ndarray
    w: np.ndarray
    c: np.ndarray

    @classmethod
    def from_vector(cls, program, x):
        pr = program
        x = np.asarray(x, dtype=float)
        if x.shape != (pr.dual_dim,):
            raise InvalidInstance(f"dual vector has shape {x.shape}, expected ({pr.dual_dim},)")
        a = x[:pr.n_a].reshape(pr.n, pr.d)
        w = x[pr.n_a:pr.n_a + pr.n_w].reshape(pr.d, pr.n, pr.m, pr.B)
        c = x[pr.n_a + pr.n_w:].reshape(pr.n, pr.m)
        return cls(a, w, c)

    @classmethod
    def zeros(cls, program):
        return cls.from_vector(program, np.zeros(program.dual_dim))

    def to_vector(self):
        return np.concatenate([self.a.ravel(), self.w.ravel(), self.c.ravel()])


def _box(program):
    return program.n + 1.0


def _cut(program, entries, rhs, tag):
    normal = np.zeros(program.dual_dim)
    for idx, coef in entries:
        normal[idx] += coef
    return Cut(normal, float(rhs), tag)


def _polynomial_cut(program, pt, rho):
    """First violated polynomial constraint of the restricted dual, or ``None``.

    Families are checked in a fixed order; within a family the most violated
    row is returned.
    """
    pr = program
    mu = pr.inst.prior
    xis = pr.posteriors
    # objective
    obj = float((pt.a @ mu).sum())
    if obj - rho > VIOLATION_TOL:
        entries = [(pr.a_index(i, th), mu[th]) for i in range(pr.n) for th in range(pr.d)]
        return _cut(pr, entries, rho, ("objective",))
    # t columns: sum_theta xi(theta) w + c >= 0
    lhs = np.einsum("kt,tikp->ikp", xis, pt.w) + pt.c[:, :, None]
    if -lhs.min() > VIOLATION_TOL:
        i, k, p = np.unravel_index(int(np.argmin(lhs)), lhs.shape)
        entries = [(pr.w_index(th, i, k, p), -xis[k, th]) for th in range(pr.d)]
        entries.append((pr.c_index(i, k), -1.0))
        return _cut(pr, entries, 0.0, ("t-column", int(i), int(k), int(p)))
    # gamma columns: c <= sum_theta xi(theta) a
    gap = pt.c - pt.a @ xis.T
    if gap.max() > VIOLATION_TOL:
        i, k = np.unravel_index(int(np.argmax(gap)), gap.shape)
        entries = [(pr.a_index(i, th), -xis[k, th]) for th in range(pr.d)]
        entries.append((pr.c_index(i, k), 1.0))
        return _cut(pr, entries, 0.0, ("gamma-column", int(i), int(k)))
    # sign of w
    if pt.w.max() > VIOLATION_TOL:
        th, i, k, p = np.unravel_index(int(np.argmax(pt.w)), pt.w.shape)
        return _cut(pr, [(pr.w_index(th, i, k, p), 1.0)], 0.0, ("w-sign", int(th), int(i),
                                                                  int(k), int(p)))
    # box
    U = _box(pr)
    x = pt.to_vector()
    upper = np.concatenate([x[:pr.n_a] - U, -x[pr.n_a:pr.n_a + pr.n_w] - U,
                            x[pr.n_a + pr.n_w:] - U])
    lower = np.concatenate([-x[:pr.n_a] - U, np.full(pr.n_w, -np.inf),
                            -x[pr.n_a + pr.n_w:] - U])
    j_up, j_lo = int(np.argmax(upper)), int(np.argmax(lower))
    if max(upper[j_up], lower[j_lo]) > VIOLATION_TOL:
        if upper[j_up] >= lower[j_lo]:
            sign = -1.0 if pr.n_a <= j_up < pr.n_a + pr.n_w else 1.0
            return _cut(pr, [(j_up, sign)], U, ("box", j_up))
        return _cut(pr, [(j_lo, -1.0)], U, ("box", j_lo))
    return None


def separation_oracle(program, point, rho, delta):
    """Violated constraint of the feasibility problem at ``point``, or ``None``.

    ``point`` is a :class:`DualPoint` or a flat vector. Polynomial families
    are checked exactly; the exponential family is searched per state with
    the MAX-LINREV dynamic program on the clamped and shifted ``w``. Every
    returned cut is violated by more than ``VIOLATION_TOL`` at ``point``;
    ``None`` means every row is violated by at most ``delta + VIOLATION_TOL``.
    """
    pr = program
    pt = point if isinstance(point, DualPoint) else DualPoint.from_vector(pr, point)
    cut = _polynomial_cut(pr, pt, rho)
    if cut is not None:
        return cut
    for th in range(pr.d):
        shifted = np.clip(pt.w[th], -1.0, 0.0) + 1.0
        res = dp_max_linrev(shifted, pr.z, pr.grid, delta)
        if res.value - pr.n <= VIOLATION_TOL:
            continue
        col = YColumnId(th, res.xi_idx, res.p_idx)
        rev = pr.revenue(col)
        lin = sum(pt.w[th, i, k, p] for i, (k, p) in enumerate(zip(col.xi, col.p)))
        if rev + lin <= VIOLATION_TOL:
            # the clamped path touched a coordinate below -1; that row holds
            continue
        entries = [(pr.w_index(th, i, k, p), 1.0) for i, (k, p) in enumerate(zip(col.xi, col.p))]
        return _cut(pr, entries, -rev, col)
    return None


def _static_rows(program):
    """Polynomial rows of the dual as ``(A, b)`` excluding the objective row."""
    pr = program
    rows, cols, vals = [], [], []
    r = 0
    for i in range(pr.n):
        for k in range(pr.m):
            for p in range(pr.B):
                for th in range(pr.d):
                    if pr.posteriors[k, th] != 0.0:
                        rows.append(r)
                        cols.append(pr.w_index(th, i, k, p))
                        vals.append(-pr.posteriors[k, th])
                rows.append(r)
                cols.append(pr.c_index(i, k))
                vals.append(-1.0)
                r += 1
    for i in range(pr.n):
        for k in range(pr.m):
            for th in range(pr.d):
                if pr.posteriors[k, th] != 0.0:
                    rows.append(r)
                    cols.append(pr.a_index(i, th))
                    vals.append(-pr.posteriors[k, th])
            rows.append(r)
            cols.append(pr.c_index(i, k))
            vals.append(1.0)
            r += 1
    A = coo_matrix((vals, (rows, cols)), shape=(r, pr.dual_dim)).tocsr()
    return A, np.zeros(r)


def _dual_bounds(program):
    U = _box(program)
    return ([(-U, U)] * program.n_a + [(-U, 0.0)] * program.n_w + [(-U, U)] * program.n_c)


def _restricted_check(program, rho, delta, static):
    """Certificate check over the explicit rows plus the ``y`` cuts seen so far.

    Infeasibility of this restriction proves the full problem infeasible; a
    solution the oracle accepts proves it (approximately) feasible.
    """
    A_static, b_static = static
    bounds = _dual_bounds(program)
    obj_row = np.zeros(program.dual_dim)
    obj_row[:program.n_a] = np.tile(program.inst.prior, program.n)

    def check(cuts):
        seen = {}
        for cut in cuts:
            seen.setdefault(cut.tag, cut)
        if seen:
            Y = np.vstack([c.normal for c in seen.values()])
            yb = np.array([c.rhs for c in seen.values()])
        else:
            Y, yb = np.zeros((0, program.dual_dim)), np.zeros(0)
        A = np.vstack([A_static.toarray(), obj_row[None, :], Y])
        bvec = np.concatenate([b_static, [rho], yb])
        try:
            x = _lp.feasible_point(A, bvec, bounds)
        except RuntimeError:
            return None
        if x is None:
            return False, None
        if separation_oracle(program, x, rho, delta) is None:
            return True, x
        return None

    return check


@dataclass
class FeasibilityRun:
    rho: float
    feasible: bool
    iterations: int
    y_cuts: list
    certified: bool


def solve_feasibility(program, rho, delta, r=1e-6, check_every=100, static=None):
    """Ellipsoid run on the dual feasibility problem at level ``rho``.

    ``check_every=0`` disables the restricted-LP certificate and runs the
    plain ellipsoid method to its volume bound.
    """
    dim = program.dual_dim
    radius = (program.n + 2.0) * math.sqrt(dim)
    check = None
    if check_every:
        if static is None:
            static = _static_rows(program)
        check = _restricted_check(program, rho, delta, static)
    res = ellipsoid_feasibility(
        lambda x: separation_oracle(program, x, rho, delta), dim, radius, r=r,
        keep_cuts=lambda tag: isinstance(tag, YColumnId), check=check, check_every=check_every)
    tags = list(dict.fromkeys(c.tag for c in res.cuts))
    logger.info("private feasibility rho=%.6f feasible=%s iterations=%d y_cuts=%d certified=%s",
                rho, res.feasible, res.iterations, len(tags), res.certified)
    return FeasibilityRun(rho, res.feasible, res.iterations, tags, res.certified)


@dataclass
class RelaxedSolution:
    """Solution of the relaxed (or exact) primal: ``y`` maps :class:`YColumnId` to mass."""

    gamma: np.ndarray
    t: np.ndarray
    y: dict
    value: float


def solve_restricted_primal(program, columns):
    """Relaxed primal restricted to the ``y`` columns in ``columns``.

    Maximizes empirical revenue subject to ``sum y <= xi(theta) t`` per
    buyer cell, ``sum_p t = gamma`` and ``sum_k gamma xi = mu``.
    """
    return _solve_primal(program, list(dict.fromkeys(columns)), equality=False)


def _solve_primal(program, columns, equality):
    pr = program
    nG, nT, nY = pr.n * pr.m, pr.n * pr.m * pr.B, len(columns)
    nvar = nG + nT + nY

    def g_idx(i, k):
        return i * pr.m + k

    def t_idx(i, k, p):
        return nG + (i * pr.m + k) * pr.B + p

    rows, cols, vals = [], [], []
    row = 0

    def cell_row(th, i, k, p):
        return ((th * pr.n + i) * pr.m + k) * pr.B + p

    n_cell = pr.d * pr.n * pr.m * pr.B
    for th in range(pr.d):
        for i in range(pr.n):
            for k in range(pr.m):
                for p in range(pr.B):
                    rows.append(cell_row(th, i, k, p))
                    cols.append(t_idx(i, k, p))
                    vals.append(-pr.posteriors[k, th])
    for j, col in enumerate(columns):
        for i, (k, p) in enumerate(zip(col.xi, col.p)):
            rows.append(cell_row(col.theta, i, k, p))
            cols.append(nG + nT + j)
            vals.append(1.0)
    A_cell = coo_matrix((vals, (rows, cols)), shape=(n_cell, nvar))

    rows, cols, vals = [], [], []
    for i in range(pr.n):
        for k in range(pr.m):
            for p in range(pr.B):
                rows.append(row)
                cols.append(t_idx(i, k, p))
                vals.append(1.0)
            rows.append(row)
            cols.append(g_idx(i, k))
            vals.append(-1.0)
            row += 1
    for i in range(pr.n):
        for th in range(pr.d):
            for k in range(pr.m):
                if pr.posteriors[k, th] != 0.0:
                    rows.append(row)
                    cols.append(g_idx(i, k))
                    vals.append(pr.posteriors[k, th])
            row += 1
    A_link = coo_matrix((vals, (rows, cols)), shape=(row, nvar))
    b_link = np.concatenate([np.zeros(pr.n * pr.m), np.tile(pr.inst.prior, pr.n)])

    obj = np.zeros(nvar)
    obj[nG + nT:] = [pr.revenue(col) for col in columns]
    if equality:
        from scipy.sparse import vstack
        res = _lp.maximize(obj, A_eq=vstack([A_cell, A_link]),
                           b_eq=np.concatenate([np.zeros(n_cell), b_link]))
    else:
        res = _lp.maximize(obj, A_ub=A_cell, b_ub=np.zeros(n_cell), A_eq=A_link, b_eq=b_link)
    if not res.ok:
        raise NumericalFailure(f"private primal LP failed: {res.message}")
    x = np.clip(res.x, 0.0, None)
    gamma = x[:nG].reshape(pr.n, pr.m)
    t = x[nG:nG + nT].reshape(pr.n, pr.m, pr.B)
    y = {col: float(v) for col, v in zip(columns, x[nG + nT:]) if v > 0.0}
    return RelaxedSolution(gamma=gamma, t=t, y=y, value=float(res.value))


def all_columns(program, cap=None):
    """Every ``y`` column; raises :class:`TooLarge` above the enumeration cap."""
    pr = program
    count = pr.d * (pr.m * pr.B) ** pr.n
    limit = enumeration_cap(cap)
    if count > limit:
        raise TooLarge(f"{count} y columns exceed cap {limit}")
    cells = list(itertools.product(range(pr.m), range(pr.B)))
    out = []
    for th in range(pr.d):
        for prof in itertools.product(cells, repeat=pr.n):
            out.append(YColumnId(th, tuple(k for k, _ in prof), tuple(p for _, p in prof)))
    return out


def dense_lp6_solve(inst, q, b, K=None, seed=None, cap=None):
    """Exact optimum of the full private LP (every ``y`` column, equality
    coupling). Only for tiny instances."""
    program = build_program(inst, q, b, K=K, seed=seed, cap=cap)
    sol = _solve_primal(program, all_columns(program, cap), equality=True)
    return program, sol


def _marginals(program, y, theta):
    """Per-buyer ``(m, B)`` marginals of the ``y`` columns of state ``theta``."""
    pr = program
    out = np.zeros((pr.n, pr.m, pr.B))
    for col, v in y.items():
        if col.theta != theta:
            continue
        for i, (k, p) in enumerate(zip(col.xi, col.p)):
            out[i, k, p] += v
    return out


def polish(program, sol):
    """Repair solver round-off so that consistency holds to machine precision.

    Scales ``t`` (and ``y``) down just enough that no state is over-covered,
    tops up each buyer's basis posteriors with the leftover prior mass, and
    shrinks ``y`` wherever a marginal exceeds ``xi(theta) t``.
    """
    pr = program
    t = np.clip(sol.t, 0.0, None).copy()
    y = {col: v for col, v in sol.y.items() if v > 0.0}
    scales = []
    for i in range(pr.n):
        scale, extra = restore_mean(t[i].sum(axis=1), pr.posteriors, pr.inst.prior, pr.basis)
        t[i] *= scale
        scales.append(scale)
        for k in np.flatnonzero(extra):
            row = t[i, k]
            t[i, k, int(np.argmax(row)) if row.max() > 0 else 0] += extra[k]
    s = min(scales)
    if s < 1.0:
        y = {col: v * s for col, v in y.items()}
    for th in range(pr.d):
        for i in range(pr.n):
            marg = _marginals(pr, y, th)[i]
            cap = pr.posteriors[:, th][:, None] * t[i]
            over = marg > cap
            if not over.any():
                continue
            factor = np.where(over, cap / np.where(over, marg, 1.0), 1.0)
            y = {col: (v * factor[col.xi[i], col.p[i]] if col.theta == th else v)
                 for col, v in y.items()}
    y = {col: v for col, v in y.items() if v > 0.0}
    value = float(sum(v * pr.revenue(col) for col, v in y.items()))
    return RelaxedSolution(gamma=t.sum(axis=2), t=t, y=y, value=value)


def lift_relaxed(gamma, t, y, program, cap=None):
    """Turn a relaxed solution into one with exact marginals.

    Per state, the slack ``delta_i = xi(theta) t_i - marginal_i(y)`` of every
    buyer is spread as a product measure scaled by ``iota^(n-1)``, where
    ``iota = mu_theta - sum y``. Raises :class:`InconsistentSolution` when a
    slack is negative beyond ``1e-9``.
    """
    pr = program
    t = np.asarray(t, dtype=float)
    ybar = dict(y)
    limit = enumeration_cap(cap)
    for th in range(pr.d):
        mu = pr.inst.prior[th]
        marg = _marginals(pr, y, th)
        slack = pr.posteriors[:, th][None, :, None] * t - marg
        if slack.min() < -DERIVED_TOL:
            raise InconsistentSolution(
                f"relaxed solution infeasible in state {th}: slack {slack.min():.3e}")
        slack = np.clip(slack, 0.0, None)
        iota = mu - sum(v for col, v in y.items() if col.theta == th)
        if iota <= 0.0 or slack.max() <= 0.0:
            continue
        support = [list(zip(*np.nonzero(slack[i]))) for i in range(pr.n)]
        count = math.prod(len(s) for s in support)
        if count > limit:
            raise TooLarge(f"lifting needs {count} columns in state {th}, cap {limit}")
        if count == 0:
            continue
        denom = iota ** (pr.n - 1)
        for prof in itertools.product(*support):
            mass = math.prod(slack[i, k, p] for i, (k, p) in enumerate(prof)) / denom
            if mass <= 0.0:
                continue
            col = YColumnId(th, tuple(int(k) for k, _ in prof), tuple(int(p) for _, p in prof))
            ybar[col] = ybar.get(col, 0.0) + mass
    return ybar


def recover_scheme_private(inst, ybar, program):
    """Signaling scheme whose signal for buyer ``i`` is the pair ``(xi_i, p_i)``.

    ``phi_theta(s) = ybar[theta, s] / mu_theta`` and buyer ``i`` is offered
    ``p_i`` on signal ``(xi_i, p_i)``.
    """
    pr = program
    n = inst.n_buyers
    labels = [dict() for _ in range(n)]
    kernel = [dict() for _ in range(inst.n_states)]
    for col, v in ybar.items():
        if v <= 0.0:
            continue
        prof = []
        for i, (k, p) in enumerate(zip(col.xi, col.p)):
            lab = pr.label(i, k, p)
            labels[i][lab] = float(pr.grid[p])
            prof.append(lab)
        row = kernel[col.theta]
        row[tuple(prof)] = row.get(tuple(prof), 0.0) + v
    if not all(labels):
        raise InconsistentSolution("solution sends no signal")
    fallback = next(p for row in kernel for p in row)
    rows = []
    for th, row in enumerate(kernel):
        mu = inst.prior[th]
        if mu <= 0.0:
            rows.append({fallback: 1.0})
            continue
        total = sum(row.values())
        if abs(total - mu) > 1e-6 * max(mu, 1.0):
            raise InconsistentSolution(
                f"state {th}: kernel mass {total!r} differs from prior {mu!r}")
        rows.append({prof: v / total for prof, v in row.items()})
    signals = [tuple(sorted(lab)) for lab in labels]
    return SignalingScheme(signals=signals, kernel=rows, prices=labels)


class PrivateParams(NamedTuple):
    eta: float
    q: int
    b: int
    delta: float
    beta: float
    K: int


def private_params(lam, d, n):
    """Theoretical parameters for additive error ``lam``.

    ``K`` follows the Hoeffding bound with ``|Xi^q|^n`` posterior profiles
    and ``(b + 1)^n`` price vectors.
    """
    if not 0 < lam < 1:
        raise InvalidInstance(f"lambda must lie in (0, 1), got {lam}")
    eta = lam / 4.0
    eps = lam / 4.0
    q = q_for(eta / 3.0, eta / 3.0)
    b = int(math.ceil(3.0 / eta))
    log_count = n * (math.log(q_uniform_size(d, q)) + math.log(b + 1))
    K = int(math.ceil(8.0 * (math.log(2.0 / eps) + log_count) / eps ** 2))
    return PrivateParams(eta=eta, q=q, b=b, delta=eps, beta=eps, K=K)


@dataclass
class PrivateSolution:
    """Output of :func:`solve_private`.

    ``y`` is the restricted primal solution after round-off repair and
    ``ybar`` its lifted version; ``value`` is the exact expected revenue of
    ``scheme`` under the true distributions, ``estimate`` the restricted
    primal objective under the optimization distributions.
    """

    gamma: np.ndarray
    t: np.ndarray
    y: dict
    ybar: dict
    value: float
    estimate: float
    scheme: SignalingScheme
    program: PrivateProgram
    bracket: tuple
    trace: list = field(default_factory=list)


def _resolve(lam, q, b, delta, beta, K, exact, d, n):
    if lam is None:
        missing = [k for k, v in dict(q=q, b=b, delta=delta, beta=beta).items() if v is None]
        if missing:
            raise InvalidInstance(f"without lambda, {', '.join(missing)} must be given")
        if not exact and K is None:
            raise InvalidInstance("sampling mode needs K (or lambda)")
        return q, b, delta, beta, (None if exact else K)
    pp = private_params(lam, d, n)
    q = pp.q if q is None else q
    b = pp.b if b is None else b
    delta = pp.delta if delta is None else delta
    beta = pp.beta if beta is None else beta
    K = None if exact else (pp.K if K is None else K)
    return q, b, delta, beta, K


def solve_private(inst, lam=None, q=None, b=None, delta=None, beta=None, K=None, seed=None,
                  exact_coefficients=False, r=1e-6, check_every=100, cap=None):
    """Approximately optimal private signaling scheme with grid prices.

    Bisects ``rho`` on ``[0, 1]`` with the ellipsoid method on the dual
    feasibility problem, solves the restricted primal over the ``y`` columns
    met in the last infeasible run, lifts it and recovers a scheme.
    """
    q, b, delta, beta, K = _resolve(lam, q, b, delta, beta, K, exact_coefficients,
                                    inst.n_states, inst.n_buyers)
    if delta <= 0 or beta <= 0:
        raise InvalidInstance("delta and beta must be positive")
    program = build_program(inst, q, b, K=K, seed=seed, cap=cap)
    static = _static_rows(program) if check_every else None
    lo, hi = 0.0, 1.0
    h_star = []
    trace = []
    while hi - lo > beta:
        mid = 0.5 * (lo + hi)
        run = solve_feasibility(program, mid, delta, r=r, check_every=check_every, static=static)
        trace.append(run)
        if run.feasible:
            hi = mid
        else:
            lo = mid
            h_star = run.y_cuts
    relaxed = solve_restricted_primal(program, h_star)
    fixed = polish(program, relaxed)
    ybar = lift_relaxed(fixed.gamma, fixed.t, fixed.y, program, cap=cap)
    scheme = recover_scheme_private(inst, ybar, program)
    value = float(sum(v * program.revenue(col, true=True) for col, v in ybar.items()))
    logger.info("solve_private q=%d b=%d delta=%g beta=%g bracket=[%.6f, %.6f] H*=%d "
                "estimate=%.6f value=%.6f", q, b, delta, beta, lo, hi, len(h_star),
                relaxed.value, value)
    return PrivateSolution(gamma=fixed.gamma, t=fixed.t, y=fixed.y, ybar=ybar, value=value,
                           estimate=relaxed.value, scheme=scheme, program=program,
                           bracket=(lo, hi), trace=trace)
