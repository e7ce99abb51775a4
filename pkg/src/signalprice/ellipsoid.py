"""Central-cut ellipsoid method for feasibility problems with a separation oracle."""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cut:
    """Violated half-space ``normal @ x <= rhs``; ``tag`` identifies the constraint."""

    normal: np.ndarray
    rhs: float
    tag: object = None

    def violation(self, x):
        return float(self.normal @ x - self.rhs)


@dataclass
class EllipsoidResult:
    feasible: bool
    point: np.ndarray
    iterations: int
    cuts: list = field(default_factory=list)
    log_volume: float = 0.0
    certified: bool = False


def iteration_bound(dim, radius, r):
    """``ceil(2 dim^2 ln(R / r))``: after this many central cuts the ellipsoid
    is smaller in volume than a ball of radius ``r``."""
    return int(math.ceil(2.0 * dim * dim * math.log(radius / r)))


def _log_unit_ball_volume(dim):
    return 0.5 * dim * math.log(math.pi) - math.lgamma(0.5 * dim + 1.0)


def ellipsoid_feasibility(oracle, dim, radius, r=1e-6, center=None, max_iter=None,
                          keep_cuts=None, check=None, check_every=0):
    """Search the ball of ``radius`` around ``center`` for a point the oracle accepts.

    ``oracle(x)`` returns ``None`` when ``x`` is (approximately) feasible and a
    :class:`Cut` otherwise. The search declares infeasibility once the
    ellipsoid volume drops below that of a ball of radius ``r``.

    ``keep_cuts`` is an optional predicate on cut tags; matching cuts are
    collected in the result (all cuts when ``None``).

    ``check(cuts)``, if given, runs every ``check_every`` iterations and may
    end the search early by returning ``(feasible, point)``; it must only do
    so on a sound certificate. ``None`` means keep going.

    Raises :class:`NumericalFailure` when the shape matrix degenerates or when
    ``max_iter`` is reached before the volume bound. The search also stops
    as infeasible when the ellipsoid is thinner than ``2 r`` along a cut.
    """
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    x = np.zeros(dim) if center is None else np.array(center, dtype=float)
    P = np.eye(dim) * radius ** 2
    bound = iteration_bound(dim, radius, r)
    log_vol = _log_unit_ball_volume(dim) + dim * math.log(radius)
    log_vol_stop = _log_unit_ball_volume(dim) + dim * math.log(r)
    m = float(dim)
    if dim > 1:
        scale = m * m / (m * m - 1.0)
        step_log_shrink = math.log(m / (m + 1.0)) + 0.5 * (m - 1.0) * math.log(scale)
    else:
        step_log_shrink = math.log(0.5)
    cuts = []
    it = 0
    while True:
        cut = oracle(x)
        if cut is None:
            logger.debug("ellipsoid feasible iterations=%d", it)
            return EllipsoidResult(True, x, it, cuts, log_vol)
        if keep_cuts is None or keep_cuts(cut.tag):
            cuts.append(cut)
        if it >= bound or log_vol < log_vol_stop:
            logger.debug("ellipsoid infeasible iterations=%d cuts=%d", it, len(cuts))
            return EllipsoidResult(False, x, it, cuts, log_vol)
        if check is not None and check_every and it > 0 and it % check_every == 0:
            verdict = check(cuts)
            if verdict is not None:
                feasible, point = verdict
                logger.debug("ellipsoid certified feasible=%s iterations=%d", feasible, it)
                return EllipsoidResult(bool(feasible), x if point is None else point, it,
                                       cuts, log_vol, certified=True)
        if max_iter is not None and it >= max_iter:
            raise NumericalFailure(
                f"ellipsoid hit max_iter={max_iter} before the volume bound ({bound}); "
                f"log volume {log_vol:.3f} vs stop {log_vol_stop:.3f}")
        g = cut.normal
        Pg = P @ g
        gPg = float(g @ Pg)
        if not np.isfinite(gPg):
            raise NumericalFailure(
                f"ellipsoid shape matrix degenerate at iteration {it} (g'Pg={gPg!r})")
        # half-width along g below r: no ball of radius r fits any more
        if gPg <= (r * r) * float(g @ g):
            logger.debug("ellipsoid infeasible (width) iterations=%d cuts=%d", it, len(cuts))
            return EllipsoidResult(False, x, it, cuts, log_vol)
        bvec = Pg / math.sqrt(gPg)
        if dim == 1:
            x = x - 0.5 * bvec
            P = P * 0.25
        else:
            x = x - bvec / (m + 1.0)
            P = scale * (P - (2.0 / (m + 1.0)) * np.outer(bvec, bvec))
            P = 0.5 * (P + P.T)
        log_vol += step_log_shrink
        it += 1
