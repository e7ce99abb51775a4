"""Additive-approximation dynamic program for MAX-LINREV.

MAX-LINREV picks, for every buyer ``i``, a posterior index ``x_i`` and a grid
price index ``p_i`` to maximize

    Rev(z, prices) + sum_i w[i, x_i, p_i]

where ``z[i, x, p]`` is buyer ``i``'s acceptance probability at posterior
``x`` and price ``grid[p]``. The DP discretizes the running sum of the linear
terms on the grid ``{0, 1/c, ..., n}`` with ``c = ceil(n / delta)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInstance

_FEAS_TOL = 1e-12


@dataclass(frozen=True)
class DpResult:
    """``value`` is the exact objective of the reconstructed argmax, which is at
    least the table optimum ``table_value``."""

    value: float
    table_value: float
    xi_idx: tuple
    p_idx: tuple


def linrev_objective(z, w, grid, xi_idx, p_idx):
    """Exact MAX-LINREV objective of one (posterior, price) choice per buyer."""
    r = 0.0
    lin = 0.0
    for i in range(len(xi_idx) - 1, -1, -1):
        zi = z[i, xi_idx[i], p_idx[i]]
        r = zi * grid[p_idx[i]] + (1.0 - zi) * r
        lin += w[i, xi_idx[i], p_idx[i]]
    return float(r + lin)


def _suffix_max(row):
    """Suffix maxima of ``row`` and, for each start, the smallest index attaining it."""
    L = row.size
    best = np.maximum.accumulate(row[::-1])[::-1]
    hit = np.where(row == best, np.arange(L), L)
    arg = np.minimum.accumulate(hit[::-1])[::-1]
    return best, arg


def dp_max_linrev(w, z, grid, delta):
    """Approximately solve MAX-LINREV within additive ``delta``.

    Parameters
    ----------
    w : array of shape (n, m, B)
        Linear bonuses, each in ``[0, 1]``.
    z : array of shape (n, m, B)
        Acceptance probabilities.
    grid : array of shape (B,)
        Grid prices.
    delta : float
        Additive tolerance.
    """
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if w.shape != z.shape or w.ndim != 3 or w.shape[2] != grid.size:
        raise InvalidInstance(f"shape mismatch: w {w.shape}, z {z.shape}, grid {grid.shape}")
    if delta <= 0:
        raise InvalidInstance(f"delta must be positive, got {delta}")
    if w.min() < -_FEAS_TOL or w.max() > 1.0 + _FEAS_TOL:
        raise InvalidInstance("MAX-LINREV bonuses must lie in [0, 1]")
    n, m, B = w.shape
    c = int(math.ceil(n / delta))
    L = n * c + 1
    a_idx = np.arange(L, dtype=float)

    wc = w.reshape(n, m * B) * c
    gain = (z * grid[None, None, :]).reshape(n, m * B)
    keep = 1.0 - z.reshape(n, m * B)

    M = np.full((n, L), -np.inf)
    back_cell = np.zeros((n, L), dtype=np.int64)
    back_next = np.zeros((n, L), dtype=np.int64)

    # last buyer: cell is admissible for level a iff w >= a
    ok = wc[n - 1][:, None] >= a_idx[None, :] - _FEAS_TOL * c
    cand = np.where(ok, gain[n - 1][:, None], -np.inf)
    back_cell[n - 1] = np.argmax(cand, axis=0)
    M[n - 1] = cand[back_cell[n - 1], np.arange(L)]

    for i in range(n - 2, -1, -1):
        S, S_arg = _suffix_max(M[i + 1])
        # smallest level a' with w + a'/c >= a/c
        J = np.ceil(a_idx[None, :] - wc[i][:, None] - _FEAS_TOL * c).astype(np.int64)
        J = np.maximum(J, 0)
        valid = J <= L - 1
        Jc = np.minimum(J, L - 1)
        Sv = S[Jc]
        finite = valid & np.isfinite(Sv)
        cont = np.where(finite, Sv, 0.0)
        cand = np.where(finite, gain[i][:, None] + keep[i][:, None] * cont, -np.inf)
        k = np.argmax(cand, axis=0)
        back_cell[i] = k
        M[i] = cand[k, np.arange(L)]
        back_next[i] = S_arg[Jc[k, np.arange(L)]]

    total = M[0] + a_idx / c
    a0 = int(np.argmax(total))
    table_value = float(total[a0])

    xi_idx, p_idx = [], []
    a = a0
    for i in range(n):
        cell = int(back_cell[i, a])
        xi_idx.append(cell // B)
        p_idx.append(cell % B)
        a = int(back_next[i, a])
    xi_idx, p_idx = tuple(xi_idx), tuple(p_idx)
    value = linrev_objective(z, w, grid, xi_idx, p_idx)
    return DpResult(value=value, table_value=table_value, xi_idx=xi_idx, p_idx=p_idx)
