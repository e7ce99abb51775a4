"""Thin deterministic wrapper over HiGHS (via :func:`scipy.optimize.linprog`)."""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix


_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


@dataclass
class LpResult:
    x: np.ndarray
    value: float
    status: int
    message: str

    @property
    def ok(self):
        return self.status == 0


def maximize(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None):
    """Maximize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    c = np.asarray(c, dtype=float)
    kw = {}
    if A_ub is not None and np.shape(A_ub)[0] > 0:
        kw["A_ub"] = csr_matrix(A_ub)
        kw["b_ub"] = np.asarray(b_ub, dtype=float)
    if A_eq is not None and np.shape(A_eq)[0] > 0:
        kw["A_eq"] = csr_matrix(A_eq)
        kw["b_eq"] = np.asarray(b_eq, dtype=float)
    res = linprog(-c, bounds=(0, None), method="highs", options=_OPTIONS, **kw)
    x = res.x if res.x is not None else np.full(c.size, np.nan)
    value = float(c @ x) if res.status == 0 else float("nan")
    return LpResult(x=x, value=value, status=res.status, message=res.message)


def feasible_point(A_ub, b_ub, bounds):
    """A point of ``{x : A_ub x <= b_ub, bounds}``, or ``None`` when HiGHS proves it empty.

    Raises ``RuntimeError`` on any other solver outcome.
    """
    A_ub = csr_matrix(A_ub)
    res = linprog(np.zeros(A_ub.shape[1]), A_ub=A_ub, b_ub=np.asarray(b_ub, dtype=float),
                  bounds=bounds, method="highs", options=_OPTIONS)
    if res.status == 0:
        return res.x
    if res.status == 2:
        return None
    raise RuntimeError(f"feasibility LP failed: {res.message}")
