"""Input validation helpers, in the spirit of ``sklearn.utils.validation``.

Each helper coerces its argument to a float ``ndarray`` and raises
:class:`~signalprice.errors.InvalidInstance` on bad input.
"""
import numpy as np

from ._config import INPUT_TOL
from .errors import InvalidInstance


def check_probability_vector(x, name="probability vector", tol=INPUT_TOL):
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInstance(f"{name} must be a non-empty 1-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInstance(f"{name} has non-finite entries")
    if np.any(arr < -tol):
        raise InvalidInstance(f"{name} has negative entries: {arr}")
    total = arr.sum()
    if abs(total - 1.0) > tol:
        raise InvalidInstance(f"{name} sums to {total!r}, expected 1")
    return arr


def check_posterior(xi, d=None, tol=INPUT_TOL):
    arr = check_probability_vector(xi, "posterior", tol)
    if d is not None and arr.size != d:
        raise InvalidInstance(f"posterior has dimension {arr.size}, expected {d}")
    return arr


def check_profile(profile, n, d, tol=INPUT_TOL):
    """Return an ``(n, d)`` array of posteriors.

    A single posterior of shape ``(d,)`` is broadcast to every buyer, which is
    how public signaling represents a common belief.
    """
    arr = np.asarray(profile, dtype=float)
    if arr.ndim == 1:
        check_posterior(arr, d, tol)
        return np.tile(arr, (n, 1))
    if arr.shape != (n, d):
        raise InvalidInstance(f"posterior profile has shape {arr.shape}, expected {(n, d)}")
    for row in arr:
        check_posterior(row, d, tol)
    return arr


def check_prices(prices, n):
    arr = np.asarray(prices, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape != (n,):
        raise InvalidInstance(f"price vector has shape {arr.shape}, expected {(n,)}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InvalidInstance(f"prices must lie in [0, 1], got {arr}")
    return arr


def check_unit_interval(x, name="value"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InvalidInstance(f"{name} must lie in [0, 1]")
    return arr
