"""Small instances shared by the tests."""
import numpy as np

from signalprice.core import AuctionInstance, ValuationDistribution


def two_type():
    """One buyer, two equally likely types, prior (0.3, 0.7)."""
    return AuctionInstance(["H", "L"], [0.3, 0.7],
                           [ValuationDistribution([[0.75, 0.25], [1.0, 0.0]], [0.5, 0.5])])


def one_type():
    return AuctionInstance(["H", "L"], [0.3, 0.7], [ValuationDistribution([[1.0, 0.0]], [1.0])])


def fail_instance():
    """Two deterministic buyers with values 0.5 and 1 (one state)."""
    return AuctionInstance(["s"], [1.0], [ValuationDistribution([[0.5]], [1.0]),
                                          ValuationDistribution([[1.0]], [1.0])])


def zero_instance(n=2, d=2):
    return AuctionInstance([f"s{t}" for t in range(d)], np.full(d, 1.0 / d),
                           [ValuationDistribution([np.zeros(d)], [1.0]) for _ in range(n)])
