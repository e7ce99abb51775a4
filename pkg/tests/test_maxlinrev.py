import numpy as np
import pytest

from signalprice.decomposition import enumerate_q_uniform
from signalprice.errors import InvalidInstance
from signalprice.maxlinrev import _suffix_max, dp_max_linrev, linrev_objective
from signalprice.oracles import brute_force_max_linrev, gen_random_instance
from signalprice.pricing import PriceGrid
from signalprice.private import acceptance_tensor


def random_problem(rng, n, q, b):
    inst = gen_random_instance(int(rng.integers(1 << 30)), n, 2, int(rng.integers(1, 4)))
    post = enumerate_q_uniform(2, q).posteriors
    grid = PriceGrid(b).values
    z = acceptance_tensor(inst, post, grid)
    return z, grid


def test_zero_bonus_matches_exhaustive():
    rng = np.random.default_rng(0)
    z, grid = random_problem(rng, 2, 2, 3)
    w = np.zeros_like(z)
    res = dp_max_linrev(w, z, grid, 0.05)
    ref, _, _ = brute_force_max_linrev(w, z, grid)
    assert res.value == pytest.approx(ref, abs=1e-12)


def test_two_buyers_q1_b1_within_delta():
    rng = np.random.default_rng(1)
    z, grid = random_problem(rng, 2, 1, 1)
    assert z.shape == (2, 2, 2)
    w = rng.random(z.shape)
    res = dp_max_linrev(w, z, grid, 0.05)
    ref, _, _ = brute_force_max_linrev(w, z, grid)
    assert ref - 0.05 <= res.value <= ref + 1e-12


def test_linear_term_dominates():
    z = np.zeros((1, 3, 2))
    w = np.zeros_like(z)
    w[0, 2, 1] = 1.0
    res = dp_max_linrev(w, z, np.array([0.0, 1.0]), 0.1)
    assert res.value >= 1 - 0.1
    assert (res.xi_idx, res.p_idx) == ((2,), (1,))


def test_sandwich_on_enumerable_instances():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n, q, b = int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(1, 4))
        z, grid = random_problem(rng, n, q, b)
        w = rng.random(z.shape) * (rng.random(z.shape) < 0.5)
        delta = 0.05
        res = dp_max_linrev(w, z, grid, delta)
        ref, _, _ = brute_force_max_linrev(w, z, grid)
        assert ref - delta - 1e-12 <= res.value <= ref + 1e-12
        assert res.table_value <= res.value + 1e-9
        assert res.value == pytest.approx(linrev_objective(z, w, grid, res.xi_idx, res.p_idx))


def test_all_zero_revenue_unique_cell():
    z = np.zeros((2, 2, 3))
    w = np.zeros_like(z)
    w[1, 0, 2] = 0.7
    value, xi, p = brute_force_max_linrev(w, z, np.array([0, 0.5, 1.0]))
    assert value == pytest.approx(0.7) and xi[1] == 0 and p[1] == 2


def test_input_checks():
    z = np.zeros((1, 2, 2))
    with pytest.raises(InvalidInstance):
        dp_max_linrev(np.full_like(z, 1.5), z, np.array([0, 1.0]), 0.1)
    with pytest.raises(InvalidInstance):
        dp_max_linrev(z, z, np.array([0, 1.0]), 0.0)
    with pytest.raises(InvalidInstance):
        dp_max_linrev(z, z, np.array([0, 0.5, 1.0]), 0.1)


def test_suffix_max():
    row = np.array([1.0, 3.0, -np.inf, 3.0, 2.0])
    best, arg = _suffix_max(row)
    np.testing.assert_array_equal(best, [3, 3, 3, 3, 2])
    np.testing.assert_array_equal(arg, [1, 1, 3, 3, 4])
    best, arg = _suffix_max(np.full(3, -np.inf))
    assert np.all(np.isneginf(best))
