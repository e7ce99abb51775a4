import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signalprice.core import posterior_of_signal, scheme_value
from signalprice.decomposition import PosteriorDistribution
from signalprice.errors import InconsistentDistribution, InvalidInstance
from signalprice.oracles import brute_force_public, full_revelation_value, gen_random_instance
from signalprice.public import (PublicSolution, estimate_coefficients, public_params,
                                recover_scheme_public, solve_public)
from signalprice.decomposition import q_public, q_uniform_size

from instances import one_type, two_type, zero_instance


def test_two_type_q2_exact():
    sol = solve_public(two_type(), 2, b=4, exact_coefficients=True)
    assert sol.value == pytest.approx(0.35, abs=1e-9)
    law = {tuple(a): w for a, w in zip(sol.gamma.atoms, sol.gamma.weights)}
    assert law == pytest.approx({(0.5, 0.5): 0.6, (0.0, 1.0): 0.4}, abs=1e-9)


def test_q1_is_full_revelation():
    inst = two_type()
    sol = solve_public(inst, 1, exact_coefficients=True)
    assert sol.value == pytest.approx(full_revelation_value(inst), abs=1e-12)


@pytest.mark.parametrize("q", [1, 2, 4])
def test_one_type_value_constant(q):
    assert solve_public(one_type(), q, exact_coefficients=True).value == pytest.approx(0.3, abs=1e-9)


def test_recovered_kernel_matches_table():
    inst = two_type()
    sol = solve_public(inst, 2, b=4, exact_coefficients=True)
    scheme = recover_scheme_public(inst, sol)
    by_post = {}
    for k, s in enumerate(scheme.signals[0]):
        by_post[tuple(sol.gamma.atoms[k])] = s
    s1, s2 = by_post[(0.5, 0.5)], by_post[(0.0, 1.0)]
    assert scheme.kernel[0].get((s1,), 0.0) == pytest.approx(1.0, abs=1e-9)
    assert scheme.kernel[0].get((s2,), 0.0) == pytest.approx(0.0, abs=1e-9)
    assert scheme.kernel[1][(s1,)] == pytest.approx(3 / 7, abs=1e-9)
    assert scheme.kernel[1][(s2,)] == pytest.approx(4 / 7, abs=1e-9)
    assert scheme.prices[0][s1] == 0.5 and scheme.prices[0][s2] == 0.25
    assert scheme_value(inst, scheme) == pytest.approx(sol.value, abs=1e-9)


def test_point_mass_at_prior_recovers_single_signal():
    inst = two_type()
    sol = PublicSolution(gamma=PosteriorDistribution([inst.prior], [1.0]),
                         prices=np.array([[0.3]]), value=0.3, estimate=0.3, q=1)
    scheme = recover_scheme_public(inst, sol)
    assert scheme.kernel == ({("s1",): 1.0}, {("s1",): 1.0})


def test_inconsistent_gamma_rejected():
    inst = two_type()
    sol = PublicSolution(gamma=PosteriorDistribution([[0.5, 0.5]], [1.0]),
                         prices=np.array([[0.5]]), value=0.5, estimate=0.5, q=2)
    with pytest.raises(InconsistentDistribution):
        recover_scheme_public(inst, sol)


def test_sampling_mode_needs_parameters():
    with pytest.raises(InvalidInstance):
        solve_public(two_type(), 2, K=100)


def test_estimate_coefficients_examples():
    inst = two_type()
    prices, est = estimate_coefficients(inst, [[0.5, 0.5]], K=200_000, b=4, seed=0)
    assert prices[0, 0] == 0.5 and est[0] == pytest.approx(0.5, abs=0.01)
    z = zero_instance(n=2)
    _, est = estimate_coefficients(z, [[1, 0], [0.5, 0.5]], K=100, b=4, seed=0)
    np.testing.assert_array_equal(est, 0.0)
    _, est = estimate_coefficients(inst, [[1.0, 0.0]], K=None, b=None, exact=True)
    assert est[0] == pytest.approx(0.75)


def test_estimate_coefficients_deterministic():
    inst = two_type()
    a = estimate_coefficients(inst, [[1, 0], [0.5, 0.5]], K=500, b=4, seed=9)
    b = estimate_coefficients(inst, [[1, 0], [0.5, 0.5]], K=500, b=4, seed=9)
    np.testing.assert_array_equal(a[1], b[1])


def test_public_params():
    pp = public_params(0.3, 2, 1)
    assert pp.eta == pytest.approx(0.1) and pp.eps == pytest.approx(0.05)
    assert pp.q == q_public(0.1)
    assert pp.tau == pytest.approx(0.3 / (3 * q_uniform_size(2, pp.q)))
    assert pp.b == 40
    small = public_params(0.2, 2, 1)
    assert small.q > pp.q and small.K > pp.K and small.b > pp.b


@settings(max_examples=15)
@given(st.integers(0, 10_000), st.integers(1, 2), st.integers(1, 3))
def test_exact_public_matches_brute_force(seed, n, q):
    inst = gen_random_instance(seed, n, 2, 2)
    sol = solve_public(inst, q, exact_coefficients=True)
    assert sol.value == pytest.approx(brute_force_public(inst, q).value, abs=1e-9)


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_round_trip_recovery(seed):
    inst = gen_random_instance(seed, 2, 3, 2)
    sol = solve_public(inst, 2, b=5, exact_coefficients=True)
    scheme = recover_scheme_public(inst, sol)
    assert scheme_value(inst, scheme) == pytest.approx(sol.value, abs=1e-9)
    for k, s in enumerate(scheme.signals[0]):
        np.testing.assert_allclose(posterior_of_signal(inst, scheme, 0, s), sol.gamma.atoms[k],
                                   atol=1e-9)


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_value_monotone_in_nested_q(seed):
    inst = gen_random_instance(seed, 1, 2, 3)
    v1 = solve_public(inst, 1, exact_coefficients=True).value
    v2 = solve_public(inst, 2, exact_coefficients=True).value
    v4 = solve_public(inst, 4, exact_coefficients=True).value
    assert v1 <= v2 + 1e-9 <= v4 + 2e-9


def test_feasible_when_prior_is_q_uniform():
    inst = gen_random_instance(0, 1, 2, 2)
    from signalprice.core import AuctionInstance
    inst = AuctionInstance(inst.states, [0.25, 0.75], inst.buyers)
    sol = solve_public(inst, 4, K=200, b=4, seed=1)
    np.testing.assert_allclose(sol.gamma.mean, [0.25, 0.75], atol=1e-12)
