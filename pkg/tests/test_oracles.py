import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signalprice.core import AuctionInstance, ValuationDistribution
from signalprice.errors import InvalidInstance, TooLarge
from signalprice.oracles import (Graph, brute_force_public, full_revelation_value,
                                 gen_hardness_instance, gen_random_instance,
                                 hardness_outside_value, no_signaling_value)

from instances import one_type, two_type, zero_instance


def test_no_signaling_examples():
    assert no_signaling_value(two_type()) == pytest.approx(0.3, abs=1e-15)
    assert no_signaling_value(one_type()) == pytest.approx(0.3, abs=1e-15)
    inst = AuctionInstance(["s"], [1.0], [ValuationDistribution([[0.7]], [1.0])])
    assert no_signaling_value(inst) == pytest.approx(0.7)


def test_full_revelation_examples():
    assert full_revelation_value(one_type()) == pytest.approx(0.3)
    # state H: price 1 sells w.p. 1/2 (0.5) vs 0.75 always (0.75); state L: 0.25 * 1/2
    assert full_revelation_value(two_type()) == pytest.approx(0.3 * 0.75 + 0.7 * 0.125)
    assert full_revelation_value(zero_instance()) == 0.0


def test_brute_force_public_examples():
    assert brute_force_public(two_type(), 2).value == pytest.approx(0.35, abs=1e-9)
    assert brute_force_public(two_type(), 1).value == pytest.approx(full_revelation_value(two_type()))
    for q in (1, 2, 4):
        assert brute_force_public(one_type(), q).value == pytest.approx(0.3, abs=1e-9)


def test_brute_force_public_grid_at_most_free():
    res = brute_force_public(two_type(), 2, b=4)
    assert res.grid_value <= res.value + 1e-12
    assert res.grid_weights @ res.posteriors == pytest.approx(two_type().prior)


def test_brute_force_public_cap():
    with pytest.raises(TooLarge):
        brute_force_public(gen_random_instance(0, 1, 3, 2), 4, cap=10)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_brute_force_monotone_in_nested_q(seed):
    inst = gen_random_instance(seed, 1, 2, 3)
    v = [brute_force_public(inst, q).value for q in (1, 2, 4)]
    assert v[0] <= v[1] + 1e-12 and v[1] <= v[2] + 1e-12


@settings(max_examples=20)
@given(st.integers(0, 10_000), st.integers(1, 2))
def test_at_least_no_signaling_when_prior_q_uniform(seed, n):
    base = gen_random_instance(seed, n, 2, 2)
    inst = AuctionInstance(base.states, [0.25, 0.75], base.buyers)
    assert brute_force_public(inst, 4).value >= no_signaling_value(inst) - 1e-12


def check_gadget(graph, inst):
    m = graph.m
    assert inst.n_buyers == 1 and inst.n_states == m
    np.testing.assert_array_equal(inst.prior, np.full(m, 1.0 / m))
    dist = inst.buyers[0]
    assert dist.values.shape == (m + 1, m)
    for u in range(m):
        assert dist.probs[u] == pytest.approx(1.0 / m ** 2)
        for v in range(m):
            expected = 1.0 if u == v else (0.0 if graph.adjacent(u, v) else 0.5)
            assert dist.values[u, v] == expected
    assert dist.probs[m] == pytest.approx(1.0 - 1.0 / m)
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_triangle_gadget(fixtures_dir):
    g = Graph.load(f"{fixtures_dir}/triangle.json")
    inst = gen_hardness_instance(g)
    check_gadget(g, inst)
    np.testing.assert_array_equal(inst.buyers[0].values[:3], np.eye(3))


def test_path_gadget(fixtures_dir):
    g = Graph.load(f"{fixtures_dir}/path.json")
    check_gadget(g, gen_hardness_instance(g))


def test_empty_graph_m2():
    inst = gen_hardness_instance(Graph(2, []))
    np.testing.assert_array_equal(inst.buyers[0].values[0], [1.0, 0.5])


def test_outside_type_clamp():
    assert hardness_outside_value(3) > 1.0
    inst = gen_hardness_instance(Graph(3, []))
    np.testing.assert_array_equal(inst.buyers[0].values[3], 1.0)
    with pytest.raises(InvalidInstance):
        gen_hardness_instance(Graph(3, []), clamp=False)
    big = Graph(12, [])
    vo = hardness_outside_value(12)
    assert vo < 1.0
    np.testing.assert_allclose(gen_hardness_instance(big, clamp=False).buyers[0].values[12], vo)


def test_graph_validation():
    with pytest.raises(InvalidInstance):
        gen_hardness_instance(Graph(1, []))
    with pytest.raises(InvalidInstance):
        Graph(3, [(1, 1)])
    with pytest.raises(InvalidInstance):
        Graph(3, [(0, 3)])
    with pytest.raises(InvalidInstance):
        Graph.from_dict({"edges": []})
    with pytest.raises(InvalidInstance):
        Graph.load("/nonexistent/graph.json")


def test_random_generator():
    a, b = gen_random_instance(7, 2, 3, 4), gen_random_instance(7, 2, 3, 4)
    np.testing.assert_array_equal(a.prior, b.prior)
    for da, db in zip(a.buyers, b.buyers):
        np.testing.assert_array_equal(da.values, db.values)
        np.testing.assert_array_equal(da.probs, db.probs)
    assert a.n_buyers == 2 and a.n_states == 3 and len(a.buyers[0]) == 4
    assert a.prior.sum() == pytest.approx(1.0, abs=1e-12)
    assert all(d.probs.sum() == pytest.approx(1.0, abs=1e-12) for d in a.buyers)
    with pytest.raises(InvalidInstance):
        gen_random_instance(0, 0, 2, 2)
