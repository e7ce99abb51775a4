import numpy as np
import pytest

from signalprice.ellipsoid import Cut, ellipsoid_feasibility, iteration_bound
from signalprice.errors import NumericalFailure


def box_oracle(lo, hi):
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)

    def oracle(x):
        for j in range(x.size):
            if x[j] > hi[j]:
                e = np.zeros(x.size)
                e[j] = 1.0
                return Cut(e, hi[j], ("hi", j))
            if x[j] < lo[j]:
                e = np.zeros(x.size)
                e[j] = -1.0
                return Cut(e, -lo[j], ("lo", j))
        return None

    return oracle


def test_accept_all_is_feasible_at_center():
    res = ellipsoid_feasibility(lambda x: None, 3, 10.0, center=[1, 2, 3])
    assert res.feasible and res.iterations == 0
    np.testing.assert_array_equal(res.point, [1, 2, 3])


def test_empty_interval_is_infeasible():
    def oracle(x):
        if x[0] > -1:
            return Cut(np.array([1.0]), -1.0, "le")
        return Cut(np.array([-1.0]), -1.0, "ge")

    res = ellipsoid_feasibility(oracle, 1, 10.0)
    assert not res.feasible
    assert {c.tag for c in res.cuts} <= {"le", "ge"}


def test_finds_point_in_box():
    oracle = box_oracle([2.0, -3.0], [2.5, -2.0])
    res = ellipsoid_feasibility(oracle, 2, 10.0)
    assert res.feasible
    assert 2.0 <= res.point[0] <= 2.5 and -3.0 <= res.point[1] <= -2.0


def test_thin_box_declared_infeasible_below_r():
    oracle = box_oracle([3.0, 0.0], [3.0 + 1e-9, 1.0])
    res = ellipsoid_feasibility(oracle, 2, 10.0, r=1e-6)
    assert not res.feasible


def test_keep_cuts_filter():
    oracle = box_oracle([2.0, 2.0], [2.1, 2.1])
    res = ellipsoid_feasibility(oracle, 2, 10.0, keep_cuts=lambda tag: tag[0] == "hi")
    assert all(c.tag[0] == "hi" for c in res.cuts)


def test_max_iter_raises():
    oracle = box_oracle([3.0, 3.0], [3.0 + 1e-4, 3.0 + 1e-4])
    with pytest.raises(NumericalFailure):
        ellipsoid_feasibility(oracle, 2, 10.0, max_iter=3)


def test_check_hook_can_stop_early():
    oracle = box_oracle([5.0], [4.0])
    res = ellipsoid_feasibility(oracle, 1, 10.0, check=lambda cuts: (False, None), check_every=2)
    assert not res.feasible and res.certified and res.iterations == 2


def test_iteration_bound_formula():
    assert iteration_bound(35, 3 * np.sqrt(35), 1e-6) == int(np.ceil(2 * 35 ** 2 * np.log(3 * np.sqrt(35) / 1e-6)))


def test_cut_violation():
    c = Cut(np.array([1.0, 1.0]), 1.0)
    assert c.violation(np.array([1.0, 1.0])) == 1.0
