from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tsirelson_norms.errors import OverflowGuard
from tsirelson_norms.properties import (
    DisjointSample,
    c0_block_witness,
    check_asymptotic_l1_lower,
    check_two_convex_transfer,
    fast_growing,
    find_l1_window,
    noniso_inequality_scan,
    repeated_average_squares,
    sqrt_bounds,
)
from tsirelson_norms.spaces import make_tsirelson, make_V, make_Vprime, make_sigma_schreier
from tsirelson_norms.engine import eval_norm
from tsirelson_norms.vectors import FinVec
from tsirelson_norms.weights import geometric_theta, harmonic_theta

from conftest import ALPHA, THETA

VPRIME = make_Vprime(THETA, ALPHA)


def shifted_units(n, count=3):
    return DisjointSample(tuple(FinVec.unit(n + i) for i in range(1, count + 1)), n)


def test_l1_lower_on_shifted_units():
    report = check_asymptotic_l1_lower(VPRIME, shifted_units(3))
    assert report.holds
    assert report.constant == Fraction(3, 8)
    assert report.lhs >= report.rhs


def test_l1_lower_single_vector():
    sample = DisjointSample((FinVec.parse("2:1,3:-1/2"),), 1)
    report = check_asymptotic_l1_lower(VPRIME, sample)
    assert report.holds and report.constant < 1


@pytest.mark.parametrize("c", [Fraction(2), Fraction(-1, 3)])
def test_l1_lower_scales(c):
    sample = DisjointSample((FinVec.parse("3:1,5:1/2"), FinVec.parse("4:-1,6:1/3")), 2)
    base = check_asymptotic_l1_lower(VPRIME, sample)
    scaled = check_asymptotic_l1_lower(VPRIME, sample.scaled(c))
    assert scaled.lhs == abs(c) * base.lhs and scaled.rhs == abs(c) * base.rhs
    assert scaled.holds == base.holds


def test_transfer_on_shifted_units():
    report = check_two_convex_transfer(make_V(THETA), shifted_units(3))
    assert report.lower_holds and report.upper_holds
    assert report.constant == Fraction(3, 4)


def test_transfer_singleton_is_equality():
    report = check_two_convex_transfer(make_V(THETA), DisjointSample((FinVec.parse("4:1,5:1/2"),), 1), constant=1)
    assert report.holds and report.sum_of_norms == report.norm_of_sum


def test_samples_must_be_disjoint_and_late():
    with pytest.raises(ValueError):
        DisjointSample((FinVec.unit(3), FinVec.unit(3)), 1)
    with pytest.raises(ValueError):
        DisjointSample((FinVec.unit(1), FinVec.unit(3)), 2)


def test_l1_window_examples():
    schreier_sum = make_sigma_schreier(ALPHA)
    for space in (VPRIME, schreier_sum):
        w = find_l1_window(FinVec.unit(6), space)
        assert (w.p, w.q, w.mass) == (1, 1, Fraction(1, 2))
        assert find_l1_window(FinVec.unit(6), space, threshold=1) is None
        w = find_l1_window(FinVec.unit(6), space, threshold=0)
        assert (w.p, w.q) == (1, 1)


def test_l1_window_needs_normalized_vector():
    with pytest.raises(ValueError):
        find_l1_window(FinVec.unit(6, 2), VPRIME)


def test_c0_witness_unit_blocks():
    w = c0_block_witness(THETA, 0, 3)
    assert w.ys == (FinVec.unit(4), FinVec.unit(5), FinVec.unit(6))
    assert w.low_value == 1 and w.high_value == Fraction(9, 4)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_c0_witness_lower_bound(m):
    w = c0_block_witness(THETA, m, 2)
    assert w.high_value >= w.bound
    assert c0_block_witness(THETA, m, 1).high_value >= THETA(1)


def test_repeated_average_examples():
    delta = Fraction(1, 2)
    r = repeated_average_squares(0, 7, delta)
    assert r.vector == FinVec.unit(7) and r.t_norm == 1
    r = repeated_average_squares(1, 2, delta)
    assert r.vector == FinVec.ones([2, 3], Fraction(1, 2)) and r.t_norm == Fraction(1, 2)
    r = repeated_average_squares(1, 3, delta)
    assert r.vector == FinVec.ones([3, 4, 5], Fraction(1, 3)) and r.t_norm == Fraction(1, 2)


def test_repeated_average_level_two():
    r = repeated_average_squares(2, 2, Fraction(1, 2))
    assert sum(a for _, a in r.vector.entries) == 1
    assert r.t_norm == eval_norm(r.vector, make_tsirelson(Fraction(1, 2)).law).value
    assert r.t_norm <= Fraction(1, 4) + Fraction(1, 10)


@given(st.fractions(min_value=0, max_value=50), st.sampled_from([Fraction(1, 10), Fraction(1, 1000)]))
def test_sqrt_bounds(q, width):
    lo, hi = sqrt_bounds(q, width)
    assert lo * lo <= q <= hi * hi and 0 <= hi - lo < width


def test_noniso_scans():
    eps = Fraction(1, 100)
    scan = noniso_inequality_scan(harmonic_theta(), Fraction(1, 2), 1, 1, eps, 10)
    assert scan.first_failure == 2
    assert noniso_inequality_scan(geometric_theta(Fraction(1, 2)), Fraction(1, 2), 1, 1, eps, 30).first_failure is None


def test_noniso_without_eps():
    scan = noniso_inequality_scan(harmonic_theta(), Fraction(1, 2), 1, 1, 0, 10)
    # delta^n < 1/(n+1) first at n = 2; n = 1 is an exact tie.
    assert scan.first_failure == 2
    assert scan.rows[0].holds and scan.rows[0].method == "exact"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 9), st.integers(1, 10), st.integers(10, 20), st.integers(10, 20))
def test_noniso_dominated_geometric_never_fails(d, r, c, k):
    delta = Fraction(d, 10)
    theta = geometric_theta(delta * Fraction(r, 10))
    scan = noniso_inequality_scan(theta, delta, Fraction(c, 10), Fraction(k, 10), Fraction(1, 100), 20)
    assert scan.first_failure is None


def test_fast_growing():
    assert all(fast_growing(0, n) == n + 1 for n in range(101))
    assert fast_growing(1, 3) == 6
    assert fast_growing(2, 2) == 8
    assert fast_growing(2, 3) == 24
    with pytest.raises(OverflowGuard):
        fast_growing(3, 3)
