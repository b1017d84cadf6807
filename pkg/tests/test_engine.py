from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tsirelson_norms.certificate import Leaf, verify_certificate
from tsirelson_norms.engine import eval_iterate, eval_norm, evaluate
from tsirelson_norms.errors import ConfigError, GuardExceeded
from tsirelson_norms.laws import MixedTsirelson
from tsirelson_norms.oracle import oracle_iterates, oracle_norm
from tsirelson_norms.spaces import (
    make_edgington,
    make_sigma_schreier,
    make_tsirelson,
    make_V,
    make_Vprime,
    make_W,
    two_convexify,
)
from tsirelson_norms.vectors import FinVec
from tsirelson_norms.weights import geometric_theta

from conftest import ALPHA, HALF_THETA, THETA, vectors

E234 = FinVec.ones([2, 3, 4])


def test_iterates_of_e234_in_V():
    law = make_V(THETA).law
    assert [eval_iterate(E234, law, m).value for m in range(4)] == [1, Fraction(27, 16), Fraction(15, 8), Fraction(15, 8)]
    assert eval_norm(E234, law).value == Fraction(15, 8)


def test_unit_vectors_have_leaf_certificates(core_laws):
    for law in core_laws.values():
        for m in range(3):
            result = eval_iterate(FinVec.unit(6), law, m)
            assert result.value == 1
            assert result.certificate == Leaf(6, 1)


def test_small_examples():
    assert eval_norm(FinVec.ones([2, 3]), make_V(HALF_THETA).law).value == 1
    t = make_tsirelson(Fraction(1, 2)).law
    assert eval_norm(FinVec.ones([3, 4, 5]), t).value == Fraction(3, 2)
    assert eval_norm(FinVec.ones([2, 3]), t).value == 1
    assert eval_norm(FinVec.unit(4, Fraction(-5, 3)), t).value == Fraction(5, 3)
    assert eval_norm(FinVec(), t).value == 0


def test_small_delta_tsirelson_collapses_to_sup():
    for delta in (Fraction(1, 3), Fraction(1, 4), Fraction(1, 10)):
        assert eval_norm(FinVec.ones([3, 4, 5]), make_tsirelson(delta).law).value == 1


def test_W_agrees_with_V_on_e234():
    assert eval_norm(E234, make_W(THETA, 1).law).value == eval_norm(E234, make_V(THETA).law).value


def test_sigma_examples():
    vprime = make_Vprime(THETA, ALPHA).law
    assert evaluate(E234, vprime).value == Fraction(57, 32)
    assert evaluate(FinVec.unit(3), vprime).value == 1
    assert evaluate(FinVec(), vprime).value == 0
    schreier_sum = make_sigma_schreier(ALPHA).law
    assert evaluate(FinVec.unit(9), schreier_sum).value == 1
    # |e_1+e_2+e_3|_n = 2 for every n >= 1: a Schreier set holding 1 is {1}.
    assert evaluate(FinVec.ones([1, 2, 3]), schreier_sum).value == 2


def test_squared_examples():
    edg = make_edgington(ALPHA).law
    assert evaluate(FinVec.unit(5), edg).value == 1
    # Squared iterates are 2 for every n >= 1, and the series starts at n = 1.
    assert evaluate(FinVec.ones([2, 3]), edg).value == 2
    assert evaluate(FinVec.ones([1, 2]), edg).value == 1
    convex = two_convexify(make_V(HALF_THETA)).law
    assert evaluate(FinVec.ones([2, 3]), convex).value == 1
    half = FinVec.ones([2, 3], Fraction(1, 2))
    assert evaluate(half, convex).value == Fraction(1, 4)
    assert evaluate(half, convex).squared


def test_iterate_index_only_for_mixed_laws():
    with pytest.raises(ConfigError):
        evaluate(E234, make_Vprime(THETA, ALPHA).law, m=2)


def test_guard():
    with pytest.raises(GuardExceeded):
        eval_norm(FinVec.ones(range(1, 12)), make_V(THETA).law, max_support=10)


@settings(max_examples=60, deadline=None)
@given(vectors(max_support=5))
def test_engine_matches_oracle(x):
    for law in (make_V(THETA).law, make_W(THETA, 1).law, make_tsirelson(Fraction(1, 2)).law):
        expected = oracle_iterates(x, law, 3)
        for m in range(4):
            assert eval_iterate(x, law, m).value == expected[m]


@settings(max_examples=40, deadline=None)
@given(vectors(max_support=5))
def test_engine_matches_oracle_harmonic_and_admissible(x):
    from tsirelson_norms.weights import harmonic_theta

    for law in (make_V(harmonic_theta()).law, MixedTsirelson(THETA, allowable_upto=0)):
        assert eval_iterate(x, law, 2).value == oracle_norm(x, law, 2)


@settings(max_examples=60, deadline=None)
@given(vectors(max_support=6))
def test_iterates_monotone_and_stable(x):
    law = make_V(THETA).law
    values = [eval_iterate(x, law, m).value for m in range(len(x) + 2)]
    assert values == sorted(values)
    assert values[-1] == values[-2] == eval_norm(x, law).value


@settings(max_examples=60, deadline=None)
@given(vectors(max_support=6), st.sampled_from([Fraction(-2), Fraction(1, 3), Fraction(5, 7)]))
def test_norm_axioms(x, c):
    for law in (make_V(THETA).law, make_W(THETA, 1).law, make_tsirelson(Fraction(1, 2)).law):
        value = eval_norm(x, law).value
        assert x.linf() <= value <= x.l1()
        assert eval_norm(x.scale(c), law).value == abs(c) * value
        assert eval_norm(-x, law).value == value
        assert eval_norm(abs(x), law).value == value


@settings(max_examples=60, deadline=None)
@given(vectors(max_support=3, window=6), vectors(max_support=3, window=6))
def test_triangle_inequality(x, y):
    for law in (make_V(THETA).law, make_tsirelson(Fraction(1, 2)).law):
        assert eval_norm(x + y, law).value <= eval_norm(x, law).value + eval_norm(y, law).value


@settings(max_examples=60, deadline=None)
@given(vectors(max_support=5))
def test_solidity(x):
    law = make_V(THETA).law
    shrunk = x.map(lambda a: a / 2).restrict(x.support[1:] + x.support[:1])
    assert eval_norm(shrunk, law).value <= eval_norm(x, law).value
    assert eval_norm(x.restrict(x.support[:-1]), law).value <= eval_norm(x, law).value


@settings(max_examples=40, deadline=None)
@given(vectors(max_support=5))
def test_squared_norms(x):
    edg = evaluate(x, make_edgington(ALPHA).law)
    assert edg.value <= x.l2_squared()
    assert edg.value == evaluate(x, two_convexify(make_sigma_schreier(ALPHA)).law).value
    convex = evaluate(x, two_convexify(make_V(THETA)).law)
    assert convex.value == eval_norm(x.square(), make_V(THETA).law).value


@settings(max_examples=40, deadline=None)
@given(vectors(max_support=5))
def test_admissible_variant_is_smaller(x):
    v = eval_norm(x, make_V(THETA).law).value
    a = eval_norm(x, MixedTsirelson(THETA, allowable_upto=0)).value
    assert a <= v


def test_certificates_match_values(core_laws):
    x = FinVec.parse("2:1,3:-1/2,5:1/3,6:1,9:-1")
    for law in core_laws.values():
        for m in range(4):
            result = eval_iterate(x, law, m)
            assert verify_certificate(result.certificate, x, law, m) == result.value


def test_sup_of_geometric_scale():
    theta = geometric_theta(Fraction(1, 2), scale=Fraction(3, 2))
    assert theta(1) == Fraction(3, 4)
    assert eval_norm(E234, make_V(theta).law).value == Fraction(15, 8)
