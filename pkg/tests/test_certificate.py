import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from tsirelson_norms import certificate as certs
from tsirelson_norms.certificate import Leaf, Weighted, single_tamperings, verify_certificate
from tsirelson_norms.engine import eval_iterate, evaluate
from tsirelson_norms.errors import ConfigError, InvalidCertificate
from tsirelson_norms.spaces import (
    make_edgington,
    make_sigma_schreier,
    make_V,
    make_Vprime,
    make_W,
    make_Wprime,
    two_convexify,
)
from tsirelson_norms.vectors import FinVec

from conftest import ALPHA, THETA, vectors

V = make_V(THETA).law


def test_leaf():
    assert verify_certificate(Leaf(4, 1), FinVec.unit(4), V) == 1
    assert verify_certificate(Leaf(4, -1), FinVec.unit(4, -3), V) == 3


def test_round_trip_for_e234():
    x = FinVec.ones([2, 3, 4])
    result = eval_iterate(x, V, 2)
    assert verify_certificate(result.certificate, x, V, 2) == Fraction(15, 8)
    data = json.loads(json.dumps(certs.to_dict(result.certificate)))
    assert verify_certificate(certs.from_dict(data), x, V, 2) == Fraction(15, 8)


def test_overlapping_children_rejected():
    bad = Weighted(1, Fraction(3, 4), (Leaf(2, 1), Leaf(2, 1)))
    with pytest.raises(InvalidCertificate, match="disjoint|overlap"):
        verify_certificate(bad, FinVec.ones([2, 3]), V)


def test_depth_limit():
    cert = eval_iterate(FinVec.ones([2, 3, 4]), V, 2).certificate
    with pytest.raises(InvalidCertificate):
        verify_certificate(cert, FinVec.ones([2, 3, 4]), V, 1)


def test_non_schreier_minima_rejected():
    bad = Weighted(1, Fraction(3, 4), (Leaf(1, 1), Leaf(2, 1)))
    with pytest.raises(InvalidCertificate):
        verify_certificate(bad, FinVec.ones([1, 2]), V)


def test_malformed_nodes_rejected():
    for bad in ({"kind": "leaf", "index": 2, "sign": 1, "extra": 0}, {"kind": "knot"}, {"kind": "leaf", "index": "2", "sign": 1}):
        with pytest.raises(ConfigError):
            certs.from_dict(bad)


LAWS = [
    V,
    make_W(THETA, 1).law,
    make_Vprime(THETA, ALPHA).law,
    make_Wprime(THETA, ALPHA, 1).law,
    make_sigma_schreier(ALPHA).law,
    make_edgington(ALPHA).law,
    two_convexify(make_V(THETA)).law,
]


@settings(max_examples=25, deadline=None)
@given(vectors(max_support=4))
def test_soundness_and_tamper_detection(x):
    for law in LAWS:
        result = evaluate(x, law)
        assert verify_certificate(result.certificate, x, law) == result.value
        for variant in single_tamperings(result.certificate):
            try:
                assert verify_certificate(variant, x, law) != result.value
            except InvalidCertificate:
                pass
        data = json.loads(json.dumps(certs.to_dict(result.certificate)))
        assert certs.from_dict(data) == result.certificate
