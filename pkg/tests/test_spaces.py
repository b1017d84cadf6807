import json

import pytest

from tsirelson_norms.engine import evaluate
from tsirelson_norms.errors import ConfigError
from tsirelson_norms.properties import compare_admissible_variant
from tsirelson_norms.spaces import from_dict, load, make_V, registry, two_convexify
from tsirelson_norms.vectors import FinVec

from conftest import ALPHA, THETA

REGISTRY = registry(THETA, ALPHA)


def test_registry_names():
    assert set(REGISTRY) == {
        "T", "V", "W", "Vprime", "Wprime", "SigmaSchreier", "Edgington",
        "2x:T", "2x:V", "2x:W", "2x:Vprime", "2x:Wprime", "2x:SigmaSchreier",
    }


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_unit_vectors_have_norm_one(name):
    for k in (1, 4, 9):
        assert evaluate(FinVec.unit(k), REGISTRY[name].law).value == 1


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_config_round_trip(name):
    cfg = REGISTRY[name]
    again = from_dict(json.loads(cfg.to_json()))
    assert again == cfg
    assert again.config_hash == cfg.config_hash


def test_hash_tracks_parameters():
    assert registry(THETA, ALPHA, s=2)["W"].config_hash != REGISTRY["W"].config_hash


@pytest.mark.parametrize("data", [
    {"kind": "V", "theta": {"kind": "geometric", "ratio": "3/4"}, "colour": "red"},
    {"kind": "V"},
    {"kind": "Q"},
    {"kind": "W", "theta": {"kind": "geometric", "ratio": "3/4"}, "s": 0},
    {"kind": "T", "delta": "3/2"},
    {"kind": "V", "theta": {"kind": "geometric", "ratio": "3/4", "bogus": 1}},
    {"kind": "Vprime", "theta": {"kind": "geometric", "ratio": "3/4"}, "alpha": {"kind": "harmonic"}},
    {"kind": "TwoConvex", "inner": {"kind": "Edgington", "alpha": {"kind": "geometric", "ratio": "1/2"}}},
])
def test_bad_configs_rejected(data):
    with pytest.raises(ConfigError):
        from_dict(data)


def test_double_convexification_rejected():
    with pytest.raises(ConfigError):
        two_convexify(REGISTRY["2x:V"])


def test_json_errors_carry_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "V",\n "theta": }')
    with pytest.raises(ConfigError, match="line 2"):
        load(path)


def test_convexified_schreier_sum_points_at_edgington():
    assert "E_alpha" in REGISTRY["2x:SigmaSchreier"].provenance


def test_admissible_variant_ratio():
    for spec in ("2:1,3:1,4:1", "3:1,5:1,4:1/2,6:-1", "2:1,4:1,3:1,5:1"):
        v, a, ratio = compare_admissible_variant(FinVec.parse(spec), THETA)
        assert ratio >= 1
        assert v == evaluate(FinVec.parse(spec), make_V(THETA).law).value
