"""Named spaces: T(delta,S_1), V, W, V', W', Sigma(alpha_n|.|_n), E_alpha and 2-convexifications.

A space config file is a JSON object with fields drawn from
kind, name, provenance, theta, alpha, s, delta, inner. Rationals are "p/q"
strings; unknown fields are rejected.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError
from .laws import (
    Edgington,
    MixedTsirelson,
    SchreierIterates,
    SigmaSum,
    TwoConvex,
)
from .vectors import format_rational, parse_rational
from .weights import WeightSeq, geometric_theta

KINDS = ("T", "V", "W", "Vprime", "Wprime", "SigmaSchreier", "Edgington", "TwoConvex")
CONVEX_PREFIX = "2x:"


@dataclass(frozen=True)
class SpaceConfig:
    name: str
    law: object
    provenance: str = ""
    # Constructor parameters, kept so the config serializes back losslessly.
    kind: str = ""
    params: tuple = ()

    def param(self, key, default=None):
        return dict(self.params).get(key, default)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "name": self.name}
        if self.provenance:
            out["provenance"] = self.provenance
        for key, value in self.params:
            if isinstance(value, WeightSeq):
                out[key] = value.to_dict()
            elif isinstance(value, SpaceConfig):
                out[key] = value.to_dict()
            elif isinstance(value, Fraction):
                out[key] = format_rational(value)
            else:
                out[key] = value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]

    @property
    def squared(self) -> bool:
        return isinstance(self.law, (TwoConvex, Edgington))


def _theta(theta) -> WeightSeq:
    if theta.role != "theta":
        raise ConfigError("expected a theta-role weight sequence")
    return theta


def _alpha(alpha) -> WeightSeq:
    if alpha.role != "alpha":
        raise ConfigError("expected an alpha-role weight sequence")
    return alpha


def _split(s) -> int:
    if not isinstance(s, int) or isinstance(s, bool) or s < 1:
        raise ConfigError(f"W needs a positive integer split level s, got {s!r}")
    return s


def make_tsirelson(delta) -> SpaceConfig:
    """T(delta, S_1): a single admissible level with theta_1 = delta."""
    delta = parse_rational(delta)
    if not 0 < delta < 1:
        raise ConfigError(f"delta must lie in (0,1), got {delta}")
    law = MixedTsirelson(geometric_theta(delta), allowable_upto=0, level_cap=1)
    return SpaceConfig("T", law, "Tsirelson space T(delta,S_1)", "T", (("delta", delta),))


def make_V(theta: WeightSeq) -> SpaceConfig:
    law = MixedTsirelson(_theta(theta))
    return SpaceConfig("V", law, "T_M(theta_n,S_n): allowable families at every level", "V", (("theta", theta),))


def make_V_admissible(theta: WeightSeq) -> MixedTsirelson:
    """V with admissible families at every level; not a registry space, used for comparisons."""
    return MixedTsirelson(_theta(theta), allowable_upto=0)


def make_W(theta: WeightSeq, s: int) -> SpaceConfig:
    law = MixedTsirelson(_theta(theta), allowable_upto=_split(s))
    return SpaceConfig(
        "W", law, "T_M(s)(theta_n,S_n): allowable up to level s, admissible above", "W",
        (("theta", theta), ("s", s)),
    )


def make_Vprime(theta: WeightSeq, alpha: WeightSeq) -> SpaceConfig:
    law = SigmaSum(_alpha(alpha), make_V(theta).law)
    return SpaceConfig("Vprime", law, "Sigma(alpha_n ||.||_{V,n})", "Vprime", (("theta", theta), ("alpha", alpha)))


def make_Wprime(theta: WeightSeq, alpha: WeightSeq, s: int) -> SpaceConfig:
    law = SigmaSum(_alpha(alpha), make_W(theta, s).law)
    return SpaceConfig(
        "Wprime", law, "Sigma(alpha_n ||.||_{W,n})", "Wprime",
        (("theta", theta), ("alpha", alpha), ("s", s)),
    )


def make_sigma_schreier(alpha: WeightSeq) -> SpaceConfig:
    law = SigmaSum(_alpha(alpha), SchreierIterates())
    return SpaceConfig("SigmaSchreier", law, "Sigma(alpha_n |.|_n) over the Schreier norms", "SigmaSchreier", (("alpha", alpha),))


def make_edgington(alpha: WeightSeq) -> SpaceConfig:
    law = Edgington(_alpha(alpha))
    return SpaceConfig("Edgington", law, "Edgington's E_alpha via squared S_1-admissible iterates", "Edgington", (("alpha", alpha),))


def two_convexify(inner: SpaceConfig) -> SpaceConfig:
    if isinstance(inner.law, TwoConvex):
        raise ConfigError(f"{inner.name} is already 2-convexified")
    law = TwoConvex(inner.law)
    note = "2-convexification ||x^2||^(1/2)"
    if inner.kind == "SigmaSchreier":
        note += "; identified with E_alpha for the same alpha"
    return SpaceConfig(CONVEX_PREFIX + inner.name, law, note, "TwoConvex", (("inner", inner),))


_ALLOWED = {
    "T": {"delta"},
    "V": {"theta"},
    "W": {"theta", "s"},
    "Vprime": {"theta", "alpha"},
    "Wprime": {"theta", "alpha", "s"},
    "SigmaSchreier": {"alpha"},
    "Edgington": {"alpha"},
    "TwoConvex": {"inner"},
}


def from_dict(data) -> SpaceConfig:
    if not isinstance(data, dict):
        raise ConfigError("space config must be a JSON object")
    kind = data.get("kind")
    if kind not in _ALLOWED:
        raise ConfigError(f"field 'kind': expected one of {list(KINDS)}, got {kind!r}")
    fields = set(data) - {"kind", "name", "provenance"}
    unknown = fields - _ALLOWED[kind]
    if unknown:
        raise ConfigError(f"unknown fields for kind {kind}: {sorted(unknown)}")
    missing = _ALLOWED[kind] - fields
    if missing:
        raise ConfigError(f"missing fields for kind {kind}: {sorted(missing)}")

    def weights(key, role):
        return WeightSeq.from_dict(data[key], role)

    if kind == "T":
        cfg = make_tsirelson(parse_rational(data["delta"]))
    elif kind == "V":
        cfg = make_V(weights("theta", "theta"))
    elif kind == "W":
        cfg = make_W(weights("theta", "theta"), data["s"])
    elif kind == "Vprime":
        cfg = make_Vprime(weights("theta", "theta"), weights("alpha", "alpha"))
    elif kind == "Wprime":
        cfg = make_Wprime(weights("theta", "theta"), weights("alpha", "alpha"), data["s"])
    elif kind == "SigmaSchreier":
        cfg = make_sigma_schreier(weights("alpha", "alpha"))
    elif kind == "Edgington":
        cfg = make_edgington(weights("alpha", "alpha"))
    else:
        cfg = two_convexify(from_dict(data["inner"]))

    name = data.get("name", cfg.name)
    provenance = data.get("provenance", cfg.provenance)
    if not isinstance(name, str) or not isinstance(provenance, str):
        raise ConfigError("name and provenance must be strings")
    return SpaceConfig(name, cfg.law, provenance, cfg.kind, cfg.params)


def load(path) -> SpaceConfig:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def registry(theta: WeightSeq, alpha: WeightSeq, delta=Fraction(1, 2), s: int = 1) -> dict:
    """Every named space for one choice of parameters, keyed by registry name."""
    base = [
        make_tsirelson(delta),
        make_V(theta),
        make_W(theta, s),
        make_Vprime(theta, alpha),
        make_Wprime(theta, alpha, s),
        make_sigma_schreier(alpha),
        make_edgington(alpha),
    ]
    out = {cfg.name: cfg for cfg in base}
    for cfg in base:
        if cfg.kind != "Edgington":
            convex = two_convexify(cfg)
            out[convex.name] = convex
    return out
