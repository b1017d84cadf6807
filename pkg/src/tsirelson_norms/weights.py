"""Exactly evaluable weight sequences (theta_n) and (alpha_n), n >= 1."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError
from .vectors import format_rational, parse_rational

KINDS = ("geometric", "harmonic", "explicit")
ROLES = ("theta", "alpha")


@dataclass(frozen=True)
class WeightSeq:
    """A positive sequence indexed from 1.

    geometric, role theta:  theta_n = scale * ratio**n
    geometric, role alpha:  alpha_n = (1 - ratio) * ratio**(n - 1), summing to 1
    harmonic (theta only):  theta_n = 1 / (n + 1)
    explicit:               values[n - 1] for n <= len(values), then
                            values[-1] * ratio**(n - len(values))

    Every supported kind is nonincreasing past its explicit prefix, which
    is what makes the level searches in the engine finite.
    """

    kind: str
    role: str
    ratio: Fraction | None = None
    scale: Fraction = Fraction(1)
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown weight kind {self.kind!r}")
        if self.role not in ROLES:
            raise ConfigError(f"unknown weight role {self.role!r}")
        if self.ratio is not None:
            object.__setattr__(self, "ratio", Fraction(self.ratio))
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        self._validate()

    def _validate(self):
        if self.kind == "harmonic":
            if self.role != "theta":
                raise ConfigError("harmonic weights are not summable; theta role only")
            if self.ratio is not None or self.values:
                raise ConfigError("harmonic weights take no ratio or values")
            return
        if self.ratio is None or not 0 < self.ratio < 1:
            raise ConfigError(f"{self.kind} weights need a ratio in (0,1), got {self.ratio}")
        if self.kind == "geometric":
            if self.values:
                raise ConfigError("geometric weights take no explicit values")
            if self.role == "alpha" and self.scale != 1:
                raise ConfigError("alpha weights are normalized; scale must be 1")
            if not 0 < self.scale * self.ratio < 1:
                raise ConfigError("theta_1 = scale*ratio must lie in (0,1)")
            return
        if not self.values:
            raise ConfigError("explicit weights need at least one value")
        if self.scale != 1:
            raise ConfigError("explicit weights take no scale")
        for v in self.values:
            if not 0 < v < 1:
                raise ConfigError(f"weight {v} not in (0,1)")
        if self.role == "alpha":
            if self.tail(1) != 1:
                raise ConfigError(f"alpha weights sum to {self.tail(1)}, not 1")
            ratios = [b / a for a, b in zip(self.values, self.values[1:])]
            if any(not 0 < r < 1 for r in ratios):
                raise ConfigError("consecutive alpha ratios must lie in (0,1)")

    def __call__(self, n: int) -> Fraction:
        if n < 1:
            raise ValueError(f"weights are indexed from 1, got {n}")
        if self.kind == "harmonic":
            return Fraction(1, n + 1)
        if self.kind == "geometric":
            if self.role == "alpha":
                return (1 - self.ratio) * self.ratio ** (n - 1)
            return self.scale * self.ratio**n
        p = len(self.values)
        if n <= p:
            return self.values[n - 1]
        return self.values[-1] * self.ratio ** (n - p)

    @property
    def prefix_length(self) -> int:
        """Index past which the sequence is nonincreasing."""
        return len(self.values)

    def tail(self, start: int) -> Fraction:
        """Exact sum of the sequence over n >= start."""
        if start < 1:
            raise ValueError("start must be >= 1")
        if self.kind == "harmonic":
            raise ValueError("harmonic weights have no finite tail")
        if self.kind == "geometric":
            return self(start) / (1 - self.ratio)
        p = len(self.values)
        if start <= p:
            head = sum(self.values[start - 1 :], Fraction(0))
            return head + self.values[-1] * self.ratio / (1 - self.ratio)
        return self(start) / (1 - self.ratio)

    def sup_between(self, lo: int, hi=None):
        """(max weight, least level attaining it) over lo <= n <= hi; hi=None is unbounded."""
        if hi is not None and hi < lo:
            return None
        last = max(lo, self.prefix_length + 1)
        if hi is not None:
            last = min(last, hi)
        best, level = None, None
        for n in range(lo, last + 1):
            w = self(n)
            if best is None or w > best:
                best, level = w, n
        return best, level

    def ratio_bounds(self):
        """(lower, upper) bounds on alpha_{n+1}/alpha_n over all n."""
        if self.kind == "geometric":
            return self.ratio, self.ratio
        if self.kind == "harmonic":
            raise ValueError("ratio bounds are defined for summable weights only")
        ratios = [b / a for a, b in zip(self.values, self.values[1:])] + [self.ratio]
        return min(ratios), max(ratios)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.ratio is not None:
            out["ratio"] = format_rational(self.ratio)
        if self.kind == "geometric" and self.role == "theta":
            out["scale"] = format_rational(self.scale)
        if self.values:
            out["values"] = [format_rational(v) for v in self.values]
        return out

    @classmethod
    def from_dict(cls, data: dict, role: str) -> "WeightSeq":
        if not isinstance(data, dict):
            raise ConfigError(f"{role}: expected an object, got {type(data).__name__}")
        unknown = set(data) - {"kind", "ratio", "scale", "values"}
        if unknown:
            raise ConfigError(f"{role}: unknown fields {sorted(unknown)}")
        if "kind" not in data:
            raise ConfigError(f"{role}: missing field 'kind'")
        values = data.get("values", [])
        if not isinstance(values, list):
            raise ConfigError(f"{role}.values: expected a list")
        return cls(
            kind=data["kind"],
            role=role,
            ratio=parse_rational(data["ratio"]) if "ratio" in data else None,
            scale=parse_rational(data.get("scale", "1")),
            values=tuple(parse_rational(v) for v in values),
        )


def geometric_theta(ratio, scale=1) -> WeightSeq:
    return WeightSeq("geometric", "theta", ratio=Fraction(ratio), scale=Fraction(scale))


def geometric_alpha(ratio) -> WeightSeq:
    return WeightSeq("geometric", "alpha", ratio=Fraction(ratio))


def harmonic_theta() -> WeightSeq:
    return WeightSeq("harmonic", "theta")
