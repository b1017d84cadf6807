"""Finitely supported vectors with exact rational coordinates."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ConfigError

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse "p/q" or an integer literal into a Fraction.

    Ints and Fractions pass through unchanged. Floats are rejected: they
    would smuggle binary rounding into exact computations.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ConfigError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ConfigError(f"not a rational: {text!r}")
    match = _RATIONAL.match(text)
    if not match:
        raise ConfigError(f"malformed rational {text!r}")
    num, den = match.groups()
    den = int(den) if den is not None else 1
    if den == 0:
        raise ConfigError(f"malformed rational {text!r}: zero denominator")
    return Fraction(int(num), den)


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FinVec:
    """An element of c_00: sorted (index, coefficient) pairs, no zero entries.

    Indices are 1-based to match the unit vectors e_1, e_2, ...
    """

    entries: tuple = ()

    def __post_init__(self):
        seen = set()
        cleaned = []
        for j, a in self.entries:
            if not isinstance(j, int) or isinstance(j, bool) or j < 1:
                raise ConfigError(f"index must be a positive integer, got {j!r}")
            if j in seen:
                raise ConfigError(f"duplicate index {j}")
            seen.add(j)
            a = Fraction(a)
            if a != 0:
                cleaned.append((j, a))
        cleaned.sort()
        object.__setattr__(self, "entries", tuple(cleaned))

    @classmethod
    def from_dict(cls, coords: Mapping[int, object]) -> "FinVec":
        return cls(tuple((j, parse_rational(a)) for j, a in coords.items()))

    @classmethod
    def unit(cls, k: int, coeff=1) -> "FinVec":
        return cls(((k, Fraction(coeff)),))

    @classmethod
    def ones(cls, indices: Iterable[int], coeff=1) -> "FinVec":
        return cls(tuple((j, Fraction(coeff)) for j in indices))

    @classmethod
    def parse(cls, spec: str) -> "FinVec":
        """Parse the inline form "j:p/q,j:p/q"; an empty string is the zero vector."""
        spec = spec.strip()
        if not spec:
            return cls()
        coords = {}
        for item in spec.split(","):
            if ":" not in item:
                raise ConfigError(f"vector entry {item!r} is not of the form j:p/q")
            idx, val = item.split(":", 1)
            try:
                j = int(idx.strip())
            except ValueError:
                raise ConfigError(f"bad index {idx!r} in vector entry {item!r}") from None
            if j in coords:
                raise ConfigError(f"duplicate index {j}")
            coords[j] = parse_rational(val)
        return cls(tuple(coords.items()))

    def to_spec(self) -> str:
        return ",".join(f"{j}:{format_rational(a)}" for j, a in self.entries)

    def __str__(self):
        return self.to_spec() or "0"

    @property
    def support(self) -> tuple:
        return tuple(j for j, _ in self.entries)

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def __getitem__(self, j) -> Fraction:
        for i, a in self.entries:
            if i == j:
                return a
        return Fraction(0)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def restrict(self, indices) -> "FinVec":
        keep = set(indices)
        return FinVec(tuple((j, a) for j, a in self.entries if j in keep))

    def map(self, f) -> "FinVec":
        """Apply f coordinatewise; f(0) must be 0."""
        return FinVec(tuple((j, f(a)) for j, a in self.entries))

    def square(self) -> "FinVec":
        return self.map(lambda a: a * a)

    def __abs__(self) -> "FinVec":
        return self.map(abs)

    def __neg__(self) -> "FinVec":
        return self.map(lambda a: -a)

    def scale(self, c) -> "FinVec":
        c = Fraction(c)
        return self.map(lambda a: c * a)

    def __add__(self, other: "FinVec") -> "FinVec":
        out = dict(self.entries)
        for j, a in other.entries:
            out[j] = out.get(j, 0) + a
        return FinVec(tuple(out.items()))

    def __sub__(self, other: "FinVec") -> "FinVec":
        return self + (-other)

    def linf(self) -> Fraction:
        return max((abs(a) for _, a in self.entries), default=Fraction(0))

    def l1(self) -> Fraction:
        return sum((abs(a) for _, a in self.entries), Fraction(0))

    def l2_squared(self) -> Fraction:
        return sum((a * a for _, a in self.entries), Fraction(0))


def disjoint_sum(vectors: Iterable[FinVec]) -> FinVec:
    total = FinVec()
    for v in vectors:
        if set(total.support) & set(v.support):
            raise ValueError("supports overlap")
        total = total + v
    return total
