"""Declarative descriptions of norm constructions.

Laws are frozen dataclasses, hence hashable and usable as memo keys.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .weights import WeightSeq

ALLOWABLE = "allowable"
ADMISSIBLE = "admissible"


@dataclass(frozen=True)
class MixedTsirelson:
    """||x|| = ||x||_inf v sup_n theta_n sum_i ||E_i x|| over rule(n)-families.

    Levels n <= allowable_upto use allowable families, higher levels use
    admissible ones; allowable_upto=None makes every level allowable.
    level_cap bounds the levels taking part at all.
    """

    theta: WeightSeq
    allowable_upto: int | None = None
    level_cap: int | None = None

    def __post_init__(self):
        if self.theta.role != "theta":
            raise ConfigError("MixedTsirelson needs a theta-role weight sequence")
        if self.allowable_upto is not None and self.allowable_upto < 0:
            raise ConfigError("allowable_upto must be >= 0")
        if self.level_cap is not None and self.level_cap < 1:
            raise ConfigError("level_cap must be >= 1")

    def rule(self, n: int) -> str:
        if self.allowable_upto is None or n <= self.allowable_upto:
            return ALLOWABLE
        return ADMISSIBLE

    def has_level(self, n: int) -> bool:
        return n >= 1 and (self.level_cap is None or n <= self.level_cap)


@dataclass(frozen=True)
class SchreierIterates:
    """The Schreier norms |.|_n viewed as an iterate family."""


@dataclass(frozen=True)
class EdgingtonSquares:
    """Squared Edgington iterates on y = x^2.

    N_0(y) = max y and N_{n+1}(y) = sup sum_i N_n(E_i y) over
    S_1-admissible (E_i), so that N_n(x^2) = ||x||_{E,n}^2.
    """


@dataclass(frozen=True)
class SigmaSum:
    """sum_{m>=1} alpha_m ||x||_m over an iterate family."""

    alpha: WeightSeq
    inner: object

    def __post_init__(self):
        if self.alpha.role != "alpha":
            raise ConfigError("SigmaSum needs an alpha-role weight sequence")
        if not isinstance(self.inner, (MixedTsirelson, SchreierIterates, EdgingtonSquares)):
            raise ConfigError(f"SigmaSum cannot sum iterates of {type(self.inner).__name__}")


@dataclass(frozen=True)
class Edgington:
    """E_alpha; values are reported squared: sum_n alpha_n ||x||_{E,n}^2."""

    alpha: WeightSeq

    def __post_init__(self):
        if self.alpha.role != "alpha":
            raise ConfigError("Edgington needs an alpha-role weight sequence")

    @property
    def squared_sigma(self) -> SigmaSum:
        return SigmaSum(self.alpha, EdgingtonSquares())


@dataclass(frozen=True)
class TwoConvex:
    """||x||_(2) = ||x^2||^(1/2); values are reported squared."""

    inner: object

    def __post_init__(self):
        if isinstance(self.inner, TwoConvex):
            raise ConfigError("a 2-convexification cannot be convexified again")
        if isinstance(self.inner, Edgington):
            raise ConfigError("Edgington norms are already squared; convexify its Schreier sum instead")
        if not isinstance(self.inner, (MixedTsirelson, SigmaSum)):
            raise ConfigError(f"cannot convexify {type(self.inner).__name__}")


ITERATE_LAWS = (MixedTsirelson, SchreierIterates, EdgingtonSquares)
