"""Desk-scale checks of the inequalities and witness constructions behind the
weak Hilbert examples: asymptotic l_1 lower bounds, the 2-convex transfer,
l_1 windows, c_0 block witnesses, repeated averages, the non-isomorphism
scan and the fast-growing hierarchy.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import schreier
from .engine import DEFAULT_MAX_SUPPORT, eval_iterate, eval_norm, evaluate, iterate_values
from .errors import ConfigError, ConstructionFailed, GuardExceeded, OverflowGuard
from .laws import Edgington, MixedTsirelson, SigmaSum, TwoConvex
from .spaces import SpaceConfig, make_tsirelson, make_V, make_V_admissible
from .vectors import FinVec, disjoint_sum
from .weights import WeightSeq


@dataclass(frozen=True)
class DisjointSample:
    vectors: tuple
    start_bound: int

    def __post_init__(self):
        vectors = tuple(self.vectors)
        object.__setattr__(self, "vectors", vectors)
        seen = set()
        for v in vectors:
            if not v:
                raise ValueError("sample vectors must be nonzero")
            if seen & set(v.support):
                raise ValueError("sample supports overlap")
            seen |= set(v.support)
            if min(v.support) < self.start_bound:
                raise ValueError(f"support of {v} starts before {self.start_bound}")

    @property
    def supports(self):
        return [v.support for v in self.vectors]

    def total(self) -> FinVec:
        return disjoint_sum(self.vectors)

    def scaled(self, c) -> "DisjointSample":
        return DisjointSample(tuple(v.scale(c) for v in self.vectors), self.start_bound)


def _value(space, x, max_support):
    law = space.law if isinstance(space, SpaceConfig) else space
    return evaluate(x, law, max_support=max_support).value


def _first_level_allowable(law: MixedTsirelson) -> bool:
    return law.has_level(1) and law.rule(1) == "allowable"


@dataclass(frozen=True)
class L1LowerReport:
    lhs: Fraction
    rhs: Fraction
    holds: bool
    constant: Fraction


def check_asymptotic_l1_lower(space: SpaceConfig, sample: DisjointSample, max_support: int = DEFAULT_MAX_SUPPORT) -> L1LowerReport:
    """||sum x_i|| >= theta_1 * l * sum ||x_i|| in a Sigma-sum of V or W iterates.

    l is the lower bound on alpha_{m+1}/alpha_m; the shift alpha_m -> alpha_{m-1}
    in the chain of inequalities needs the lower ratio, not the upper one.
    """
    law = space.law
    if not isinstance(law, SigmaSum) or not isinstance(law.inner, MixedTsirelson):
        raise ConfigError("the asymptotic l_1 check needs a Sigma-sum of mixed Tsirelson iterates")
    if not _first_level_allowable(law.inner):
        raise ConfigError("level 1 of the inner law must use allowable families")
    if not schreier.is_allowable(sample.supports, 1):
        raise ValueError("sample supports are not S_1-allowable")
    lower, _ = law.alpha.ratio_bounds()
    constant = law.inner.theta(1) * lower
    lhs = _value(space, sample.total(), max_support)
    rhs = constant * sum((_value(space, v, max_support) for v in sample.vectors), Fraction(0))
    return L1LowerReport(lhs, rhs, lhs >= rhs, constant)


def asymptotic_l1_constant(space: SpaceConfig) -> Fraction:
    """A constant C with ||sum x_i|| >= C sum ||x_i|| for S_1-allowable disjoint x_i."""
    law = space.law
    if isinstance(law, MixedTsirelson) and _first_level_allowable(law):
        return law.theta(1)
    if isinstance(law, SigmaSum) and isinstance(law.inner, MixedTsirelson) and _first_level_allowable(law.inner):
        return law.inner.theta(1) * law.alpha.ratio_bounds()[0]
    raise ConfigError(f"no known asymptotic l_1 constant for {space.name}; pass one explicitly")


@dataclass(frozen=True)
class TransferReport:
    constant: Fraction
    sum_of_norms: Fraction  # sum ||y_i^2||  (= sum ||y_i||_(2)^2)
    norm_of_sum: Fraction  # ||sum y_i^2||  (= ||(sum y_i^2)^(1/2)||_(2)^2)
    lower_holds: bool
    upper_holds: bool
    measured_ratio: Fraction

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


def check_two_convex_transfer(inner: SpaceConfig, sample: DisjointSample, constant=None,
                              max_support: int = DEFAULT_MAX_SUPPORT) -> TransferReport:
    """Both squared inequalities that pass asymptotic l_1 in X to asymptotic l_2 in X^(2).

        C * sum ||y_i^2||  <=  ||sum y_i^2||  <=  sum ||y_i^2||

    C defaults to the known lower constant of the inner space.
    """
    if isinstance(inner.law, (TwoConvex, Edgington)):
        raise ConfigError("the transfer check takes the space before convexification")
    if not schreier.is_allowable(sample.supports, 1):
        raise ValueError("sample supports are not S_1-allowable")
    c = asymptotic_l1_constant(inner) if constant is None else Fraction(constant)
    squares = [v.square() for v in sample.vectors]
    sum_of_norms = sum((_value(inner, s, max_support) for s in squares), Fraction(0))
    norm_of_sum = _value(inner, disjoint_sum(squares), max_support)
    return TransferReport(
        constant=c,
        sum_of_norms=sum_of_norms,
        norm_of_sum=norm_of_sum,
        lower_holds=c * sum_of_norms <= norm_of_sum,
        upper_holds=norm_of_sum <= sum_of_norms,
        measured_ratio=norm_of_sum / sum_of_norms,
    )


@dataclass(frozen=True)
class MassProfile:
    """alpha_m * ||v||_m for m below the stabilization index, then the tail mass."""

    terms: tuple  # ((m, mass), ...) for m = 1 .. stable - 1
    stable: int
    stable_value: Fraction
    alpha: WeightSeq

    @property
    def tail_mass(self) -> Fraction:
        return self.alpha.tail(self.stable) * self.stable_value

    @property
    def total(self) -> Fraction:
        return sum((mass for _, mass in self.terms), Fraction(0)) + self.tail_mass

    def mass(self, m: int) -> Fraction:
        if m < self.stable:
            return self.terms[m - 1][1]
        return self.alpha(m) * self.stable_value

    def mass_from(self, p: int) -> Fraction:
        head = sum((mass for m, mass in self.terms if m >= p), Fraction(0))
        return head + self.alpha.tail(max(p, self.stable)) * self.stable_value


def mass_profile(v: FinVec, space: SpaceConfig, max_support: int = DEFAULT_MAX_SUPPORT) -> MassProfile:
    law = space.law
    if not isinstance(law, SigmaSum):
        raise ConfigError("mass profiles are defined for Sigma-sum spaces")
    if not v:
        raise ValueError("the zero vector has no mass profile")
    stable = len(v)
    values, _ = iterate_values(v, law.inner, stable, max_support)
    terms = tuple((m, law.alpha(m) * values[m - 1][0]) for m in range(1, stable))
    return MassProfile(terms, stable, values[stable - 1][0], law.alpha)


@dataclass(frozen=True)
class Window:
    p: int
    q: int
    mass: Fraction


def find_l1_window(v: FinVec, space: SpaceConfig, threshold=Fraction(1, 2), floor: int = 1,
                   max_support: int = DEFAULT_MAX_SUPPORT, max_q: int = 100_000):
    """Least q >= floor with sum_{m=floor}^{q} alpha_m ||v||_m >= threshold.

    v must have norm exactly 1 in the space. Returns None when no finite
    window starting at floor reaches the threshold.
    """
    threshold = Fraction(threshold)
    if _value(space, v, max_support) != 1:
        raise ValueError(f"{v} is not normalized in {space.name}")
    profile = mass_profile(v, space, max_support)
    if threshold > 0 and profile.mass_from(floor) <= threshold:
        # Every finite window misses a strictly positive tail.
        return None
    total = Fraction(0)
    for q in range(floor, floor + max_q):
        total += profile.mass(q)
        if total >= threshold:
            return Window(floor, q, total)
    raise ConstructionFailed(f"no window ending before {floor + max_q}")


def normalize(v: FinVec, space: SpaceConfig, max_support: int = DEFAULT_MAX_SUPPORT) -> FinVec:
    """Scale v to norm exactly 1 (rational scaling; not for squared spaces)."""
    if space.squared:
        raise ConfigError("exact rational normalization is not available for squared norms")
    return v.scale(1 / _value(space, v, max_support))


def l1_block_windows(blocks, space: SpaceConfig, threshold, max_support: int = DEFAULT_MAX_SUPPORT):
    """Normalize successive blocks and give them consecutive disjoint windows.

    Returns [(v_i, Window)]; raises ConstructionFailed if a block has no
    window above the previous one.
    """
    out = []
    floor = 1
    for block in blocks:
        v = normalize(block, space, max_support)
        window = find_l1_window(v, space, threshold, floor, max_support)
        if window is None:
            raise ConstructionFailed(f"no window from m={floor} reaches {threshold} for {v}")
        out.append((v, window))
        floor = window.q + 1
    return out


def l1_lower_constant(vectors, space: SpaceConfig, coefficients=(-1, 0, 1), max_support: int = DEFAULT_MAX_SUPPORT):
    """min ||sum c_i v_i|| / sum |c_i| over nonzero coefficient patterns."""
    best = None
    for pattern in itertools.product(coefficients, repeat=len(vectors)):
        weight = sum(abs(Fraction(c)) for c in pattern)
        if weight == 0:
            continue
        combo = FinVec()
        for c, v in zip(pattern, vectors):
            combo = combo + v.scale(c)
        ratio = _value(space, combo, max_support) / weight
        if best is None or ratio < best:
            best = ratio
    return best


@dataclass(frozen=True)
class C0Witness:
    ys: tuple
    low_value: Fraction  # ||sum y_i||_{V,m}
    high_value: Fraction  # ||sum y_i||_{V,m+1}
    bound: Fraction  # theta_1 * n * min_i ||y_i||_{V,m}
    block_length: int


def c0_block_witness(theta: WeightSeq, m: int, n: int, max_block_length: int = 3,
                     max_support: int = 9) -> C0Witness:
    """n successive blocks after position n, normalized in ||.||_{V,m}, whose sum
    stays small in ||.||_{V,m} yet is at least theta_1 * n in ||.||_{V,m+1}.

    Flat blocks of each length up to max_block_length are tried; the one with
    the smallest ||sum y_i||_{V,m} wins (shortest on ties).
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    law = make_V(theta).law
    best = None
    for length in range(1, max_block_length + 1):
        if n * length > max_support:
            break
        ys = []
        for i in range(n):
            start = n + 1 + i * length
            raw = FinVec.ones(range(start, start + length))
            ys.append(raw.scale(1 / eval_iterate(raw, law, m).value))
        total = disjoint_sum(ys)
        low = eval_iterate(total, law, m, max_support).value
        high = eval_iterate(total, law, m + 1, max_support).value
        smallest = min(eval_iterate(y, law, m).value for y in ys)
        bound = theta(1) * n * smallest
        if high < bound:
            raise AssertionError(f"||sum y_i||_{{V,{m + 1}}} = {high} < {bound}")
        if best is None or low < best.low_value:
            best = C0Witness(tuple(ys), low, high, bound, length)
    if best is None:
        raise ConstructionFailed(f"{n} blocks do not fit in {max_support} support points")
    return best


def _max_average(n: int, start: int):
    """(weights dict, last index) of the repeated average on a maximal S_n set from start."""
    if n == 0:
        return {start: Fraction(1)}, start
    out = {}
    cursor = start
    for _ in range(start):
        sub, last = _max_average(n - 1, cursor)
        for j, w in sub.items():
            out[j] = w / start
        cursor = last + 1
    return out, cursor - 1


@dataclass(frozen=True)
class RepeatedAverage:
    vector: FinVec
    t_norm: Fraction
    delta: Fraction
    level: int

    @property
    def target(self) -> Fraction:
        return self.delta**self.level


def repeated_average_squares(n: int, start: int, delta, max_support: int = DEFAULT_MAX_SUPPORT) -> RepeatedAverage:
    """The level-n repeated average a on a maximal S_n set beginning at start,
    with its exact T(delta,S_1) norm. Its coordinates are the squares x_i^2."""
    if n < 0 or start < 1:
        raise ValueError("need n >= 0 and start >= 1")
    delta = Fraction(delta)
    weights, _ = _max_average(n, start)
    a = FinVec(tuple(weights.items()))
    if len(a) > max_support:
        raise GuardExceeded("repeated average support", len(a), max_support)
    t_law = make_tsirelson(delta).law
    return RepeatedAverage(a, eval_norm(a, t_law, max_support).value, delta, n)


def sqrt_bounds(q: Fraction, width: Fraction):
    """Rationals lo <= sqrt(q) <= hi with hi - lo <= width."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if width <= 0:
        raise ValueError("width must be positive")
    bits = 0
    while Fraction(1, q.denominator * 2**bits) > width:
        bits += 1
    scale = q.denominator * 2**bits
    root = math.isqrt(q.numerator * q.denominator * 4**bits)
    lo = Fraction(root, scale)
    hi = lo if root * root == q.numerator * q.denominator * 4**bits else Fraction(root + 1, scale)
    return lo, hi


def noniso_holds_exact(theta_n, delta_n, C, K, eps) -> bool:
    """Exact test of sqrt(theta_n) <= C^2 (K (delta_n + eps)^(1/2) + eps) by squaring."""
    A = Fraction(theta_n)
    B = Fraction(delta_n) + eps
    c1 = Fraction(C) ** 2 * K
    c0 = Fraction(C) ** 2 * eps
    D = A - c1 * c1 * B - c0 * c0
    if D <= 0:
        return True
    return D * D <= 4 * c1 * c1 * c0 * c0 * B


@dataclass(frozen=True)
class ScanRow:
    n: int
    theta: Fraction
    rhs_lo: Fraction
    rhs_hi: Fraction
    holds: bool
    method: str


@dataclass
class NonisoScan:
    first_failure: int | None
    rows: list = field(default_factory=list)


def noniso_inequality_scan(theta: WeightSeq, delta, C, K, eps, n_max: int, refinements: int = 40) -> NonisoScan:
    """Least n <= n_max with sqrt(theta_n) > C^2 (K (delta^n + eps)^(1/2) + eps).

    Square roots are bracketed by rational intervals of width below eps/100,
    halved until the verdict separates; an exact squared comparison settles
    ties that no interval can separate.
    """
    delta, C, K, eps = (Fraction(v) for v in (delta, C, K, eps))
    width = eps / 100 if eps > 0 else Fraction(1, 10**6)
    scan = NonisoScan(None)
    for n in range(1, n_max + 1):
        th = theta(n)
        verdict = None
        w = width
        for _ in range(refinements):
            r_lo, r_hi = sqrt_bounds(delta**n + eps, w)
            s_lo, s_hi = sqrt_bounds(th, w)
            rhs_lo = C * C * (K * r_lo + eps)
            rhs_hi = C * C * (K * r_hi + eps)
            if s_hi <= rhs_lo:
                verdict, method = True, "interval"
                break
            if s_lo > rhs_hi:
                verdict, method = False, "interval"
                break
            w /= 2
        if verdict is None:
            verdict, method = noniso_holds_exact(th, delta**n, C, K, eps), "exact"
        scan.rows.append(ScanRow(n, th, rhs_lo, rhs_hi, verdict, method))
        if not verdict:
            scan.first_failure = n
            break
    return scan


DEFAULT_GROWTH_CAP = 2**64


def fast_growing(i: int, n: int, cap: int = DEFAULT_GROWTH_CAP) -> int:
    """g_i(n) with g_0(n) = n + 1 and g_{i+1}(n) = g_i^n(n).

    Raises OverflowGuard naming the first intermediate value above cap.
    """
    if i < 0 or n < 0:
        raise ValueError("need i >= 0 and n >= 0")

    def check(value, label):
        if value > cap:
            shown = value if value.bit_length() <= 128 else f"a {value.bit_length()}-bit integer"
            raise OverflowGuard(f"{label} = {shown} exceeds cap {cap}")
        return value

    def iterate(level, times, value):
        if level == 0:
            # Iterated successor has a closed form.
            return check(value + times, f"g_0^{times}({value})")
        for _ in range(times):
            value = g(level, value)
        return value

    def g(level, value):
        if level == 0:
            return check(value + 1, f"g_0({value})")
        return check(iterate(level - 1, value, value), f"g_{level}({value})")

    return g(i, n)


def compare_admissible_variant(x: FinVec, theta: WeightSeq, max_support: int = DEFAULT_MAX_SUPPORT):
    """(||x||_V, ||x|| with admissible families only, ratio); the ratio is >= 1."""
    v = eval_norm(x, make_V(theta).law, max_support).value
    a = eval_norm(x, make_V_admissible(theta), max_support).value
    return v, a, (v / a if a else Fraction(1))
