"""Exact evaluation of iterate norms, Sigma-sums, Edgington and 2-convex norms.

Subsets of supp(x) are bitmasks over the sorted support positions. For a
mixed Tsirelson law the m-th iterate on a mask is

    max( ||x||_inf,  max_M  w(M) * best_M )

where M ranges over candidate sets of block minima, w(M) is the largest
theta_n over the levels whose rule accepts a family with those minima, and
best_M maximizes sum_i ||E_i x||_{m-1} over families with minima M. Blocks
may be restricted to supp(x) and every support point above min M may be
put in some block: both changes keep the family legal (S_n is spreading
and hereditary) and never lower the sum (iterates are 1-unconditional).
With these reductions an admissible family is fixed by M (its blocks are
the intervals between consecutive minima) and an allowable one is found by
a memoized assignment search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import schreier
from .certificate import Leaf, Sigma, SigmaTerm, Square, Weighted, Zero, canonical_children
from .errors import ConfigError, GuardExceeded, StabilizationFailure
from .laws import (
    Edgington,
    EdgingtonSquares,
    MixedTsirelson,
    SchreierIterates,
    SigmaSum,
    TwoConvex,
)
from .vectors import FinVec

DEFAULT_MAX_SUPPORT = 10


@dataclass
class NormResult:
    """An exact norm value and the functional attaining it.

    For 2-convex and Edgington laws `value` is the squared norm and
    `squared` is set; `display` always shows the norm itself.
    """

    value: Fraction
    certificate: object
    iterate: int | None
    squared: bool = False
    stats: dict = field(default_factory=dict)

    @property
    def display(self) -> float:
        v = float(self.value)
        return math.sqrt(v) if self.squared else v


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowbit(mask):
    return (mask & -mask).bit_length() - 1


def _submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class _Session:
    """Per-vector evaluation state; owns the memo tables."""

    def __init__(self, x: FinVec, max_support: int):
        if len(x) > max_support:
            raise GuardExceeded("norm evaluation support", len(x), max_support)
        self.x = x
        self.points = x.support
        self.coeffs = [a for _, a in x.entries]
        self.absval = [abs(a) for a in self.coeffs]
        self.k = len(self.points)
        self.full = (1 << self.k) - 1
        self.hits = 0
        self.misses = 0
        self._linf = {}
        self._l1_from = {}
        self._levels = {}
        self._keys = {}

    def linf(self, mask):
        hit = self._linf.get(mask)
        if hit is None:
            best, pos = Fraction(-1), -1
            for i in _bits(mask):
                if self.absval[i] > best:
                    best, pos = self.absval[i], i
            hit = self._linf[mask] = (best, pos)
        return hit

    def l1_from(self, mask, start):
        key = (mask, start)
        hit = self._l1_from.get(key)
        if hit is None:
            hit = sum((self.absval[i] for i in _bits(mask) if i >= start), Fraction(0))
            self._l1_from[key] = hit
        return hit

    def level(self, mask):
        """Least n with the indices of mask in S_n, or None."""
        if mask not in self._levels:
            self._levels[mask] = schreier.schreier_level(self.indices(mask))
        return self._levels[mask]

    def indices(self, mask):
        hit = self._keys.get(mask)
        if hit is None:
            hit = self._keys[mask] = tuple(self.points[i] for i in _bits(mask))
        return hit

    def intervals(self, mins, rest):
        starts = list(_bits(mins))
        blocks = []
        for i, a in enumerate(starts):
            hi = starts[i + 1] if i + 1 < len(starts) else self.k
            between = rest & (((1 << hi) - 1) & ~((1 << (a + 1)) - 1))
            blocks.append((1 << a) | between)
        return tuple(blocks)

    def leaf(self, pos):
        return Leaf(self.points[pos], 1 if self.coeffs[pos] > 0 else -1)

    def stats(self):
        return {"nodes": self.misses, "memo_hits": self.hits, "support": self.k}


class _TsirelsonSession(_Session):
    def __init__(self, x, law: MixedTsirelson, max_support):
        super().__init__(x, max_support)
        self.law = law
        self.memo = {}
        self.assign_memo = {}
        self._weights = {}

    def weights(self, mins):
        """((w, n) for any disjoint family, (w, n) for successive ones); None where no level fits."""
        hit = self._weights.get(mins)
        if hit is not None:
            return hit
        law = self.law
        lvl = self.level(mins)
        allowable = successive = None
        if lvl is not None:
            lo = max(1, lvl)
            cap = law.level_cap
            if cap is None or lo <= cap:
                successive = law.theta.sup_between(lo, cap)
                hi = cap
                if law.allowable_upto is not None:
                    hi = law.allowable_upto if cap is None else min(cap, law.allowable_upto)
                allowable = law.theta.sup_between(lo, hi)
        hit = self._weights[mins] = (allowable, successive)
        return hit

    def value(self, mask, m):
        key = (mask, m)
        hit = self.memo.get(key)
        if hit is not None:
            self.hits += 1
            return hit[0]
        self.misses += 1
        best, pos = self.linf(mask)
        choice = ("leaf", pos)
        if m > 0 and mask & (mask - 1):
            best_key = None
            for mins in _submasks(mask):
                if not mins & (mins - 1):
                    continue
                allowable, successive = self.weights(mins)
                if allowable is None and successive is None:
                    continue
                top = max(pair[0] for pair in (allowable, successive) if pair is not None)
                low = _lowbit(mins)
                if top * self.l1_from(mask, low) < best:
                    continue
                rest = mask & ~mins & ~((1 << (low + 1)) - 1)
                if allowable is not None:
                    total, blocks = self.assign(mins, rest, m - 1)
                    w, n = allowable
                    best, best_key, choice = self._consider(
                        w * total, blocks, n, w, best, best_key, choice
                    )
                if successive is not None and (allowable is None or successive[0] > allowable[0]):
                    blocks = self.intervals(mins, rest)
                    total = sum((self.value(b, m - 1) for b in blocks), Fraction(0))
                    w, n = successive
                    best, best_key, choice = self._consider(
                        w * total, blocks, n, w, best, best_key, choice
                    )
        self.memo[key] = (best, choice)
        return best

    def _consider(self, cand, blocks, n, w, best, best_key, choice):
        # Ties keep a leaf; among families the lexicographically least wins.
        if cand < best:
            return best, best_key, choice
        key = (tuple(self.indices(b) for b in blocks), n)
        if cand > best or (best_key is not None and key < best_key):
            return cand, key, ("family", n, w, blocks)
        return best, best_key, choice

    def assign(self, mins, rest, m):
        """Best sum of (m)-iterates over blocks with minima `mins` covering `rest`.

        Returns (total, blocks) with ties broken toward the lexicographically
        least block sequence.
        """
        key = (mins, rest, m)
        hit = self.assign_memo.get(key)
        if hit is not None:
            return hit
        a = _lowbit(mins)
        later = mins & ~(1 << a)
        if not later:
            block = (1 << a) | rest
            out = (self.value(block, m), (block,))
            self.assign_memo[key] = out
            return out
        b = _lowbit(later)
        forced = rest & ((1 << b) - 1)
        optional = rest & ~forced
        best = None
        for extra in _submasks(optional):
            block = (1 << a) | forced | extra
            tail_total, tail_blocks = self.assign(later, optional & ~extra, m)
            total = self.value(block, m) + tail_total
            blocks = (block,) + tail_blocks
            if best is None or total > best[0] or (
                total == best[0] and self._order(blocks) < self._order(best[1])
            ):
                best = (total, blocks)
        self.assign_memo[key] = best
        return best

    def _order(self, blocks):
        return tuple(self.indices(b) for b in blocks)

    def certificate(self, mask, m):
        self.value(mask, m)
        _, choice = self.memo[(mask, m)]
        if choice[0] == "leaf":
            return self.leaf(choice[1])
        _, n, w, blocks = choice
        children = [self.certificate(b, m - 1) for b in blocks]
        return Weighted(n, w, canonical_children(children))


class _EdgingtonSession(_Session):
    """Squared Edgington iterates N_n on y = x^2 (x already squared by the caller)."""

    def __init__(self, y, max_support):
        super().__init__(y, max_support)
        self.memo = {}

    def value(self, mask, n):
        key = (mask, n)
        hit = self.memo.get(key)
        if hit is not None:
            self.hits += 1
            return hit[0]
        self.misses += 1
        if n == 0 or not mask & (mask - 1):
            best, pos = self.linf(mask)
            self.memo[key] = (best, ("leaf", pos))
            return best
        # The single-block family {mask} reproduces the previous iterate.
        best = self.value(mask, n - 1)
        choice = ("previous",)
        best_key = None
        for mins in _submasks(mask):
            if not mins & (mins - 1):
                continue
            lvl = self.level(mins)
            if lvl is None or lvl > 1:
                continue
            low = _lowbit(mins)
            rest = mask & ~mins & ~((1 << (low + 1)) - 1)
            blocks = self.intervals(mins, rest)
            total = sum((self.value(b, n - 1) for b in blocks), Fraction(0))
            if total < best:
                continue
            order = tuple(self.indices(b) for b in blocks)
            if total > best or (best_key is not None and order < best_key):
                best, best_key, choice = total, order, ("family", blocks)
        self.memo[key] = (best, choice)
        return best

    def certificate(self, mask, n):
        self.value(mask, n)
        _, choice = self.memo[(mask, n)]
        if choice[0] == "leaf":
            return self.leaf(choice[1])
        if choice[0] == "previous":
            return self.certificate(mask, n - 1)
        children = [self.certificate(b, n - 1) for b in choice[1]]
        return Weighted(1, Fraction(1), canonical_children(children))


def _require(law, kind):
    if not isinstance(law, kind):
        raise ConfigError(f"expected a {kind.__name__} law, got {type(law).__name__}")


def eval_iterate(x: FinVec, law: MixedTsirelson, m: int, max_support: int = DEFAULT_MAX_SUPPORT) -> NormResult:
    """||x||_{law,m} with a certificate of nesting depth at most m."""
    _require(law, MixedTsirelson)
    if m < 0:
        raise ValueError("iterate index must be nonnegative")
    if not x:
        return NormResult(Fraction(0), Zero(), m)
    session = _TsirelsonSession(x, law, max_support)
    value = session.value(session.full, m)
    return NormResult(value, session.certificate(session.full, m), m, stats=session.stats())


def eval_norm(x: FinVec, law: MixedTsirelson, max_support: int = DEFAULT_MAX_SUPPORT) -> NormResult:
    """The stabilized norm ||x||_law = ||x||_{law,|supp x|}.

    The iterates at |supp x| and |supp x| + 1 are compared before
    returning; `iterate` is the first m reaching the final value.
    """
    _require(law, MixedTsirelson)
    if not x:
        return NormResult(Fraction(0), Zero(), 0)
    session = _TsirelsonSession(x, law, max_support)
    top = session.k
    value = session.value(session.full, top)
    after = session.value(session.full, top + 1)
    if after != value:
        raise StabilizationFailure(f"iterates {top} and {top + 1} differ on {x}: {value} vs {after}")
    first = next(m for m in range(top + 1) if session.value(session.full, m) == value)
    return NormResult(value, session.certificate(session.full, first), first, stats=session.stats())


def _schreier_iterate(x: FinVec, n: int, max_support: int):
    value, chosen = schreier.schreier_norm_with_set(x, n, guard=max_support)
    if len(chosen) == 1:
        cert = Leaf(chosen[0], 1 if x[chosen[0]] > 0 else -1)
    else:
        cert = Weighted(n, Fraction(1), tuple(Leaf(j, 1 if x[j] > 0 else -1) for j in chosen))
    return value, cert


def iterate_values(x: FinVec, inner, upto: int, max_support: int = DEFAULT_MAX_SUPPORT):
    """[(value, certificate)] for iterates 1..upto of an iterate family."""
    if isinstance(inner, MixedTsirelson):
        session = _TsirelsonSession(x, inner, max_support)
        return [
            (session.value(session.full, m), session.certificate(session.full, m))
            for m in range(1, upto + 1)
        ], session.stats()
    if isinstance(inner, EdgingtonSquares):
        session = _EdgingtonSession(x, max_support)
        return [
            (session.value(session.full, n), session.certificate(session.full, n))
            for n in range(1, upto + 1)
        ], session.stats()
    if isinstance(inner, SchreierIterates):
        return [_schreier_iterate(x, n, max_support) for n in range(1, upto + 1)], {"support": len(x)}
    raise ConfigError(f"not an iterate family: {type(inner).__name__}")


def eval_sigma(x: FinVec, law: SigmaSum, max_support: int = DEFAULT_MAX_SUPPORT) -> NormResult:
    """sum_{m>=1} alpha_m ||x||_m, exactly.

    Iterates are constant from m* = |supp x| on, so the series is the
    finite sum below m* plus the exact alpha tail times the m*-th iterate.
    """
    _require(law, SigmaSum)
    if not x:
        return NormResult(Fraction(0), Zero(), 0)
    top = len(x)
    values, stats = iterate_values(x, law.inner, top + 1, max_support)
    if values[top][0] != values[top - 1][0]:
        raise StabilizationFailure(
            f"iterates {top} and {top + 1} differ on {x}: {values[top - 1][0]} vs {values[top][0]}"
        )
    terms = tuple(SigmaTerm(m, law.alpha(m), values[m - 1][1]) for m in range(1, top))
    tail = SigmaTerm(top, law.alpha.tail(top), values[top - 1][1])
    total = sum((t.alpha * values[t.m - 1][0] for t in terms), Fraction(0))
    total += tail.alpha * values[top - 1][0]
    return NormResult(total, Sigma(terms, tail), top, stats=stats)


def eval_edgington(x: FinVec, law: Edgington, max_support: int = DEFAULT_MAX_SUPPORT) -> NormResult:
    """||x||_{E_alpha}^2 = sum_n alpha_n ||x||_{E,n}^2, exactly."""
    _require(law, Edgington)
    inner = eval_sigma(x.square(), law.squared_sigma, max_support)
    cert = Zero() if isinstance(inner.certificate, Zero) else Square(inner.certificate)
    return NormResult(inner.value, cert, inner.iterate, squared=True, stats=inner.stats)


def eval_two_convex(x: FinVec, law: TwoConvex, max_support: int = DEFAULT_MAX_SUPPORT) -> NormResult:
    """||x||_(2)^2 = ||x^2||_inner, exactly."""
    _require(law, TwoConvex)
    inner = evaluate(x.square(), law.inner, max_support=max_support)
    cert = Zero() if isinstance(inner.certificate, Zero) else Square(inner.certificate)
    return NormResult(inner.value, cert, inner.iterate, squared=True, stats=inner.stats)


def evaluate(x: FinVec, law, m: int | None = None, max_support: int = DEFAULT_MAX_SUPPORT) -> NormResult:
    """Dispatch on the law; m selects an iterate and is only meaningful for MixedTsirelson."""
    if m is not None:
        if not isinstance(law, MixedTsirelson):
            raise ConfigError("an iterate index applies to mixed Tsirelson laws only")
        return eval_iterate(x, law, m, max_support)
    if isinstance(law, MixedTsirelson):
        return eval_norm(x, law, max_support)
    if isinstance(law, SigmaSum):
        return eval_sigma(x, law, max_support)
    if isinstance(law, Edgington):
        return eval_edgington(x, law, max_support)
    if isinstance(law, TwoConvex):
        return eval_two_convex(x, law, max_support)
    raise ConfigError(f"cannot evaluate law {type(law).__name__}")
