"""Brute-force norm evaluation over the norming sets K^m.

K^0 = {+-e_j} and K^{i+1} = K^i together with every theta_n (f_1 + ... + f_r)
where f_j are in K^i with pairwise disjoint supports obeying the level-n
rule. Only supports and values at x matter when composing, so K^i is kept
as a table: exact support -> largest f(x) over f in K^i with that support.
Every family of disjoint supports is tried (blocks need not cover
anything, single-block families included), and Schreier membership uses
the exhaustive split search rather than the greedy one.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import ConfigError, GuardExceeded
from .laws import ADMISSIBLE, MixedTsirelson
from .schreier import is_schreier_member_exhaustive, is_successive
from .vectors import FinVec

DEFAULT_ORACLE_GUARD = 8


@lru_cache(maxsize=None)
def _families(k: int) -> tuple:
    """All sets of pairwise disjoint nonempty subsets of range(k), as mask tuples."""
    out = []

    def place(i, blocks):
        if i == k:
            if blocks:
                out.append(tuple(blocks))
            return
        place(i + 1, blocks)
        for b in range(len(blocks)):
            blocks[b] |= 1 << i
            place(i + 1, blocks)
            blocks[b] &= ~(1 << i)
        blocks.append(1 << i)
        place(i + 1, blocks)
        blocks.pop()

    place(0, [])
    return tuple(out)


def _top_level(law: MixedTsirelson, k: int) -> int:
    # Membership of subsets of a k-point set is frozen from level k-1 on and
    # theta is nonincreasing past its explicit prefix, so no higher level can
    # contribute more.
    top = max(k, law.theta.prefix_length + 1)
    if law.level_cap is not None:
        top = min(top, law.level_cap)
    return top


def oracle_iterates(x: FinVec, law: MixedTsirelson, m: int, guard: int = DEFAULT_ORACLE_GUARD) -> list:
    """[sup_{f in K^i} |f(x)| for i = 0..m]."""
    if not isinstance(law, MixedTsirelson):
        raise ConfigError("the norming-set oracle handles mixed Tsirelson laws only")
    k = len(x)
    if k > guard:
        raise GuardExceeded("oracle support", k, guard)
    if k == 0:
        return [Fraction(0)] * (m + 1)
    points = x.support
    absval = [abs(a) for _, a in x.entries]

    def idx(mask):
        return tuple(points[i] for i in range(k) if mask >> i & 1)

    levels = range(1, _top_level(law, k) + 1)
    weighted = []
    for fam in _families(k):
        blocks = sorted((idx(b) for b in fam), key=lambda b: b[0])
        mins = tuple(b[0] for b in blocks)
        successive = is_successive(blocks)
        weight = None
        for n in levels:
            if law.rule(n) == ADMISSIBLE and not successive:
                continue
            if not is_schreier_member_exhaustive(mins, n):
                continue
            w = law.theta(n)
            if weight is None or w > weight:
                weight = w
        if weight is not None:
            union = 0
            for b in fam:
                union |= b
            weighted.append((fam, union, weight))

    table = {1 << i: absval[i] for i in range(k)}
    out = [max(table.values())]
    for _ in range(m):
        nxt = dict(table)
        for fam, union, weight in weighted:
            if any(b not in table for b in fam):
                continue
            val = weight * sum((table[b] for b in fam), Fraction(0))
            if val > nxt.get(union, Fraction(-1)):
                nxt[union] = val
        table = nxt
        out.append(max(table.values()))
    return out


def oracle_norm(x: FinVec, law: MixedTsirelson, m: int, guard: int = DEFAULT_ORACLE_GUARD) -> Fraction:
    """sup |f(x)| over f in K^m, by exhaustive enumeration."""
    if m < 0:
        raise ValueError("iterate index must be nonnegative")
    return oracle_iterates(x, law, m, guard)[-1]
