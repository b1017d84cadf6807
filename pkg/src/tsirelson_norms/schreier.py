"""Schreier families S_n and the Schreier norms |x|_n.

Sets are plain tuples of strictly increasing positive integers. Emptiness
is allowed anywhere a set may appear, so that S_{n+1} consists of unions
F_1 < ... < F_j of members of S_n with j <= min F_1. Under this reading
every S_n is hereditary, spreading and S_n is contained in S_{n+1}.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import GuardExceeded
from .vectors import FinVec

DEFAULT_GUARD = 20


def index_set(elements: Iterable[int]) -> tuple:
    """Normalize to a sorted tuple, rejecting duplicates and non-positive entries."""
    out = tuple(sorted(elements))
    for a, b in zip(out, out[1:]):
        if a == b:
            raise ValueError(f"duplicate element {a}")
    if out and out[0] < 1:
        raise ValueError("indices are positive integers")
    return out


@lru_cache(maxsize=None)
def _member_greedy(F: tuple, n: int) -> bool:
    if len(F) <= 1:
        return True
    if n == 0:
        return False
    # Strip the longest S_{n-1} prefix repeatedly; optimal because S_{n-1}
    # is hereditary, so the greedy cut always stays ahead.
    blocks = 0
    i = 0
    while i < len(F):
        j = i + 1
        while j < len(F) and _member_greedy(F[i : j + 1], n - 1):
            j += 1
        blocks += 1
        if blocks > F[0]:
            return False
        i = j
    return True


def is_schreier_member(F: Sequence[int], n: int) -> bool:
    """Whether F belongs to S_n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _member_greedy(index_set(F), n)


@lru_cache(maxsize=None)
def _member_exhaustive(F: tuple, n: int) -> bool:
    if not F:
        return True
    if n == 0:
        return len(F) == 1
    limit = F[0]

    def split(start, used):
        if start == len(F):
            return True
        if used == limit:
            return False
        return any(
            _member_exhaustive(F[start:end], n - 1) and split(end, used + 1)
            for end in range(start + 1, len(F) + 1)
        )

    return split(0, 0)


def is_schreier_member_exhaustive(F: Sequence[int], n: int) -> bool:
    """Membership by trying every ordered split; the oracle for the greedy test."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _member_exhaustive(index_set(F), n)


def schreier_level(F: Sequence[int]):
    """Least n with F in S_n, or None if F lies in no S_n.

    A set containing 1 is in some S_n only if it is {1}. Any set with
    minimum >= 2 and k elements is in S_{k-1}, which bounds the search.
    """
    F = index_set(F)
    if len(F) <= 1:
        return 0
    if F[0] == 1:
        return None
    for n in range(1, len(F)):
        if _member_greedy(F, n):
            return n
    raise AssertionError(f"{F} not in S_{len(F) - 1}")


def is_successive(blocks: Sequence[Sequence[int]]) -> bool:
    return all(max(a) < min(b) for a, b in zip(blocks, blocks[1:]))


def is_disjoint(blocks: Sequence[Sequence[int]]) -> bool:
    seen = set()
    for block in blocks:
        for j in block:
            if j in seen:
                return False
            seen.add(j)
    return True


def minima(blocks: Sequence[Sequence[int]]) -> tuple:
    return tuple(sorted(min(b) for b in blocks))


def _check_blocks(blocks):
    for b in blocks:
        if not b:
            raise ValueError("family blocks must be nonempty")


def is_admissible(blocks: Sequence[Sequence[int]], n: int) -> bool:
    """Successive blocks E_1 < E_2 < ... whose minima form a member of S_n."""
    _check_blocks(blocks)
    return is_successive(blocks) and is_schreier_member(minima(blocks), n)


def is_allowable(blocks: Sequence[Sequence[int]], n: int) -> bool:
    """Pairwise disjoint (possibly interleaved) blocks with minima in S_n."""
    _check_blocks(blocks)
    return is_disjoint(blocks) and is_schreier_member(minima(blocks), n)


def _members_within(window: tuple, n: int):
    # Depth-first over increasing sequences; a non-member has no member
    # supersets, but a later element may still extend the current set.
    out = []

    def extend(current, start):
        out.append(current)
        for i in range(start, len(window)):
            candidate = current + (window[i],)
            if _member_greedy(candidate, n):
                extend(candidate, i + 1)

    extend((), 0)
    return out


def enumerate_schreier_subsets(window: Sequence[int], n: int, guard: int = DEFAULT_GUARD) -> list:
    """All maximal members of S_n contained in window, in lexicographic order."""
    window = index_set(window)
    if len(window) > guard:
        raise GuardExceeded("Schreier enumeration window", len(window), guard)
    if not window:
        return []
    members = _members_within(window, n)
    maximal = []
    for S in members:
        if not S:
            continue
        present = set(S)
        if any(
            _member_greedy(tuple(sorted(present | {w})), n)
            for w in window
            if w not in present
        ):
            continue
        maximal.append(S)
    maximal.sort()
    return maximal


def schreier_norm_with_set(x: FinVec, n: int, guard: int = DEFAULT_GUARD):
    """(|x|_n, S) with S the lexicographically least maximizing maximal set."""
    best = Fraction(0)
    best_set = ()
    for S in enumerate_schreier_subsets(x.support, n, guard):
        value = sum((abs(x[j]) for j in S), Fraction(0))
        if value > best:
            best, best_set = value, S
    return best, best_set


def schreier_norm(x: FinVec, n: int, guard: int = DEFAULT_GUARD) -> Fraction:
    """|x|_n = sup over S in S_n of the sum of |x_j| over j in S."""
    return schreier_norm_with_set(x, n, guard)[0]
