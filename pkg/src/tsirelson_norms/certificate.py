"""Norming-tree certificates and their independent verifier.

A certificate is a functional from the norming sets K^m:

    Leaf(j, s)                 s * e_j^*
    Weighted(n, w, children)   w * (f_1 + ... + f_r), supports obeying the
                               level-n rule of the law
    Sigma(terms, tail)         sum of alpha_m * f_m, plus the tail mass
                               times a functional valid at every later iterate
    Square(child)              child is applied to x^2
    Zero()                     the zero functional, for x = 0

Evaluating a structurally valid certificate against x gives a lower bound
for the norm; the engine's certificates attain it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import schreier
from .errors import ConfigError, InvalidCertificate
from .laws import (
    ADMISSIBLE,
    Edgington,
    EdgingtonSquares,
    MixedTsirelson,
    SchreierIterates,
    SigmaSum,
    TwoConvex,
)
from .vectors import FinVec, format_rational, parse_rational


@dataclass(frozen=True)
class Leaf:
    index: int
    sign: int = 1


@dataclass(frozen=True)
class Weighted:
    level: int
    weight: Fraction
    children: tuple


@dataclass(frozen=True)
class SigmaTerm:
    m: int
    alpha: Fraction
    cert: object


@dataclass(frozen=True)
class Sigma:
    terms: tuple
    tail: SigmaTerm


@dataclass(frozen=True)
class Square:
    child: object


@dataclass(frozen=True)
class Zero:
    pass


def support(cert) -> frozenset:
    if isinstance(cert, Leaf):
        return frozenset((cert.index,))
    if isinstance(cert, Weighted):
        out = frozenset()
        for c in cert.children:
            out |= support(c)
        return out
    if isinstance(cert, Square):
        return support(cert.child)
    if isinstance(cert, Sigma):
        out = support(cert.tail.cert)
        for t in cert.terms:
            out |= support(t.cert)
        return out
    return frozenset()


def depth(cert) -> int:
    if isinstance(cert, Weighted):
        return 1 + max(depth(c) for c in cert.children)
    return 0


def canonical_children(children) -> tuple:
    return tuple(sorted(children, key=lambda c: min(support(c))))


# --- serialization ---------------------------------------------------------


def to_dict(cert) -> dict:
    if isinstance(cert, Leaf):
        return {"kind": "leaf", "index": cert.index, "sign": cert.sign}
    if isinstance(cert, Weighted):
        return {
            "kind": "weighted",
            "level": cert.level,
            "weight": format_rational(cert.weight),
            "children": [to_dict(c) for c in cert.children],
        }
    if isinstance(cert, Sigma):
        return {
            "kind": "sigma",
            "terms": [_term_dict(t) for t in cert.terms],
            "tail": _term_dict(cert.tail),
        }
    if isinstance(cert, Square):
        return {"kind": "square", "child": to_dict(cert.child)}
    if isinstance(cert, Zero):
        return {"kind": "zero"}
    raise TypeError(f"not a certificate: {cert!r}")


def _term_dict(t: SigmaTerm) -> dict:
    return {"m": t.m, "alpha": format_rational(t.alpha), "cert": to_dict(t.cert)}


_FIELDS = {
    "leaf": {"kind", "index", "sign"},
    "weighted": {"kind", "level", "weight", "children"},
    "sigma": {"kind", "terms", "tail"},
    "square": {"kind", "child"},
    "zero": {"kind"},
}


def from_dict(data) -> object:
    if not isinstance(data, dict) or data.get("kind") not in _FIELDS:
        raise ConfigError(f"not a certificate node: {data!r}")
    kind = data["kind"]
    if set(data) != _FIELDS[kind]:
        raise ConfigError(f"{kind} node has fields {sorted(data)}, expected {sorted(_FIELDS[kind])}")
    if kind == "leaf":
        return Leaf(_int(data["index"]), _int(data["sign"]))
    if kind == "weighted":
        return Weighted(
            _int(data["level"]),
            parse_rational(data["weight"]),
            tuple(from_dict(c) for c in data["children"]),
        )
    if kind == "sigma":
        return Sigma(tuple(_term(t) for t in data["terms"]), _term(data["tail"]))
    if kind == "square":
        return Square(from_dict(data["child"]))
    return Zero()


def _term(data) -> SigmaTerm:
    if not isinstance(data, dict) or set(data) != {"m", "alpha", "cert"}:
        raise ConfigError(f"malformed sigma term {data!r}")
    return SigmaTerm(_int(data["m"]), parse_rational(data["alpha"]), from_dict(data["cert"]))


def _int(v) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"expected an integer, got {v!r}")
    return v


# --- verification ----------------------------------------------------------


def verify_certificate(cert, x: FinVec, law, m: int | None = None) -> Fraction:
    """Check every structural invariant of cert for law and return f(x) exactly.

    For iterate laws, m bounds the nesting depth (the iterate certified);
    None means the stabilized norm. Raises InvalidCertificate naming the
    offending node path.
    """
    return _verify(cert, x, law, m, ())


def _verify(cert, x, law, m, path):
    if isinstance(cert, Zero):
        return Fraction(0)
    if isinstance(law, TwoConvex):
        if not isinstance(cert, Square):
            raise InvalidCertificate(path, "2-convex law expects a square node")
        return _verify(cert.child, x.square(), law.inner, m, path + ("square",))
    if isinstance(law, Edgington):
        if not isinstance(cert, Square):
            raise InvalidCertificate(path, "Edgington law expects a square node")
        return _verify(cert.child, x.square(), law.squared_sigma, m, path + ("square",))
    if isinstance(law, SigmaSum):
        return _verify_sigma(cert, x, law, path)
    if isinstance(law, (MixedTsirelson, SchreierIterates, EdgingtonSquares)):
        return _verify_tree(cert, x, law, m, path)
    raise InvalidCertificate(path, f"unsupported law {type(law).__name__}")


def _verify_sigma(cert, x, law: SigmaSum, path):
    if not isinstance(cert, Sigma):
        raise InvalidCertificate(path, "sigma law expects a sigma node")
    total = Fraction(0)
    for i, term in enumerate(cert.terms):
        here = path + (f"term[{i}]",)
        if term.m != i + 1:
            raise InvalidCertificate(here, f"terms must cover m = 1, 2, ... in order; got m={term.m}")
        if term.alpha != law.alpha(term.m):
            raise InvalidCertificate(here, f"alpha_{term.m} is {law.alpha(term.m)}, certificate says {term.alpha}")
        total += term.alpha * _verify_tree(term.cert, x, law.inner, term.m, here)
    tail = cert.tail
    here = path + ("tail",)
    if tail.m != len(cert.terms) + 1:
        raise InvalidCertificate(here, f"tail must start at m={len(cert.terms) + 1}, got {tail.m}")
    expected = law.alpha.tail(tail.m)
    if tail.alpha != expected:
        raise InvalidCertificate(here, f"tail mass from m={tail.m} is {expected}, certificate says {tail.alpha}")
    return total + tail.alpha * _verify_tree(tail.cert, x, law.inner, tail.m, here)


def _verify_tree(cert, x, law, m, path):
    if isinstance(cert, Zero):
        return Fraction(0)
    if isinstance(cert, Leaf):
        if cert.sign not in (1, -1):
            raise InvalidCertificate(path, f"leaf sign must be +1 or -1, got {cert.sign}")
        if cert.index < 1:
            raise InvalidCertificate(path, f"leaf index must be positive, got {cert.index}")
        return cert.sign * x[cert.index]
    if not isinstance(cert, Weighted):
        raise InvalidCertificate(path, f"unexpected {type(cert).__name__} node inside an iterate tree")
    if not cert.children:
        raise InvalidCertificate(path, "weighted node without children")
    if m is not None and m < 1:
        raise InvalidCertificate(path, "nesting deeper than the certified iterate")

    supports = []
    for i, child in enumerate(cert.children):
        s = support(child)
        if not s:
            raise InvalidCertificate(path + (i,), "child with empty support")
        supports.append(s)
    blocks = [tuple(sorted(s)) for s in supports]
    if not schreier.is_disjoint(blocks):
        raise InvalidCertificate(path, "child supports overlap")
    ordered = sorted(blocks, key=min)
    mins = schreier.minima(blocks)

    if isinstance(law, MixedTsirelson):
        if not law.has_level(cert.level):
            raise InvalidCertificate(path, f"level {cert.level} not used by this law")
        if cert.weight != law.theta(cert.level):
            raise InvalidCertificate(path, f"weight at level {cert.level} is {law.theta(cert.level)}, certificate says {cert.weight}")
        if law.rule(cert.level) == ADMISSIBLE and not schreier.is_successive(ordered):
            raise InvalidCertificate(path, f"level {cert.level} needs successive supports")
        if not schreier.is_schreier_member(mins, cert.level):
            raise InvalidCertificate(path, f"support minima {mins} not in S_{cert.level}")
    elif isinstance(law, SchreierIterates):
        if cert.weight != 1:
            raise InvalidCertificate(path, "Schreier functionals carry weight 1")
        if m is not None and cert.level > m:
            raise InvalidCertificate(path, f"level {cert.level} exceeds iterate {m}")
        if not all(isinstance(c, Leaf) for c in cert.children):
            raise InvalidCertificate(path, "Schreier functionals are flat")
        if not schreier.is_schreier_member(mins, cert.level):
            raise InvalidCertificate(path, f"support {mins} not in S_{cert.level}")
    elif isinstance(law, EdgingtonSquares):
        if cert.level != 1 or cert.weight != 1:
            raise InvalidCertificate(path, "Edgington nodes are level 1 with weight 1")
        if not schreier.is_successive(ordered):
            raise InvalidCertificate(path, "Edgington nodes need successive supports")
        if not schreier.is_schreier_member(mins, 1):
            raise InvalidCertificate(path, f"support minima {mins} not in S_1")
    else:
        raise InvalidCertificate(path, f"unsupported iterate law {type(law).__name__}")

    child_m = None if m is None else m - 1
    if isinstance(law, SchreierIterates):
        child_m = None
    total = sum(
        (_verify_tree(c, x, law, child_m, path + (i,)) for i, c in enumerate(cert.children)),
        Fraction(0),
    )
    return cert.weight * total


def single_tamperings(cert):
    """Yield every certificate differing from cert in exactly one weight or sign."""
    bump = Fraction(1, 97)
    if isinstance(cert, Leaf):
        yield Leaf(cert.index, -cert.sign)
    elif isinstance(cert, Weighted):
        yield Weighted(cert.level, cert.weight + bump, cert.children)
        for i, child in enumerate(cert.children):
            for variant in single_tamperings(child):
                kids = cert.children[:i] + (variant,) + cert.children[i + 1 :]
                yield Weighted(cert.level, cert.weight, kids)
    elif isinstance(cert, Square):
        for variant in single_tamperings(cert.child):
            yield Square(variant)
    elif isinstance(cert, Sigma):
        terms = list(cert.terms) + [cert.tail]
        for i, t in enumerate(terms):
            changed = [SigmaTerm(t.m, t.alpha + bump, t.cert)]
            changed += [SigmaTerm(t.m, t.alpha, v) for v in single_tamperings(t.cert)]
            for new in changed:
                out = terms[:i] + [new] + terms[i + 1 :]
                yield Sigma(tuple(out[:-1]), out[-1])
