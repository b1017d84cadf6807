"""Seeded property battery behind `tsirelson-norms suite` and the acceptance tests.

Each battery draws from its own generator, seeded by (seed, battery name),
so results do not depend on the order or process batteries run in.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import schreier
from .certificate import single_tamperings, verify_certificate
from .engine import eval_iterate, eval_norm, evaluate
from .errors import InvalidCertificate, OverflowGuard
from .oracle import oracle_iterates
from .properties import (
    DisjointSample,
    check_asymptotic_l1_lower,
    check_two_convex_transfer,
    fast_growing,
    noniso_inequality_scan,
    repeated_average_squares,
)
from .spaces import (
    make_edgington,
    make_sigma_schreier,
    make_tsirelson,
    make_V,
    make_Vprime,
    make_W,
    make_Wprime,
    two_convexify,
)
from .vectors import FinVec
from .weights import WeightSeq, geometric_alpha, geometric_theta, harmonic_theta

ENTRIES = tuple(Fraction(s, d) for d in (1, 2, 3) for s in (1, -1))
THETA = geometric_theta(Fraction(3, 4))
ALPHA = geometric_alpha(Fraction(1, 2))
# Ratios 2/3 then 1/3, so the lower and upper ratio bounds differ.
ALPHA_MIXED = WeightSeq("explicit", "alpha", ratio=Fraction(1, 3), values=(Fraction(1, 2), Fraction(1, 3)))


def core_laws():
    return {
        "V": make_V(THETA).law,
        "W1": make_W(THETA, 1).law,
        "T": make_tsirelson(Fraction(1, 2)).law,
    }


@dataclass(frozen=True)
class Case:
    case_id: str
    passed: bool
    detail: str = ""


def random_vector(rng, max_support=6, window=10, low=1):
    k = rng.randint(1, max_support)
    support = rng.sample(range(low, low + window), k)
    return FinVec(tuple((j, rng.choice(ENTRIES)) for j in support))


def random_disjoint_sample(rng, max_total=6):
    """Disjoint vectors with n <= every support minimum, n the number of vectors."""
    n = rng.randint(1, 3)
    start = rng.randint(n, n + 3)
    size = rng.randint(n, max_total)
    points = rng.sample(range(start, start + 9), size)
    rng.shuffle(points)
    groups = [[p] for p in points[:n]]
    for p in points[n:]:
        rng.choice(groups).append(p)
    vectors = tuple(FinVec(tuple((j, rng.choice(ENTRIES)) for j in g)) for g in groups)
    return DisjointSample(vectors, n)


def corpus(rng, count, max_support=6):
    return [random_vector(rng, max_support) for _ in range(count)]


# --- batteries ---------------------------------------------------------------


def battery_schreier(rng, count):
    cases = []
    window = tuple(range(1, 11))
    subsets = [s for r in range(len(window) + 1) for s in itertools.combinations(window, r)]
    for n in range(4):
        bad = [s for s in subsets if schreier.is_schreier_member(s, n) != schreier.is_schreier_member_exhaustive(s, n)]
        cases.append(Case(f"greedy-vs-exhaustive-n{n}", not bad, f"first mismatch {bad[:1]}"))
        members = [s for s in subsets if schreier.is_schreier_member(s, n)]
        nested = all(schreier.is_schreier_member(s, n + 1) for s in members)
        cases.append(Case(f"nested-n{n}", nested))
        hereditary = all(
            schreier.is_schreier_member(s[:i] + s[i + 1 :], n) for s in members for i in range(len(s))
        )
        cases.append(Case(f"hereditary-n{n}", hereditary))
        for t in range(count):
            s = rng.choice(members)
            bumped, prev = [], 0
            for a in s:
                b = max(a + rng.randint(0, 3), prev + 1)
                bumped.append(b)
                prev = b
            cases.append(Case(f"spreading-n{n}-{t:04d}", schreier.is_schreier_member(bumped, n), f"{s} -> {bumped}"))
    return cases


def battery_oracle(rng, count):
    cases = []
    laws = core_laws()
    for i, x in enumerate(corpus(rng, count)):
        for name, law in laws.items():
            expected = oracle_iterates(x, law, 3)
            for m in (1, 2, 3):
                got = eval_iterate(x, law, m).value
                cases.append(Case(f"oracle-{i:04d}-{name}-m{m}", got == expected[m], f"x={x} engine={got} oracle={expected[m]}"))
    return cases


def battery_stabilization(rng, count):
    cases = []
    laws = core_laws()
    for i, x in enumerate(corpus(rng, count)):
        for name, law in laws.items():
            k = len(x)
            values = [eval_iterate(x, law, m).value for m in range(k + 2)]
            monotone = all(a <= b for a, b in zip(values, values[1:]))
            stable = values[k] == values[k + 1] == eval_norm(x, law).value
            cases.append(Case(f"stabilization-{i:04d}-{name}", monotone and stable, f"x={x} iterates={values}"))
    return cases


def certificate_laws():
    v = make_V(THETA)
    schreier_sum = make_sigma_schreier(ALPHA)
    return {
        "V": v.law,
        "W1": make_W(THETA, 1).law,
        "T": make_tsirelson(Fraction(1, 2)).law,
        "Vprime": make_Vprime(THETA, ALPHA).law,
        "Wprime": make_Wprime(THETA, ALPHA_MIXED, 1).law,
        "SigmaSchreier": schreier_sum.law,
        "Edgington": make_edgington(ALPHA).law,
        "2x:V": two_convexify(v).law,
        "2x:SigmaSchreier": two_convexify(schreier_sum).law,
    }


def tamper_detected(cert, x, law, claimed, m=None) -> bool:
    for variant in single_tamperings(cert):
        try:
            if verify_certificate(variant, x, law, m) == claimed:
                return False
        except InvalidCertificate:
            pass
    return True


def battery_certificates(rng, count):
    cases = []
    laws = certificate_laws()
    for i, x in enumerate(corpus(rng, count, max_support=5)):
        for name, law in laws.items():
            result = evaluate(x, law)
            try:
                sound = verify_certificate(result.certificate, x, law) == result.value
            except InvalidCertificate as exc:
                sound = False
                name += f" ({exc})"
            tamper = tamper_detected(result.certificate, x, law, result.value)
            cases.append(Case(f"certificate-{i:04d}-{name}", sound, f"x={x} value={result.value}"))
            cases.append(Case(f"tamper-{i:04d}-{name}", tamper, f"x={x}"))
        for name, law in core_laws().items():
            m = rng.randint(0, 3)
            result = eval_iterate(x, law, m)
            ok = verify_certificate(result.certificate, x, law, m) == result.value
            cases.append(Case(f"certificate-{i:04d}-{name}-m{m}", ok, f"x={x}"))
            cases.append(Case(f"tamper-{i:04d}-{name}-m{m}", tamper_detected(result.certificate, x, law, result.value, m)))
    return cases


def _dominating(rng, x):
    """A vector with |y_j| >= |x_j| everywhere, support within the same window."""
    coords = {j: abs(a) * rng.choice((1, 1, Fraction(3, 2), 2)) for j, a in x.entries}
    free = [j for j in range(1, 11) if j not in coords]
    if free and len(coords) < 6 and rng.random() < 0.5:
        coords[rng.choice(free)] = rng.choice(ENTRIES)
    return FinVec(tuple(coords.items()))


def battery_axioms(rng, count):
    cases = []
    laws = core_laws()
    for i in range(count):
        window = rng.sample(range(1, 11), 6)
        x = FinVec(tuple((j, rng.choice(ENTRIES)) for j in window if rng.random() < 0.6) or ((window[0], Fraction(1)),))
        y = FinVec(tuple((j, rng.choice(ENTRIES)) for j in window if rng.random() < 0.6))
        c = rng.choice((Fraction(-2), Fraction(1, 3), Fraction(-5, 7), Fraction(3)))
        flipped = x.map(lambda a: a * rng.choice((1, -1)))
        bigger = _dominating(rng, x)
        for name, law in laws.items():
            nx = eval_norm(x, law).value
            tag = f"{i:04d}-{name}"
            cases.append(Case(f"sandwich-{tag}", x.linf() <= nx <= x.l1(), f"x={x} value={nx}"))
            cases.append(Case(f"homogeneity-{tag}", eval_norm(x.scale(c), law).value == abs(c) * nx, f"x={x} c={c}"))
            cases.append(Case(f"unconditional-{tag}", eval_norm(flipped, law).value == nx, f"x={x} flipped={flipped}"))
            cases.append(Case(f"solid-{tag}", nx <= eval_norm(bigger, law).value, f"x={x} y={bigger}"))
            ny = eval_norm(y, law).value
            nxy = eval_norm(x + y, law).value
            cases.append(Case(f"triangle-{tag}", nxy <= nx + ny, f"x={x} y={y}"))
    return cases


def battery_l1_lower(rng, count):
    cases = []
    spaces = {
        "Vprime": make_Vprime(THETA, ALPHA),
        "Vprime-mixed": make_Vprime(THETA, ALPHA_MIXED),
        "Wprime": make_Wprime(THETA, ALPHA, 1),
    }
    for i in range(count):
        sample = random_disjoint_sample(rng)
        for name, space in spaces.items():
            report = check_asymptotic_l1_lower(space, sample)
            cases.append(Case(f"l1-lower-{i:04d}-{name}", report.holds, f"lhs={report.lhs} rhs={report.rhs}"))
    return cases


def battery_transfer(rng, count):
    cases = []
    spaces = {"V": make_V(THETA), "Vprime": make_Vprime(THETA, ALPHA)}
    for i in range(count):
        sample = random_disjoint_sample(rng)
        for name, space in spaces.items():
            report = check_two_convex_transfer(space, sample)
            cases.append(Case(f"transfer-lower-{i:04d}-{name}", report.lower_holds, str(report)))
            cases.append(Case(f"transfer-upper-{i:04d}-{name}", report.upper_holds, str(report)))
    return cases


def battery_edgington(rng, count):
    cases = []
    for alpha_name, alpha in (("half", ALPHA), ("mixed", ALPHA_MIXED)):
        edg = make_edgington(alpha).law
        convex = two_convexify(make_sigma_schreier(alpha)).law
        for i, x in enumerate(corpus(rng, count)):
            e = evaluate(x, edg).value
            c = evaluate(x, convex).value
            cases.append(Case(f"edgington-identification-{i:04d}-{alpha_name}", e == c, f"x={x} edgington={e} convexified={c}"))
            bound = e <= x.l2_squared() and (len(x) != 1 or e == x.l2_squared())
            cases.append(Case(f"edgington-l2-bound-{i:04d}-{alpha_name}", bound, f"x={x} value={e}"))
    return cases


def battery_averages(rng, count):
    cases = []
    delta = Fraction(1, 2)
    eps = Fraction(1, 10)
    for n, starts in ((0, range(1, 11)), (1, range(2, 10)), (2, range(2, 3))):
        for start in starts:
            r = repeated_average_squares(n, start, delta)
            ok = sum(a for _, a in r.vector.entries) == 1 and r.t_norm <= delta**n + eps
            if n == 1:
                ok = ok and r.t_norm == max(Fraction(1, start), delta)
            cases.append(Case(f"repeated-average-n{n}-start{start}", ok, f"a={r.vector} T-norm={r.t_norm}"))
    return cases


def battery_noniso(rng, count):
    cases = []
    eps = Fraction(1, 100)
    scan = noniso_inequality_scan(harmonic_theta(), Fraction(1, 2), 1, 1, eps, 10)
    cases.append(Case("noniso-harmonic", scan.first_failure is not None, f"first failure {scan.first_failure}"))
    scan = noniso_inequality_scan(geometric_theta(Fraction(1, 2)), Fraction(1, 2), 1, 1, eps, 30)
    cases.append(Case("noniso-geometric", scan.first_failure is None, f"first failure {scan.first_failure}"))
    for t in range(count):
        delta = Fraction(rng.randint(1, 8), 10)
        # theta_n <= delta^n makes sqrt(theta_n) <= K (delta^n + eps)^(1/2) outright.
        ratio = delta * Fraction(rng.randint(1, 10), 10)
        C = Fraction(rng.randint(10, 20), 10)
        K = Fraction(rng.randint(10, 20), 10)
        scan = noniso_inequality_scan(geometric_theta(ratio), delta, C, K, eps, 30)
        cases.append(Case(f"noniso-dominated-{t:04d}", scan.first_failure is None, f"delta={delta} ratio={ratio} C={C} K={K}"))
    return cases


def battery_fast_growing(rng, count):
    cases = [
        Case("g0", all(fast_growing(0, n) == n + 1 for n in range(101))),
        Case("g1(3)", fast_growing(1, 3) == 6),
        Case("g2(2)", fast_growing(2, 2) == 8),
    ]
    try:
        fast_growing(3, 3)
        cases.append(Case("g3(3)-overflow", False, "no overflow raised"))
    except OverflowGuard as exc:
        cases.append(Case("g3(3)-overflow", True, str(exc)))
    return cases


BATTERIES = {
    "schreier": battery_schreier,
    "oracle": battery_oracle,
    "stabilization": battery_stabilization,
    "certificates": battery_certificates,
    "axioms": battery_axioms,
    "l1_lower": battery_l1_lower,
    "transfer": battery_transfer,
    "edgington": battery_edgington,
    "averages": battery_averages,
    "noniso": battery_noniso,
    "fast_growing": battery_fast_growing,
}


def run_battery(name, seed, count):
    rng = random.Random(f"{seed}:{name}")
    return name, BATTERIES[name](rng, count)


def run_suite(seed: int, count: int, names=None, jobs: int = 1) -> dict:
    """Run the batteries and assemble a deterministic summary (no timing inside)."""
    names = sorted(names or BATTERIES)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_battery, names, [seed] * len(names), [count] * len(names)))
    else:
        results = [run_battery(name, seed, count) for name in names]
    summary = {}
    for name, cases in sorted(results):
        cases = sorted(cases, key=lambda c: c.case_id)
        failed = [c for c in cases if not c.passed]
        summary[name] = {
            "passed": len(cases) - len(failed),
            "failed": len(failed),
            "failures": [{"case": c.case_id, "detail": c.detail} for c in failed],
        }
    return summary
