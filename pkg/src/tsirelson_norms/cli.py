"""Command-line front end.

Every command builds a report dict with exact rationals as "p/q" strings and
a separate display section of floats rounded to 12 significant digits. JSON
and CSV carry the same content; only `timing_seconds` varies between runs.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import certificate as certs
from . import schreier, spaces
from .engine import DEFAULT_MAX_SUPPORT, eval_iterate, evaluate, iterate_values
from .errors import ConfigError, GuardExceeded, InvalidCertificate, NormError, OverflowGuard
from .laws import MixedTsirelson, SigmaSum
from .oracle import DEFAULT_ORACLE_GUARD, oracle_iterates
from .properties import (
    c0_block_witness,
    compare_admissible_variant,
    find_l1_window,
    noniso_inequality_scan,
    normalize,
)
from .suite import BATTERIES, run_suite
from .vectors import FinVec, format_rational, parse_rational
from .weights import WeightSeq, geometric_theta, harmonic_theta

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class InputError(Exception):
    pass


def display(q) -> float:
    return float(f"{float(q):.12g}")


def exact(q) -> str:
    return format_rational(Fraction(q))


# --- input helpers -------------------------------------------------------------


def load_space(args) -> spaces.SpaceConfig:
    if not args.space:
        raise InputError("--space FILE is required")
    try:
        return spaces.load(args.space)
    except FileNotFoundError:
        raise InputError(f"space file not found: {args.space}") from None


def load_vector(args, required=True) -> FinVec | None:
    spec = args.vector
    if spec is None:
        if required:
            raise InputError("--vector SPEC is required")
        return None
    path = Path(spec)
    if ":" not in spec and path.is_file():
        spec = path.read_text().strip()
    return FinVec.parse(spec)


def parse_index_set(text: str) -> tuple:
    try:
        return tuple(sorted(int(t) for t in text.split(",") if t.strip()))
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def parse_theta(text: str) -> WeightSeq:
    """'harmonic' or 'geometric:r' or 'geometric:r:scale'."""
    parts = text.split(":")
    if parts == ["harmonic"]:
        return harmonic_theta()
    if parts[0] == "geometric" and len(parts) in (2, 3):
        scale = parse_rational(parts[2]) if len(parts) == 3 else 1
        return geometric_theta(parse_rational(parts[1]), scale)
    raise InputError(f"theta must be 'harmonic' or 'geometric:r[:scale]', got {text!r}")


def theta_from(args) -> WeightSeq:
    if getattr(args, "theta", None):
        return parse_theta(args.theta)
    if args.space:
        theta = load_space(args).param("theta")
        if theta is not None:
            return theta
        raise InputError(f"space {args.space} has no theta parameter")
    raise InputError("give --theta or a --space with a theta parameter")


def space_info(cfg):
    return {"name": cfg.name, "kind": cfg.kind, "hash": cfg.config_hash}


# --- commands ----------------------------------------------------------------------
# Each returns (report fields, exit code).


def cmd_eval(args):
    cfg = load_space(args)
    x = load_vector(args)
    result = evaluate(x, cfg.law, args.m, args.max_support)
    out = {
        "value": exact(result.value),
        "iterate": result.iterate,
        "squared": result.squared,
        "support": len(x),
    }
    shown = {"value": display(result.value)}
    if result.squared:
        shown["norm"] = float(f"{math.sqrt(result.value):.12g}")
    path = None
    if args.emit_certificate:
        path = write_certificate(args, cfg, x, result)
    return {"space": space_info(cfg), "inputs": {"vector": x.to_spec(), "m": args.m},
            "outputs": out, "display": shown, "certificate_path": path}, EXIT_OK


def write_certificate(args, cfg, x, result) -> str:
    target = Path(args.emit_certificate)
    if args.out and not target.is_absolute():
        target = Path(args.out) / target
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "space": cfg.to_dict(),
        "vector": x.to_spec(),
        "m": args.m,
        "value": exact(result.value),
        "certificate": certs.to_dict(result.certificate),
    }
    target.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return str(target)


def cmd_iterate(args):
    cfg = load_space(args)
    x = load_vector(args)
    law = cfg.law
    upto = args.m if args.m is not None else len(x) + 1
    if isinstance(law, MixedTsirelson):
        values = [eval_iterate(x, law, m, args.max_support).value for m in range(upto + 1)]
        first = 0
    elif isinstance(law, SigmaSum):
        values = [v for v, _ in iterate_values(x, law.inner, upto, args.max_support)[0]] if x else [Fraction(0)] * upto
        first = 1
    else:
        raise InputError(f"space {cfg.name} has no iterates; use eval")
    out = {"iterates": [{"m": first + i, "value": exact(v)} for i, v in enumerate(values)]}
    shown = {"iterates": [display(v) for v in values]}
    return {"space": space_info(cfg), "inputs": {"vector": x.to_spec(), "upto": upto},
            "outputs": out, "display": shown}, EXIT_OK


def cmd_certify(args):
    if not args.certificate:
        raise InputError("--certificate FILE is required")
    try:
        data = json.loads(Path(args.certificate).read_text())
    except FileNotFoundError:
        raise InputError(f"certificate file not found: {args.certificate}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.certificate}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or not {"space", "vector", "value", "certificate"} <= set(data):
        raise InputError("certificate file needs fields space, vector, value, certificate")
    cfg = load_space(args) if args.space else spaces.from_dict(data["space"])
    x = load_vector(args, required=False)
    if x is None:
        x = FinVec.parse(data["vector"])
    m = args.m if args.m is not None else data.get("m")
    claimed = parse_rational(data["value"])
    out = {"claimed": exact(claimed)}
    try:
        cert = certs.from_dict(data["certificate"])
        recomputed = certs.verify_certificate(cert, x, cfg.law, m)
    except InvalidCertificate as exc:
        out.update(valid=False, matches=False, reason=str(exc))
        code = EXIT_FAIL
    else:
        matches = recomputed == claimed
        out.update(valid=True, matches=matches, recomputed=exact(recomputed))
        if not matches:
            out["reason"] = f"value mismatch: certificate evaluates to {exact(recomputed)}, file claims {exact(claimed)}"
        code = EXIT_OK if matches else EXIT_FAIL
    return {"space": space_info(cfg), "inputs": {"vector": x.to_spec(), "m": m, "certificate": args.certificate},
            "outputs": out, "display": {"claimed": display(claimed)}}, code


def cmd_oracle(args):
    cfg = load_space(args)
    x = load_vector(args)
    if not isinstance(cfg.law, MixedTsirelson):
        raise InputError("the oracle handles T, V and W spaces only")
    m = args.m if args.m is not None else len(x)
    values = oracle_iterates(x, cfg.law, m, args.oracle_max)
    engine = eval_iterate(x, cfg.law, m, args.max_support).value
    agree = engine == values[m]
    out = {"oracle": exact(values[m]), "engine": exact(engine), "agree": agree}
    return {"space": space_info(cfg), "inputs": {"vector": x.to_spec(), "m": m},
            "outputs": out, "display": {"oracle": display(values[m])}}, EXIT_OK if agree else EXIT_FAIL


def cmd_schreier(args):
    n = args.n
    if args.action == "member":
        s = parse_index_set(args.set or "")
        out = {"member": schreier.is_schreier_member(s, n), "least_level": schreier.schreier_level(s)}
        inputs = {"set": list(s), "n": n}
        shown = {}
    elif args.action == "enumerate":
        window = parse_index_set(args.window or args.set or "")
        found = schreier.enumerate_schreier_subsets(window, n, args.max_support)
        out = {"maximal_members": [list(s) for s in found], "count": len(found)}
        inputs = {"window": list(window), "n": n}
        shown = {}
    else:
        x = load_vector(args)
        value, chosen = schreier.schreier_norm_with_set(x, n, args.max_support)
        out = {"value": exact(value), "set": list(chosen)}
        inputs = {"vector": x.to_spec(), "n": n}
        shown = {"value": display(value)}
    return {"inputs": inputs, "outputs": out, "display": shown}, EXIT_OK


def cmd_witness_l1(args):
    cfg = load_space(args)
    x = load_vector(args)
    v = normalize(x, cfg, args.max_support)
    window = find_l1_window(v, cfg, args.threshold, args.floor, args.max_support)
    if window is None:
        out = {"found": False, "normalized": v.to_spec()}
        shown = {}
    else:
        out = {"found": True, "normalized": v.to_spec(), "p": window.p, "q": window.q, "mass": exact(window.mass)}
        shown = {"mass": display(window.mass)}
    inputs = {"vector": x.to_spec(), "threshold": exact(args.threshold), "floor": args.floor}
    return {"space": space_info(cfg), "inputs": inputs, "outputs": out, "display": shown}, EXIT_OK


def cmd_witness_c0(args):
    theta = theta_from(args)
    m = args.m if args.m is not None else 1
    w = c0_block_witness(theta, m, args.n, args.max_block_length, args.max_support)
    out = {
        "blocks": [y.to_spec() for y in w.ys],
        "block_length": w.block_length,
        "low_value": exact(w.low_value),
        "high_value": exact(w.high_value),
        "bound": exact(w.bound),
    }
    shown = {k: display(getattr(w, k)) for k in ("low_value", "high_value", "bound")}
    return {"inputs": {"theta": theta.to_dict(), "m": m, "n": args.n}, "outputs": out, "display": shown}, EXIT_OK


def cmd_compare(args):
    theta = theta_from(args)
    x = load_vector(args)
    v, a, ratio = compare_admissible_variant(x, theta, args.max_support)
    out = {"allowable": exact(v), "admissible": exact(a), "ratio": exact(ratio)}
    shown = {"allowable": display(v), "admissible": display(a), "ratio": display(ratio)}
    return {"inputs": {"theta": theta.to_dict(), "vector": x.to_spec()}, "outputs": out, "display": shown}, EXIT_OK


def cmd_experiment_noniso(args):
    theta = theta_from(args)
    scan = noniso_inequality_scan(theta, args.delta, args.C, args.K, args.eps, args.n_max)
    rows = [
        {"n": r.n, "theta": exact(r.theta), "rhs_lo": exact(r.rhs_lo), "rhs_hi": exact(r.rhs_hi),
         "holds": r.holds, "method": r.method}
        for r in scan.rows
    ]
    inputs = {"theta": theta.to_dict(), "delta": exact(args.delta), "C": exact(args.C), "K": exact(args.K),
              "eps": exact(args.eps), "n_max": args.n_max}
    shown = {"rows": [{"theta": display(r.theta), "rhs_lo": display(r.rhs_lo)} for r in scan.rows]}
    return {"inputs": inputs, "outputs": {"first_failure": scan.first_failure, "rows": rows},
            "display": shown}, EXIT_OK


def cmd_suite(args):
    names = args.battery or None
    summary = run_suite(args.seed, args.count, names, args.jobs)
    passed = sum(b["passed"] for b in summary.values())
    failed = sum(b["failed"] for b in summary.values())
    out = {"batteries": summary, "passed": passed, "failed": failed}
    inputs = {"seed": args.seed, "count": args.count, "batteries": sorted(names or BATTERIES)}
    return {"inputs": inputs, "outputs": out, "display": {}}, EXIT_OK if failed == 0 else EXIT_FAIL


COMMANDS = {
    "eval": cmd_eval,
    "iterate": cmd_iterate,
    "certify": cmd_certify,
    "oracle": cmd_oracle,
    "schreier": cmd_schreier,
    "witness-l1": cmd_witness_l1,
    "witness-c0": cmd_witness_c0,
    "compare": cmd_compare,
    "experiment-noniso": cmd_experiment_noniso,
    "suite": cmd_suite,
}


# --- reports -------------------------------------------------------------------


def flatten(value, prefix=""):
    if isinstance(value, dict):
        for key in sorted(value):
            yield from flatten(value[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list):
        if not value:
            yield prefix, "[]"
        for i, item in enumerate(value):
            yield from flatten(item, f"{prefix}[{i}]")
    elif value is None:
        yield prefix, ""
    elif isinstance(value, bool):
        yield prefix, "true" if value else "false"
    else:
        yield prefix, value


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in flatten(report):
        writer.writerow([key, repr(value) if isinstance(value, float) else value])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", metavar="FILE", help="space config (JSON)")
    common.add_argument("--vector", metavar="SPEC", help='"j:p/q,..." or a file holding that text')
    common.add_argument("--m", type=int, help="iterate index")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.add_argument("--max-support", type=int, default=DEFAULT_MAX_SUPPORT)
    common.add_argument("--oracle-max", type=int, default=DEFAULT_ORACLE_GUARD)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", metavar="DIR", help="write report (and certificate) files here")

    parser = argparse.ArgumentParser(prog="tsirelson-norms", description="Exact norms in Tsirelson-type spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a norm (or one iterate with --m)")
    p.add_argument("--emit-certificate", metavar="PATH")
    sub.add_parser("iterate", parents=[common], help="list the iterates up to --m")
    p = sub.add_parser("certify", parents=[common], help="verify a certificate file")
    p.add_argument("--certificate", metavar="FILE")
    sub.add_parser("oracle", parents=[common], help="brute-force iterate over the norming sets")
    p = sub.add_parser("schreier", parents=[common], help="Schreier family queries")
    p.add_argument("action", choices=("member", "enumerate", "norm"))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--set", help="comma-separated indices")
    p.add_argument("--window", help="comma-separated indices")
    p = sub.add_parser("witness-l1", parents=[common], help="l_1 window of a normalized vector")
    p.add_argument("--threshold", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--floor", type=int, default=1)
    p = sub.add_parser("witness-c0", parents=[common], help="c_0 block witness in V")
    p.add_argument("--theta")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--max-block-length", type=int, default=3)
    p = sub.add_parser("compare", parents=[common], help="V against its admissible-only variant")
    p.add_argument("--theta")
    p = sub.add_parser("experiment-noniso", parents=[common], help="scan the non-isomorphism inequality")
    p.add_argument("--theta")
    p.add_argument("--delta", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--C", type=parse_rational, default=Fraction(1))
    p.add_argument("--K", type=parse_rational, default=Fraction(1))
    p.add_argument("--eps", type=parse_rational, default=Fraction(1, 100))
    p.add_argument("--n-max", type=int, default=30)
    p = sub.add_parser("suite", parents=[common], help="run the seeded property battery")
    p.add_argument("--count", type=int, default=20, help="samples per battery")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--battery", action="append", choices=sorted(BATTERIES))
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    fmt = args.format or "json"
    started = time.perf_counter()
    try:
        body, code = COMMANDS[args.command](args)
    except (GuardExceeded, OverflowGuard) as exc:
        print(f"guard exceeded: {exc}", file=stderr)
        return EXIT_GUARD
    except (InputError, ConfigError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except NormError as exc:
        print(f"failure: {exc}", file=stderr)
        return EXIT_FAIL

    report = {
        "command": argv,
        "space": None,
        "certificate_path": None,
        "guards": {"max_support": args.max_support, "oracle_max": args.oracle_max},
        **body,
        "timing_seconds": round(time.perf_counter() - started, 6),
    }
    text = render(report, fmt)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"report.{fmt}").write_text(text)
    stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
