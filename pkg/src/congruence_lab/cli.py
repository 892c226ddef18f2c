"""``congruence-lab`` command line.

Exit codes: 0 all checks pass, 1 a mathematical counterexample was found,
2 usage error.  The resolved configuration of every run is written to
stderr as a ``# config`` JSON line; stdout carries only the data.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import congruence as cg
from .exact import as_rational
from .geometry import pgt_statistics, theorem_5_4_report, translation_length
from .modular import Mu0Cache, default_cache_path, hyperbolic_classes, kind_of_trace
from .quaternion import INFINITY, QuaternionAlgebra, SearchExhausted, hilbert_symbol, is_division, relevant_places

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2

DEFAULT_MODULAR_HEIGHT = 10_000
DEFAULT_QUATERNION_HEIGHT = 200
DEFAULT_N_RANGE = "5..50"
DEFAULT_EPSILON = "0.5"


class UsageError(Exception):
    pass


def fmt_float(x: float) -> str:
    return format(x, "#.12g")


def fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def json_value(v):
    if isinstance(v, float):
        # same 12 significant digits as the CSV, kept numeric
        return float(fmt_float(v))
    return v


def parse_int_set(spec: str) -> list[int]:
    """``"5"``, ``"5..20"`` or ``"3,5,7"`` (pieces may mix)."""
    out: list[int] = []
    try:
        for piece in spec.split(","):
            piece = piece.strip()
            if ".." in piece:
                lo, hi = (int(x) for x in piece.split(".."))
                if lo > hi:
                    raise UsageError(f"empty range {piece!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(piece))
    except ValueError as exc:
        raise UsageError(f"malformed integer list {spec!r}") from exc
    if not out:
        raise UsageError("empty integer list")
    return out


def parse_rational(s: str) -> Fraction:
    try:
        q = as_rational(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed rational {s!r}") from exc
    return q


def write_csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])


def write_jsonl(out, header, rows):
    for r in rows:
        out.write(json.dumps({k: json_value(v) for k, v in zip(header, r)}) + "\n")


def emit(args, header, rows, out):
    (write_csv if args.format == "csv" else write_jsonl)(out, header, rows)


def _cache(args) -> Mu0Cache:
    path = args.cache if args.cache else default_cache_path()
    cache = Mu0Cache(None if args.no_cache else path)
    if cache.discarded:
        print(f"# warning: discarded malformed cache {path}; recomputing", file=sys.stderr)
    return cache


# -- commands ----------------------------------------------------------------


def cmd_classes(args, out) -> int:
    if (args.trace is None) == (args.range is None):
        raise UsageError("give exactly one of --trace or --range")
    traces = [args.trace] if args.trace is not None else parse_int_set(args.range)
    if min(traces) < 3:
        raise UsageError("traces must be >= 3")
    cache = _cache(args)
    counts = cache.many(traces)
    header = ["trace", "mu0", "discriminant", "n_cycles"]
    if args.format == "csv":
        write_csv(out, header, [(c.trace, c.mu0, c.discriminant, c.n_cycles) for c in counts])
        return EXIT_OK
    for c in counts:
        reps = [list(k.representative.entries()) for k in hyperbolic_classes(c.trace) if k.primitive]
        if len(reps) != c.mu0:
            raise AssertionError(f"cache disagrees with recomputation at trace {c.trace}")
        rec = {
            "trace": c.trace,
            "mu0": c.mu0,
            "discriminant": c.discriminant,
            "n_cycles": c.n_cycles,
            "mu0_sl2": c.mu0_sl2,
            "representatives": reps,
        }
        out.write(json.dumps(rec) + "\n")
    return EXIT_OK


BOUNDS_HEADER = ["N", "setting", "mu0", "index", "area", "sys_lower", "kiss_lower", "epsilon", "verdict_kiss", "verdict_sys"]


def bound_rows(Ns, epsilon, cache):
    if min(Ns) < 5:
        raise UsageError("bounds need N >= 5")
    if not 0 < epsilon < 1:
        raise UsageError("epsilon must lie in (0, 1)")
    counts = cache.many(Ns)
    return [theorem_5_4_report(N, epsilon, c.mu0) for N, c in zip(Ns, counts)]


def cmd_bounds(args, out) -> int:
    Ns = parse_int_set(args.n)
    try:
        epsilon = float(args.epsilon)
    except ValueError as exc:
        raise UsageError(f"malformed epsilon {args.epsilon!r}") from exc
    reports = bound_rows(Ns, epsilon, _cache(args))
    rows = [
        (r.N, r.setting, r.mu0_of_N, r.index, r.area, r.sys_lower, r.kiss_lower, r.epsilon, r.verdict_kiss, r.verdict_sys)
        for r in reports
    ]
    emit(args, BOUNDS_HEADER, rows, out)
    held = sum(r.precondition for r in reports)
    print(
        f"# precondition mu0(N) >= N^(1-epsilon) holds for {held}/{len(reports)} N; "
        f"failing N: {[r.N for r in reports if not r.precondition]}",
        file=sys.stderr,
    )
    bad = [r for r in reports if not r.verdict_sys or (r.precondition and not r.verdict_kiss)]
    return EXIT_COUNTEREXAMPLE if bad else EXIT_OK


def _place_json(v):
    return v if v == INFINITY else int(v)


def cmd_isotropy(args, out) -> int:
    a, b = parse_rational(args.a), parse_rational(args.b)
    if a == 0 or b == 0:
        raise UsageError("a and b must be nonzero")
    try:
        cert = is_division(QuaternionAlgebra(a, b), height=args.height)
    except SearchExhausted as exc:
        out.write(json.dumps({"a": str(a), "b": str(b), "verdict": "unknown", "error": str(exc)}) + "\n")
        return EXIT_COUNTEREXAMPLE
    if not cert.check():
        raise AssertionError(f"certificate failed its self-check: {cert}")
    rec = {"a": str(a), "b": str(b), "verdict": cert.verdict}
    if cert.verdict == "split":
        rec["witness"] = [str(x) for x in cert.witness]
        rec["norm"] = str(QuaternionAlgebra(a, b).norm_form(cert.witness))
    else:
        rec["ramified"] = [_place_json(v) for v in cert.ramified]
    out.write(json.dumps(rec) + "\n")
    return EXIT_OK


def _verify_lemma_sn(args):
    Ns = parse_int_set(args.n or "5..12")
    H = args.height or DEFAULT_MODULAR_HEIGHT
    checked, bad = [], []
    for N in Ns:
        if N < 3:
            raise UsageError("lemma-sn needs N >= 3")
        scan = cg.scan_trace_gap(N, H)
        checked.append({"N": N, "height": H, "diagonal_pairs": scan.diagonal_pairs, "elements_in_band": scan.elements_in_band})
        bad += [{"N": N, "matrix": m.rows(), "trace": m.trace()} for m in scan.counterexamples]
    return checked, bad


def _verify_quat_gap(args):
    p = args.p if args.p is not None else 3
    try:
        cg.check_quaternionic_prime(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    Ns = parse_int_set(args.n or "3,5,7")
    if any(N % 2 == 0 or N < 3 for N in Ns):
        raise UsageError("quat-gap levels must be odd and >= 3")
    H = args.height or DEFAULT_QUATERNION_HEIGHT
    elements = cg.quat_enumerate(p, H)
    checked, bad = [], []
    for N in Ns:
        res = cg.check_quaternionic_gap(p, N, H, elements)
        checked.append({"p": p, "N": N, "height": H, "members": res.members, "gap": cg.quaternionic_gap(N)})
        bad += [{"p": p, "N": N, "coords": list(x.int_coords()), "trace": 2 * x.int_coords()[0]} for x in res.counterexamples]
    parabolic = cg.nontrivial_parabolic_quaternions(elements)
    checked.append({"p": p, "N": 1, "height": H, "nontrivial_trace_2": len(parabolic)})
    bad += [{"p": p, "N": 1, "coords": list(x.int_coords()), "trace": 2 * x.int_coords()[0]} for x in parabolic]
    return checked, bad


def _verify_order_formula(args):
    Ns = parse_int_set(args.n or "2..12")
    if min(Ns) < 2:
        raise UsageError("order-formula needs N >= 2")
    checked, bad = [], []
    for N in Ns:
        exact, brute = cg.sl2_order_mod(N), cg.sl2_order_bruteforce(N)
        checked.append({"N": N, "order": exact, "bruteforce": brute})
        if exact != brute or exact >= N**3:
            bad.append({"N": N, "order": exact, "bruteforce": brute, "N_cubed": N**3})
    return checked, bad


def _verify_hilbert_reciprocity(args):
    rng = random.Random(args.seed)
    bound = args.height or 1000
    checked, bad = [], []
    for _ in range(args.count):
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, bound), rng.randint(1, bound))
        b = Fraction(rng.choice([-1, 1]) * rng.randint(1, bound), rng.randint(1, bound))
        minus = [v for v in relevant_places(a, b) if hilbert_symbol(a, b, v) == -1]
        checked.append({"a": str(a), "b": str(b), "ramified": [_place_json(v) for v in minus]})
        if len(minus) % 2:
            bad.append(checked[-1])
    return checked, bad


SUITES = {
    "lemma-sn": _verify_lemma_sn,
    "quat-gap": _verify_quat_gap,
    "order-formula": _verify_order_formula,
    "hilbert-reciprocity": _verify_hilbert_reciprocity,
}


def cmd_verify(args, out) -> int:
    checked, bad = SUITES[args.suite](args)
    rec = {"suite": args.suite, "passed": not bad, "checked": checked, "counterexamples": bad}
    out.write(json.dumps(rec) + "\n")
    return EXIT_OK if not bad else EXIT_COUNTEREXAMPLE


def cmd_enumerate(args, out) -> int:
    try:
        cg.check_quaternionic_prime(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.level is not None and args.level < 2:
        raise UsageError("--level must be >= 2")
    elements = cg.quat_enumerate(args.p, args.height)
    level = args.level or 1
    for tr, xs in elements.items():
        kind = kind_of_trace(tr)
        for x in xs:
            if args.level is not None and not cg.quat_in_congruence(x, args.level):
                continue
            rec = {"setting": "quaternionic", "N": level, "coords": list(x.int_coords()), "trace": tr, "kind": kind.value}
            if kind.value == "hyperbolic":
                rec["length"] = json_value(translation_length(tr))
            out.write(json.dumps(rec) + "\n")
    return EXIT_OK


PGT_HEADER = ["t", "mu0", "cumulative", "reference", "ratio"]


def cmd_pgt(args, out) -> int:
    if args.tmax < 10:
        raise UsageError("--tmax must be >= 10")
    cache = _cache(args)
    counts = {c.trace: c.mu0 for c in cache.many(range(3, args.tmax + 1))}
    rows = pgt_statistics(args.tmax, counts)
    emit(args, PGT_HEADER, [(r.t, r.mu0, r.cumulative, r.reference, r.ratio) for r in rows], out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="congruence-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_output(p, formats=("csv", "json")):
        p.add_argument("--format", choices=formats, default=formats[0])

    def with_cache(p):
        p.add_argument("--cache", help="mu0 cache CSV (default: $CONGRUENCE_LAB_CACHE or ~/.cache/congruence_lab/mu0.csv)")
        p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")

    p = sub.add_parser("classes", help="primitive hyperbolic class counts mu0(t)")
    p.add_argument("--trace", type=int)
    p.add_argument("--range", help="e.g. 3..10")
    with_output(p, ("csv", "json"))
    with_cache(p)

    p = sub.add_parser("bounds", help="systole / kissing-number bound reports for Gamma(N)")
    p.add_argument("--n", default=DEFAULT_N_RANGE)
    p.add_argument("--epsilon", default=DEFAULT_EPSILON)
    with_output(p)
    with_cache(p)

    p = sub.add_parser("isotropy", help="split or division verdict for (a, b / Q)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--height", type=int, default=10_000, help="isotropic-vector search bound")

    p = sub.add_parser("verify", help="run a certificate suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--n")
    p.add_argument("--p", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("enumerate", help="norm-one integral quaternions of (p, -1) as JSON lines")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--height", type=int, default=DEFAULT_QUATERNION_HEIGHT)
    p.add_argument("--level", type=int)

    p = sub.add_parser("pgt", help="cumulative class counts against sum t/log t")
    p.add_argument("--tmax", type=int, required=True)
    with_output(p)
    with_cache(p)
    return parser


COMMANDS = {
    "classes": cmd_classes,
    "bounds": cmd_bounds,
    "isotropy": cmd_isotropy,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "pgt": cmd_pgt,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items())}
    print("# config " + json.dumps(config, default=str), file=sys.stderr)
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except UsageError as exc:
        print(f"congruence-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
