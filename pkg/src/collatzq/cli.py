"""Command-line front end binding the library into runnable experiments.

Exit codes: 0 success; 1 when a run surfaces a property-violation finding
(a counterexample word, a nonterminating orbit, verify failures); 2 on
usage errors.  Logs and findings commentary go to stderr; structured
output (CSV/JSONL/JSON) goes to stdout or --out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import IO

from ._version import VERSION
from . import dynamics, reports, spectral
from .census import (
    DEFAULT_SEARCH_BUDGET,
    _member_to_json,
    census_sampled,
    density_sweep,
    search_counterexamples,
)
from .core import Mat2, rational_fixed_points, FixedPointKind
from .errors import CollatzqError
from .verify import SUITES
from .words import (
    DEFAULT_GENERATORS,
    GeneratorPair,
    enumerate_lambda,
    format_word_compact,
    word_eval,
)


def _parse_value(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"cannot parse rational {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("starting value must be >= 0")
    return value


def _parse_matrix(text: str) -> Mat2:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("matrix must be a,b,c,d")
    try:
        return Mat2(*(int(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad matrix {text!r}") from exc


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like A..B")
    try:
        return int(lo), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc


def _parse_generators(text: str) -> GeneratorPair:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("generators must be a,u,v,b")
    try:
        return GeneratorPair(*(int(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad generators {text!r}") from exc


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(fh: IO[str], close: bool, write) -> None:
    try:
        write(fh)
    finally:
        if close:
            fh.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collatzq",
        description="Exact rational Collatz-like dynamics and matrix-word censuses",
    )
    parser.add_argument("--version", action="version", version=f"collatzq {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="iterate one starting value to 0")
    p.add_argument("--value", type=_parse_value, required=True, metavar="P/Q")
    p.add_argument("--map", choices=(dynamics.THETA, dynamics.PHI), default=dynamics.THETA)
    p.add_argument("--max-steps", type=int, default=dynamics.DEFAULT_STEP_CAP)
    p.add_argument("--emit", choices=("points", "word", "json"), default="points")

    p = sub.add_parser("sweep", help="theta-orbit termination sweep up to a height")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=dynamics.DEFAULT_STEP_CAP)
    p.add_argument("--out", metavar="CSV")

    p = sub.add_parser("enumerate", help="list the (k, M) word box")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--emit", choices=("tuples", "matrices"), default="tuples")

    p = sub.add_parser("density", help="integer-eigenvalue census over a range of M")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m-range", type=_parse_range, required=True, metavar="A..B")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--prefilter", choices=("on", "off"), default="on")
    p.add_argument("--out", metavar="CSV")
    p.add_argument("--sample", type=int, metavar="N", help="sampled mode, N draws per M")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checkpoint", metavar="FILE")
    p.add_argument("--resume", action="store_true")

    p = sub.add_parser("search", help="hunt words with integer eigenvalues")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--exp-max", type=int, required=True)
    p.add_argument("--generators", type=_parse_generators, default=DEFAULT_GENERATORS,
                   metavar="a,u,v,b")
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--out", metavar="JSONL")

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, help="box bound for the freeness suite")

    p = sub.add_parser("nk", help="exponent-threshold certificate for a block count")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("fixed-point", help="rational fixed points of a,b,c,d")
    p.add_argument("--matrix", type=_parse_matrix, required=True, metavar="a,b,c,d")

    p = sub.add_parser("factor", help="F/G word of a nonnegative SL2 matrix")
    p.add_argument("--matrix", type=_parse_matrix, required=True, metavar="a,b,c,d")

    return parser


def _cmd_orbit(args) -> int:
    rec = dynamics.orbit(args.value, args.map, args.max_steps)
    if args.emit == "points":
        for x in rec.points:
            print(reports.frac_str(x))
    elif args.emit == "word":
        if not rec.terminated:
            print("orbit did not terminate; no word", file=sys.stderr)
            return 1
        print("".join(l.value for l in dynamics.orbit_to_word(rec)))
    else:
        payload = {
            "map": rec.map_name,
            "start": reports.frac_str(rec.points[0]),
            "points": [reports.frac_str(x) for x in rec.points],
            "branches": [l.value for l in rec.branches],
            "terminated": rec.terminated,
            "stopping_time": rec.stopping_time,
        }
        print(json.dumps(payload))
    if not rec.terminated:
        print(f"no termination within {args.max_steps} steps", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args) -> int:
    invocation = reports.canonical_invocation(
        "sweep", [("--height", args.height), ("--max-steps", args.max_steps)]
    )
    report, rows = dynamics.theta_sweep_full(args.height, args.max_steps)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            reports.write_sweep_csv(rows, fh, invocation)
    payload = reports.sweep_report_json(report)
    payload["version"] = VERSION
    payload["invocation"] = invocation
    print(json.dumps(payload))
    if not report.all_terminated:
        print(
            f"CANDIDATE COUNTEREXAMPLE: {len(report.nonterminated)} starts did not "
            f"reach 0 within {args.max_steps} steps",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_enumerate(args) -> int:
    invocation = reports.canonical_invocation(
        "enumerate", [("--k", args.k), ("--m", args.m), ("--emit", args.emit)]
    )
    for line in reports.header_lines(invocation):
        print(line)
    for w in enumerate_lambda(args.k, args.m):
        if args.emit == "tuples":
            print(format_word_compact(w))
        else:
            print(",".join(str(e) for e in word_eval(w).entries()))
    return 0


def _cmd_density(args) -> int:
    prefilter = args.prefilter == "on"
    flags: list[tuple[str, object]] = [
        ("--k", args.k),
        ("--m-range", f"{args.m_range[0]}..{args.m_range[1]}"),
        ("--prefilter", args.prefilter),
    ]
    if args.sample is not None:
        flags += [("--sample", args.sample), ("--seed", args.seed)]
    invocation = reports.canonical_invocation("density", flags)

    if args.sample is not None:
        rows = [
            census_sampled(args.k, m, args.sample, args.seed, prefilter)
            for m in range(args.m_range[0], args.m_range[1] + 1)
        ]
    else:
        rows = density_sweep(
            args.k,
            args.m_range,
            prefilter,
            workers=max(args.threads, 1),
            checkpoint_path=args.checkpoint,
            resume=args.resume,
        )
    fh, close = _open_out(args.out)
    _emit(fh, close, lambda f: reports.write_density_csv(rows, f, invocation))

    exceptional = [m for row in rows if row.k >= 2 for m in row.omega_members]
    if exceptional:
        print(
            f"COUNTEREXAMPLE CANDIDATES: {len(exceptional)} words at k={args.k} "
            "have integer eigenvalues",
            file=sys.stderr,
        )
        for m in exceptional:
            print(json.dumps(_member_to_json(m), sort_keys=True), file=sys.stderr)
        if args.out:
            with open(args.out + ".members.jsonl", "w", encoding="utf-8") as f:
                reports.write_members_jsonl(exceptional, f, invocation)
        return 1
    for row in rows:
        if row.density_bound is not None:
            print(
                f"M={row.M} density={reports.frac_str(row.density)} "
                f"bound={reports.frac_str(row.density_bound)}",
                file=sys.stderr,
            )
    return 0


def _cmd_search(args) -> int:
    g = args.generators
    invocation = reports.canonical_invocation(
        "search",
        [
            ("--k", args.k),
            ("--exp-max", args.exp_max),
            ("--generators", f"{g.a},{g.u},{g.v},{g.b}"),
            ("--budget", args.budget),
        ],
    )
    result = search_counterexamples(args.k, args.exp_max, g, args.budget)
    fh, close = _open_out(args.out)
    _emit(fh, close, lambda f: reports.write_members_jsonl(result.members, f, invocation))
    if not result.complete:
        print(f"budget exhausted after {result.words_tested} words; partial results",
              file=sys.stderr)
    print(
        f"tested {result.words_tested} words, found {len(result.members)} with "
        "integer eigenvalues",
        file=sys.stderr,
    )
    if result.members and g == DEFAULT_GENERATORS:
        print("COUNTEREXAMPLE: non-pure-power word over the default generators "
              "has integer eigenvalues", file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args) -> int:
    kwargs: dict = {"seed": args.seed}
    if args.suite == "freeness":
        kwargs = {}
        if args.k is not None:
            kwargs["k"] = args.k
        if args.m is not None:
            kwargs["M"] = args.m
    elif args.suite == "fixedpoint":
        if args.samples is not None:
            kwargs["samples"] = args.samples
    else:
        if args.k is not None:
            kwargs["k"] = args.k
        if args.samples is not None:
            kwargs["samples"] = args.samples
    report = SUITES[args.suite](**kwargs)
    report["version"] = VERSION
    print(json.dumps(report, sort_keys=True))
    return 1 if report["failures"] else 0


def _cmd_nk(args) -> int:
    cert = spectral.compute_nk(args.k)
    payload = {
        "k": cert.k,
        "n": cert.n,
        "product_value": reports.frac_str(cert.product_value),
        "product_threshold": cert.product_threshold,
        "det_floor": cert.det_floor,
        "det_threshold": cert.det_threshold,
        "margin_ok": cert.margin_ok,
    }
    print(json.dumps(payload))
    return 0


def _cmd_fixed_point(args) -> int:
    result = rational_fixed_points(args.matrix)
    if result.kind is FixedPointKind.NONE:
        print("no-fixed-point")
    elif result.kind is FixedPointKind.ALL:
        print("all-points-fixed")
    else:
        for x in result.points:
            print(reports.frac_str(x))
    return 0


def _cmd_factor(args) -> int:
    word = dynamics.sl2_factor(args.matrix)
    print("".join(l.value for l in word))
    return 0


_HANDLERS = {
    "orbit": _cmd_orbit,
    "sweep": _cmd_sweep,
    "enumerate": _cmd_enumerate,
    "density": _cmd_density,
    "search": _cmd_search,
    "verify": _cmd_verify,
    "nk": _cmd_nk,
    "fixed-point": _cmd_fixed_point,
    "factor": _cmd_factor,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except CollatzqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
