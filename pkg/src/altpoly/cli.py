"""Command-line interface.

Exit codes: 0 all verdicts pass, 1 a verification failed (certificates are
in the report), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import pipeline, zigzag
from .algebra import ScaledElement, format_scaled
from .cache import Cache

USAGE_ERROR = 2


def default_cache_dir() -> str:
    env = os.environ.get("ALTPOLY_CACHE_DIR")
    if env:
        return env
    return str(Path.home() / ".cache" / "altpoly")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altpoly",
        description="Exact toolkit for alternating-monomial counts of "
                    "commutator monomials and their generator polytopes.")
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("ALTPOLY_THREADS", "1")),
                        help="worker budget (results are thread-count independent)")
    parser.add_argument("--cache-dir", default=default_cache_dir())
    parser.add_argument("--no-cache", action="store_true",
                        help="disable the on-disk result cache")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("brute", help="exhaustive maximum over bracketed monomials")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forward", action="store_true")

    p = sub.add_parser("eval", help="evaluate a bracket tree in the endpoint algebra")
    p.add_argument("--tree", required=True, help='nested braces, e.g. "{{1,3},2}"')

    p = sub.add_parser("seed", help="regular projections of all monomial values")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("canonical", help="canonical generating systems for one index")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit", choices=("full", "reduced", "top"), default="top")

    p = sub.add_parser("tables", help="maximal-count tables via the families")
    p.add_argument("--max-n", type=int, default=30)

    p = sub.add_parser("zigzag", help="alternating permutation counts and asymptotics")
    p.add_argument("--max-n", type=int, default=15)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("what", choices=("gen", "card", "rn", "closure", "remark",
                                    "seed-equiv"))
    p.add_argument("--n", type=int)
    p.add_argument("--max-sum", type=int, default=10)
    p.add_argument("--extended", action="store_true")
    p.add_argument("--recheck", metavar="REPORT",
                   help="re-verify a stored report from its certificates")
    p.add_argument("--report-out", metavar="FILE",
                   help="write the JSON report here")
    return parser


def _emit_report(report: pipeline.Report, args) -> int:
    if args.report_out:
        with open(args.report_out, "w") as handle:
            json.dump(report.to_json(), handle, indent=1)
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=1))
    else:
        print(report.render_text())
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0

    cache = Cache(None if args.no_cache else args.cache_dir)
    try:
        return run_command(args, cache)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def run_command(args, cache: Cache) -> int:
    if args.command == "brute":
        from .trees import brute_r, format_tree

        value, witness = brute_r(args.n, forward=args.forward)
        if args.format == "json":
            print(json.dumps({"n": args.n, "forward": args.forward,
                              "value": int(value), "witness": format_tree(witness)}))
        else:
            print(f"{args.n}, {value}, {format_tree(witness)}")
        return 0

    if args.command == "eval":
        from .trees import eval_tree, parse_tree, tree_size

        tree = parse_tree(args.tree)
        value = eval_tree(tree)
        print(format_scaled(ScaledElement(value, 0)))
        return 0

    if args.command == "seed":
        from .trees import monomial_projection_seed

        seed = monomial_projection_seed(args.n)
        sys.stdout.write(seed.serialize())
        return 0

    if args.command == "tables":
        reg = pipeline.Registry()
        report = pipeline.check_tables(reg, args.max_n)
        if args.format == "json":
            print(json.dumps(report.to_json(), indent=1))
        else:
            print("n, r, r_forw")
            for case in report.cases:
                print(f"{case['n']}, {case['r']}, {case['r_forw']}")
        return 0 if report.passed else 1

    if args.command == "zigzag":
        table = zigzag.zigzag_numbers(args.max_n)
        rows = []
        for n in range(args.max_n + 1):
            row = {"n": n, "zigzag": table.tilde[n], "euler": table.euler[n]}
            if n >= 1:
                expected = zigzag.expected_count(n)
                from .rationals import rat

                expected = rat(expected)
                row["expected"] = f"{expected.numerator}/{expected.denominator}"
            if n >= 2:
                row["ratio"] = zigzag.asymptotic_check(n).density_ratio[0]
            rows.append(row)
        if args.format == "json":
            print(json.dumps(rows, indent=1))
        else:
            for row in rows:
                print(", ".join(str(row.get(k, "")) for k in
                                ("n", "zigzag", "euler", "expected", "ratio")))
        return 0

    if args.command == "canonical":
        reg = pipeline.Registry()
        systems = pipeline.canonical_systems(reg, args.n, cache)
        chosen = {"full": systems.full, "reduced": systems.reduced,
                  "top": systems.top}[args.emit]
        sys.stdout.write(chosen.serialize())
        return 0

    if args.command == "verify":
        reg = pipeline.Registry()
        if args.recheck:
            with open(args.recheck) as handle:
                stored = json.load(handle)
            ok = pipeline.recheck_report(stored, reg, cache)
            print(f"recheck: {'PASS' if ok else 'FAIL'}")
            return 0 if ok else 1
        if args.what == "card":
            ns = (args.n,) if args.n else (
                pipeline.CARD_REQUIRED + (pipeline.CARD_EXTENDED if args.extended else ()))
            report = pipeline.check_card(reg, cache, ns, progress=_progress(args))
        elif args.what == "gen":
            if not args.n:
                print("error: verify gen requires --n", file=sys.stderr)
                return USAGE_ERROR
            report = pipeline.check_gen(reg, cache, args.n, progress=_progress(args))
        elif args.what == "rn":
            report = pipeline.check_rn(reg, cache, extended=args.extended)
        elif args.what == "closure":
            report = pipeline.check_closure(reg, cache, args.max_sum,
                                            progress=_closure_progress(args))
        elif args.what == "remark":
            report = pipeline.check_remark(reg, cache)
        elif args.what == "seed-equiv":
            if not args.n:
                print("error: verify seed-equiv requires --n", file=sys.stderr)
                return USAGE_ERROR
            report = pipeline.check_seed_equiv(reg, cache, args.n)
        return _emit_report(report, args)

    return USAGE_ERROR


def _progress(args):
    if args.format == "json":
        return None

    state = {"last": 0.0}

    def report(j, done, total):
        now = time.time()
        if now - state["last"] > 10:
            state["last"] = now
            print(f"  .. class {j}: {done}/{total}", file=sys.stderr)

    return report


def _closure_progress(args):
    if args.format == "json":
        return None

    def report(done, elapsed):
        print(f"  .. {done} cases in {elapsed:.0f}s", file=sys.stderr)

    return report


if __name__ == "__main__":
    sys.exit(main())
