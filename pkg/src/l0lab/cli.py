"""Command-line front end.

    l0lab verify --suite all --space geometric:N=64 --out report.json
    l0lab gauge ball:abs,eps=2 "[4,2,0]"
    l0lab member cex:eps=1 "<5|1/2>"

Exit codes: 0 success, 1 verification mismatch, 2 bad input.
The only environment variable read is ``L0LAB_SEED`` (used when --seed is
not given).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .descriptors import infer_space, parse_rv, parse_set, parse_space
from .errors import L0Error
from .l0_core import RandomVar, format_value
from .prob_space import DEFAULT_TRUNCATION, make_geometric_space
from .sets_gauge import gauge
from .theorems import SUITES, reports_to_json, run_suite

DEFAULT_SEED = 42
DEFAULT_TOL_EXP = 40
DEFAULT_OUT = "l0lab-report.json"


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--space", help="finite:p1,p2,... or geometric:N=<int>")
    p.add_argument("--seed", type=int, help=f"sampling seed (default {DEFAULT_SEED}, env L0LAB_SEED)")
    p.add_argument("--truncation", type=int, help=f"explicit-prefix depth (default {DEFAULT_TRUNCATION})")
    p.add_argument("--tol-exp", type=int, default=DEFAULT_TOL_EXP,
                   help="bisection tolerance 2^-k (default 40)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="l0lab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites and write a JSON report")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--epsilon", default="1", help="radius for the counterexample, e.g. 1 or '<2|1/2>'")
    v.add_argument("--samples", type=int, default=500)
    v.add_argument("--out", default=DEFAULT_OUT)

    g = sub.add_parser("gauge", parents=[common], help="print the gauge of X for a set")
    g.add_argument("set")
    g.add_argument("x")
    g.add_argument("--engine", choices=("symbolic", "bisection"), default="symbolic")

    m = sub.add_parser("member", parents=[common], help="decide membership of X in a set")
    m.add_argument("set")
    m.add_argument("x")
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("L0LAB_SEED")
    return int(env) if env else DEFAULT_SEED


def _space(args, x_text: str | None = None):
    if args.space:
        space = parse_space(args.space)
        if args.truncation and not space.is_finite:
            space = make_geometric_space(args.truncation)
        return space
    trunc = args.truncation or DEFAULT_TRUNCATION
    if x_text is not None:
        return infer_space(x_text, trunc)
    return make_geometric_space(trunc)


def cmd_verify(args) -> int:
    space = _space(args)
    truncation = args.truncation or (space.truncation if not space.is_finite else DEFAULT_TRUNCATION)
    seed = _seed(args)
    eps = parse_rv(args.epsilon, make_geometric_space(truncation))
    reports = run_suite(args.suite, space, seed, truncation, eps, args.samples,
                        Fraction(1, 2**args.tol_exp))
    config = {"suite": args.suite, "space": str(space), "seed": seed, "truncation": truncation,
              "tol": Fraction(1, 2**args.tol_exp), "epsilon": args.epsilon, "samples": args.samples}
    text = reports_to_json(reports, config)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.statement}")
    ok = all(r.passed for r in reports)
    print(f"report written to {args.out}")
    return 0 if ok else 1


def render(x: RandomVar) -> str:
    """Descriptor text for ``x``; constants on the countable space print as a
    bare scalar."""
    if x.tail is not None and x.depth == 0:
        return format_value(x.tail)
    return str(x)


def cmd_gauge(args) -> int:
    space = _space(args, args.x)
    K = parse_set(args.set, space)
    x = parse_rv(args.x, space)
    res = gauge(K, x, args.engine, Fraction(1, 2**args.tol_exp))
    if res.enclosure is None:
        print(render(res.value))
    else:
        lo, hi = res.enclosure
        print(f"lower={render(lo)}")
        print(f"upper={render(hi)}")
    return 0


def cmd_member(args) -> int:
    space = _space(args, args.x)
    K = parse_set(args.set, space)
    print("true" if K.member(parse_rv(args.x, space)) else "false")
    return 0


COMMANDS = {"verify": cmd_verify, "gauge": cmd_gauge, "member": cmd_member}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (L0Error, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
