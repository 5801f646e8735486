"""Command-line entry point: ``thetacn <command> ...``.

Exit codes: 0 success, 1 a criterion disagrees with descent, 2 input out of
scope, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Optional, Sequence

from . import report
from .arith import ArithmeticError_
from .criteria import (
    CERTIFIED,
    DEFAULT_WITNESS_HEIGHT,
    OutOfScope,
    classify,
    conjecture_report,
    odd_square_free_range,
    sweep,
)
from .descent import Curve, Theta, selmer
from .graph import GraphError, build_unified
from .witness import search_point

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_SCOPE = 2
EXIT_USAGE = 64

FORMATS = ("text", "json", "csv", "dot")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Scope(Exception):
    """Input rejected by the library; reported with exit code 2."""


def _positive(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if k < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {k}")
    return k


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes (output order is unaffected)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thetacn", description="Selmer-rank certificates for theta-congruent and tiling numbers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="certify one odd square-free n")
    p.add_argument("n", type=int)
    p.add_argument("--height", type=int, default=DEFAULT_WITNESS_HEIGHT, help="witness search height, 0 disables")
    _common(p)

    p = sub.add_parser("scan", help="classify every odd square-free n in [lo, hi]")
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)
    p.add_argument("--only-certified", action="store_true", help="keep rows where something is certified")
    p.add_argument("--height", type=int, default=DEFAULT_WITNESS_HEIGHT, help="witness search height, 0 disables")
    _common(p)

    p = sub.add_parser("graph", help="residue graph G(m) for a signed square-free m")
    p.add_argument("m", type=int)
    _common(p)

    p = sub.add_parser("selmer", help="dump S' and S for one curve")
    p.add_argument("n", type=int)
    p.add_argument("theta", help="pi3 or 2pi3")
    _common(p)

    p = sub.add_parser("verify", help="check every graph criterion against descent on [lo, hi]")
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)
    _common(p)

    p = sub.add_parser("search-point", help="look for a rational point with y != 0")
    p.add_argument("n", type=int)
    p.add_argument("theta", help="pi3 or 2pi3")
    p.add_argument("--height", type=_positive, required=True)
    _common(p)
    return parser


def _curve(n: int, theta: str) -> Curve:
    try:
        return Curve(n, Theta.parse(theta))
    except (ValueError, ArithmeticError_) as exc:
        raise _Scope(str(exc)) from exc


# ---------------------------------------------------------------- commands


def _cmd_classify(args) -> tuple[str, int]:
    try:
        rec = classify(args.n, witness_height=max(args.height, 0))
    except OutOfScope as exc:
        raise _Scope(str(exc)) from exc
    if args.format == "json":
        out = report.record_json(rec)
    elif args.format == "csv":
        out = report.scan_csv([rec])
    else:
        out = report.record_text(rec)
    code = EXIT_OK if all(v.agree for v in rec.criteria) else EXIT_DISAGREE
    return out, code


def _scan_render(fmt: str, height: int, only: bool, n: int) -> str:
    rec = classify(n, witness_height=height)
    if only and CERTIFIED not in (rec.non_pi3_cn, rec.non_2pi3_cn):
        return ""
    if fmt == "json":
        return report.record_jsonl(rec)
    if fmt == "csv":
        return report.scan_csv([rec], header=False)
    return report.scan_text([rec]).split("\n", 1)[1]


def _ordered_map(fn: Callable, items: list, jobs: int):
    if jobs <= 1 or len(items) < 32:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items, chunksize=max(1, len(items) // (jobs * 16)))


def _cmd_scan(args, write: Callable[[str], None]) -> int:
    ns = odd_square_free_range(args.lo, args.hi)
    if args.format == "csv":
        write(",".join(report.SCAN_COLUMNS) + "\n")
    elif args.format == "text" and ns:
        write(report.scan_text([]))
    fn = partial(_scan_render, args.format, max(args.height, 0), args.only_certified)
    for chunk in _ordered_map(fn, ns, args.jobs):
        if chunk:
            write(chunk)
    return EXIT_OK


def _cmd_graph(args) -> tuple[str, int]:
    try:
        g = build_unified(args.m)
    except (GraphError, ArithmeticError_) as exc:
        raise _Scope(str(exc)) from exc
    render = {
        "text": report.graph_text,
        "json": lambda g: report.dump_json(report.graph_to_dict(g)),
        "csv": report.graph_csv,
        "dot": lambda g: g.to_dot(),
    }[args.format]
    return render(g), EXIT_OK


def _cmd_selmer(args) -> tuple[str, int]:
    r = selmer(_curve(args.n, args.theta))
    render = {
        "text": report.selmer_text,
        "json": lambda r: report.dump_json(report.selmer_to_dict(r)),
        "csv": report.selmer_csv,
    }[args.format]
    return render(r), EXIT_OK


def _cmd_verify(args) -> tuple[str, int]:
    s = sweep(args.lo, args.hi, jobs=args.jobs)
    conj = conjecture_report(args.lo, args.hi, jobs=args.jobs)
    if args.format == "json":
        out = report.dump_json(report.verify_to_dict(s, conj))
    elif args.format == "csv":
        out = report.verify_csv(s)
    else:
        out = report.verify_text(s, conj)
    return out, EXIT_OK if s.ok else EXIT_DISAGREE


def _cmd_search_point(args) -> tuple[str, int]:
    c = _curve(args.n, args.theta)
    w = search_point(c, args.height)
    if args.format == "json":
        body = {"n": args.n, "theta": c.theta.value, "height": args.height, "point": report.witness_to_dict(w)}
        return report.dump_json(body), EXIT_OK
    return report.witness_text(w, args.height), EXIT_OK


_SIMPLE = {
    "classify": _cmd_classify,
    "graph": _cmd_graph,
    "selmer": _cmd_selmer,
    "verify": _cmd_verify,
    "search-point": _cmd_search_point,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "dot" and args.command != "graph":
        parser.error("--format dot is only available for the graph command")
    if args.format == "csv" and args.command == "search-point":
        parser.error("--format csv is not available for search-point")
    try:
        if args.command == "scan":
            code = _cmd_scan(args, sys.stdout.write)
        else:
            out, code = _SIMPLE[args.command](args)
            sys.stdout.write(out)
    except _Scope as exc:
        print(f"thetacn: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
