"""Command-line front end. Exit codes: 0 success, 1 mathematical failure, 2 usage or parse error."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .braids import ClosableBraid, parse_braid
from .core import MultiQuandle, parse_tables, validate
from .diagrams import from_pd_code, parse_diagram
from .errors import InvalidQuandleError, MQError
from .fuzz import markov_fuzz, reidemeister_fuzz
from .invariants import braid_action, count_colorings_braid, count_colorings_diagram, format_results
from .regress import run_regress
from .search import ISO, LABELED, SearchSpec, write_search
from .toric import format_solution, parse_toric, solve_toric

OK, MATH_FAILURE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def load_checked(path) -> MultiQuandle:
    """Parse a quandle file and run the full axiom check before anything else touches it."""
    tables, invs = parse_tables(_read(path))
    report = validate(tables)
    if not report.valid:
        first = report.violations[0]
        raise InvalidQuandleError(
            f"invalid quandle {path}: {len(report.violations)}"
            f"{'+' if report.truncated else ''} violations, first {first}",
            report,
        )
    mq = MultiQuandle(tables, check=False)
    for i, given in sorted(invs.items()):
        if given != mq.inverse_tables[i - 1]:
            raise InvalidQuandleError(f"invalid quandle {path}: inv block {i} does not match the derived inverse")
    return mq


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def cmd_validate(args, out):
    tables, _ = parse_tables(_read(args.file))
    report = validate(tables)
    if not report.valid:
        out.write(f"invalid: {len(report.violations)}{'+' if report.truncated else ''} violations\n")
        for v in report.violations:
            out.write(f"  {v}\n")
        return MATH_FAILURE
    mq = load_checked(args.file)
    out.write(f"valid {mq.k}-quandle, order {mq.order}\n")
    return OK


def cmd_invert(args, out):
    mq = load_checked(args.file)
    for i, t in enumerate(mq.inverse_tables, 1):
        out.write(f"inv {i}\n")
        for row in t:
            out.write(" ".join(map(str, row)) + "\n")
    return OK


def cmd_count(args, out):
    mq = load_checked(args.quandle)
    modes = [m for m in (args.braid, args.diagram, args.pd) if m is not None]
    if len(modes) != 1:
        raise UsageError("count needs exactly one of --braid, --diagram, --pd")
    if args.braid is not None:
        cs = count_colorings_braid(ClosableBraid(parse_braid(args.braid, mq.k)), mq)
    elif args.diagram is not None:
        cs = count_colorings_diagram(parse_diagram(_read(args.diagram)), mq)
    else:
        if args.colors is None:
            raise UsageError("--pd needs --colors")
        cs = count_colorings_diagram(from_pd_code(args.pd, _ints(args.colors, "--colors")), mq)
    out.write(format_results(cs, args.list_solutions))
    return OK


def cmd_action(args, out):
    mq = load_checked(args.quandle)
    b = parse_braid(args.braid, mq.k)
    y = braid_action(b, mq, _ints(args.input, "--input"))
    out.write(",".join(map(str, y)) + "\n")
    return OK


def _fuzz(fn, args, out):
    mq = load_checked(args.quandle)
    report = fn(mq, args.iters, args.seed)
    out.write(report.summary())
    return OK if report.ok else MATH_FAILURE


def cmd_search(args, out):
    spec = SearchSpec(args.order, args.k, ISO if args.iso else LABELED, args.allow_large)
    summary = write_search(spec, args.out)
    for key, val in summary.items():
        out.write(f"{key} {val}\n")
    return OK


def cmd_toric(args, out):
    out.write(format_solution(solve_toric(parse_toric(_read(args.file)))) + "\n")
    return OK


def cmd_regress(args, out):
    if not Path(args.dir).is_dir():
        raise UsageError(f"{args.dir} is not a directory")
    try:
        report = run_regress(args.dir)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    out.write(report.text())
    return OK if report.ok else MATH_FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mquandle", description="Colored-link invariants from finite multi-quandles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check the multi-quandle axioms")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invert", help="print the inverse operation tables")
    s.add_argument("file")
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("count", help="count colorings of a closed braid or a diagram")
    s.add_argument("--quandle", required=True)
    s.add_argument("--braid")
    s.add_argument("--diagram")
    s.add_argument("--pd")
    s.add_argument("--colors")
    s.add_argument("--list-solutions", action="store_true")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("action", help="apply the braid action to one tuple")
    s.add_argument("--quandle", required=True)
    s.add_argument("--braid", required=True)
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_action)

    for name, fn in (("markov-fuzz", markov_fuzz), ("reid-fuzz", reidemeister_fuzz)):
        s = sub.add_parser(name, help="randomized move-invariance check")
        s.add_argument("--quandle", required=True)
        s.add_argument("--iters", type=int, required=True)
        s.add_argument("--seed", type=int, required=True)
        s.set_defaults(func=lambda a, o, fn=fn: _fuzz(fn, a, o))

    s = sub.add_parser("search", help="enumerate quandles and assemble multi-quandles")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--iso", action="store_true")
    s.add_argument("--out", required=True)
    s.add_argument("--allow-large", action="store_true", help="lift the order cap")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("toric", help="solve a torus fixed-point system")
    s.add_argument("file")
    s.set_defaults(func=cmd_toric)

    s = sub.add_parser("regress", help="recompute the fixture numbers")
    s.add_argument("dir")
    s.set_defaults(func=cmd_regress)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return USAGE
    except InvalidQuandleError as exc:
        err.write(f"error: {exc}\n")
        return MATH_FAILURE
    except MQError as exc:
        err.write(f"error: {exc}\n")
        return USAGE
    except OSError as exc:
        err.write(f"error: cannot read {exc.filename}: {exc.strerror}\n")
        return USAGE


def main() -> None:
    sys.exit(run())
