"""Recompute the expected fixture numbers from a fixture directory and compare."""

from __future__ import annotations

import shlex
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .braids import ClosableBraid, parse_braid
from .core import MultiQuandle, load
from .diagrams import from_pd_code, parse_diagram
from .errors import MQError, ParseError
from .invariants import count_colorings_braid, count_colorings_diagram
from .toric import load_toric, solve_toric

MANIFEST = "regress.txt"


@dataclass(frozen=True)
class LinkTable:
    name: str
    pd: str
    relabel: tuple[int, ...]
    rows: tuple[tuple[tuple[int, ...], int], ...]

    def pd_colors(self, coloring: tuple[int, ...]) -> list[int]:
        """Colors in PD component order for a coloring given in table component order."""
        colors = [0] * len(self.relabel)
        for i, c in zip(self.relabel, coloring):
            colors[i - 1] = c
        return colors


def parse_table(text: str) -> LinkTable:
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines or lines[0][1] != "table v1":
        raise ParseError("expected header 'table v1'")
    name = pd = None
    relabel = None
    rows = []
    for no, line in lines[1:]:
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "name":
                name = rest
            elif key == "pd":
                pd = rest
            elif key == "relabel":
                relabel = tuple(int(v) for v in rest.split(","))
            elif key == "row":
                coloring, count = rest.split()
                rows.append((tuple(int(v) for v in coloring.split(",")), int(count)))
            else:
                raise ParseError(f"unknown key {key!r}", f"line {no}")
        except ValueError:
            raise ParseError(f"bad {key} line {line!r}", f"line {no}") from None
    if name is None or pd is None or not rows:
        raise ParseError("table needs name, pd and at least one row")
    width = len(rows[0][0])
    relabel = relabel or tuple(range(1, width + 1))
    if sorted(relabel) != list(range(1, width + 1)) or any(len(r) != width for r, _ in rows):
        raise ParseError(f"relabel and rows must all cover {width} components")
    return LinkTable(name, pd, relabel, tuple(rows))


def table_counts(table: LinkTable, mq: MultiQuandle) -> list[int]:
    return [
        count_colorings_diagram(from_pd_code(table.pd, table.pd_colors(c)), mq, cap=0).count
        for c, _ in table.rows
    ]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


@dataclass
class RegressReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def text(self) -> str:
        return "\n".join(c.line() for c in self.checks) + "\n"


def _multiset(values) -> str:
    return "{" + ",".join(map(str, sorted(values))) + "}"


def check_table(table: LinkTable, mq: MultiQuandle) -> Check:
    expected = [n for _, n in table.rows]
    got = table_counts(table, mq)
    same = Counter(expected) == Counter(got)
    agree = sum(e == g for e, g in zip(expected, got))
    if same:
        detail = f"multiset {_multiset(got)}; {agree}/{len(got)} rows agree individually"
    else:
        missing = Counter(expected) - Counter(got)
        idx = next(i for i, e in enumerate(expected) if missing[e])
        coloring = ",".join(map(str, table.rows[idx][0]))
        detail = (
            f"first divergent row ({coloring}): expected {expected[idx]}, not among computed counts "
            f"(that row computed {got[idx]}); expected multiset {_multiset(expected)}, computed {_multiset(got)}"
        )
    return Check(f"table {table.name}", same, detail)


def run_regress(directory) -> RegressReport:
    """
    Read ``regress.txt`` in ``directory`` and evaluate each entry.

    Raises FileNotFoundError when the manifest is missing and ParseError when
    it is malformed; mathematical mismatches become failed checks.
    """
    root = Path(directory)
    manifest = root / MANIFEST
    if not manifest.is_file():
        raise FileNotFoundError(f"no {MANIFEST} in {root}")
    entries = [
        (no, shlex.split(line))
        for no, line in enumerate(manifest.read_text(encoding="utf-8").splitlines(), 1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not entries or entries[0][1] != ["regress", "v1"]:
        raise ParseError("expected header 'regress v1'", f"{MANIFEST}")
    report = RegressReport()
    mq = None
    for no, parts in entries[1:]:
        kind, args = parts[0], parts[1:]
        where = f"{MANIFEST} line {no}"
        try:
            if kind == "quandle":
                mq = load(root / args[0])
                report.checks.append(Check(f"quandle {args[0]}", True, f"valid {mq.k}-quandle, order {mq.order}"))
                continue
            if mq is None and kind in ("braid", "diagram", "table"):
                raise ParseError("a 'quandle' line must come first", where)
            if kind == "braid":
                name, spec, want = args[0], args[1], int(args[2])
                got = count_colorings_braid(ClosableBraid(parse_braid(spec, mq.k)), mq, cap=0).count
                report.checks.append(Check(f"braid {name}", got == want, f"expected {want}, computed {got}"))
            elif kind == "diagram":
                want = int(args[1])
                d = parse_diagram((root / args[0]).read_text(encoding="utf-8"))
                got = count_colorings_diagram(d, mq, cap=0).count
                report.checks.append(Check(f"diagram {args[0]}", got == want, f"expected {want}, computed {got}"))
            elif kind == "table":
                table = parse_table((root / args[0]).read_text(encoding="utf-8"))
                report.checks.append(check_table(table, mq))
            elif kind == "toric":
                want = (int(args[1]), int(args[2]))
                sol = solve_toric(load_toric(root / args[0]))
                got = (sol.dimension, sol.components) if sol.nonempty else None
                report.checks.append(
                    Check(
                        f"toric {args[0]}",
                        got == want,
                        f"expected dim={want[0]} components={want[1]}, computed "
                        + (f"dim={got[0]} components={got[1]}" if got else "empty"),
                    )
                )
            else:
                raise ParseError(f"unknown entry {kind!r}", where)
        except MQError:
            raise
        except (IndexError, ValueError):
            raise ParseError(f"malformed entry {' '.join(parts)!r}", where) from None
    return report
