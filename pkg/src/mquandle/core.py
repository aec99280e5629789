"""
Finite multi-quandles as operation tables.

A multi-quandle of order n carries k quandle operations on the carrier {1..n}.
Tables are stored as nested tuples with 1-based values so that they compare
entry-for-entry with matrices written by hand; ``table[x-1][y-1]`` is ``x ▷ y``.
Zero-based numpy copies are exposed for the vectorized solvers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidQuandleError, ParseError, StructureError

Table = tuple[tuple[int, ...], ...]

DEFAULT_CAP = 100

IDEMPOTENCY = "idempotency"
COLUMN_BIJECTIVITY = "column-bijectivity"
SELF_DISTRIBUTIVITY = "self-distributivity"
CROSS_DISTRIBUTIVITY = "cross-distributivity"
# mixed identities with inverse operations
DERIVED_OP_INV = "derived-op-inv"
DERIVED_INV_OP = "derived-inv-op"
DERIVED_INV_INV = "derived-inv-inv"


@dataclass(frozen=True, order=True)
class Violation:
    axiom: str
    ops: tuple[int, ...]
    witness: tuple[int, ...]

    def recheck(self, tables: Sequence[Table]) -> bool:
        """True if the witness still violates the axiom in ``tables``."""
        return _violates(self, tables)

    def __str__(self):
        ops = ",".join(map(str, self.ops))
        wit = ",".join(map(str, self.witness))
        return f"{self.axiom} ops=({ops}) witness=({wit})"


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple[Violation, ...] = ()
    truncated: bool = False

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.valid:
            return "valid"
        lines = [str(v) for v in self.violations]
        if self.truncated:
            lines.append("... (truncated)")
        return "\n".join(lines)


def _normalize(tables) -> tuple[Table, ...]:
    try:
        out = tuple(tuple(tuple(int(v) for v in row) for row in t) for t in tables)
    except (TypeError, ValueError) as exc:
        raise StructureError(f"tables must be nested integer sequences: {exc}") from None
    if not out:
        raise StructureError("need at least one operation table (k >= 1)")
    n = len(out[0])
    if n < 1:
        raise StructureError("order must be at least 1")
    for i, t in enumerate(out, 1):
        if len(t) != n or any(len(row) != n for row in t):
            raise StructureError(f"table {i} is not {n}x{n}")
        for x, row in enumerate(t, 1):
            for y, v in enumerate(row, 1):
                if not 1 <= v <= n:
                    raise StructureError(f"table {i} entry ({x},{y}) = {v} outside 1..{n}")
    return out


def _inverse_table(t: Table) -> Table | None:
    n = len(t)
    inv = [[0] * n for _ in range(n)]
    for y in range(n):
        for x in range(n):
            z = t[x][y]
            if inv[z - 1][y]:
                return None
            inv[z - 1][y] = x + 1
    return tuple(tuple(r) for r in inv)


def _column_bijective(t: Table) -> bool:
    n = len(t)
    return all(len({t[x][y] for x in range(n)}) == n for y in range(n))


def validate(tables, cap: int = DEFAULT_CAP) -> AxiomReport:
    """
    Check every multi-quandle axiom exhaustively and report all violations.

    Violations are sorted by axiom id, operation indices and witness, then cut
    at ``cap`` (``truncated`` is set when anything was dropped). Malformed
    input raises StructureError rather than producing a report.
    """
    ts = _normalize(tables)
    n, k = len(ts[0]), len(ts)
    found: list[Violation] = []
    rng = range(1, n + 1)
    for i, t in enumerate(ts, 1):
        for x in rng:
            if t[x - 1][x - 1] != x:
                found.append(Violation(IDEMPOTENCY, (i,), (x,)))
        for y in rng:
            seen: dict[int, int] = {}
            for x in rng:
                z = t[x - 1][y - 1]
                if z in seen:
                    found.append(Violation(COLUMN_BIJECTIVITY, (i,), (seen[z], x, y)))
                else:
                    seen[z] = x
    for i, j in itertools.product(range(1, k + 1), repeat=2):
        a, b = ts[i - 1], ts[j - 1]
        axiom = SELF_DISTRIBUTIVITY if i == j else CROSS_DISTRIBUTIVITY
        for x, y, z in itertools.product(range(n), repeat=3):
            lhs = b[a[x][y] - 1][z]
            rhs = a[b[x][z] - 1][b[y][z] - 1]
            if lhs != rhs:
                found.append(Violation(axiom, (i, j), (x + 1, y + 1, z + 1)))
    found.sort()
    return AxiomReport(tuple(found[:cap]), truncated=len(found) > cap)


def _op(tables, i, x, y):
    return tables[i - 1][x - 1][y - 1]


def _violates(v: Violation, tables) -> bool:
    ts = _normalize(tables)
    if v.axiom == IDEMPOTENCY:
        (i,), (x,) = v.ops, v.witness
        return _op(ts, i, x, x) != x
    if v.axiom == COLUMN_BIJECTIVITY:
        (i,), (x1, x2, y) = v.ops, v.witness
        return x1 != x2 and _op(ts, i, x1, y) == _op(ts, i, x2, y)
    if v.axiom in (SELF_DISTRIBUTIVITY, CROSS_DISTRIBUTIVITY):
        (i, j), (x, y, z) = v.ops, v.witness
        return _op(ts, j, _op(ts, i, x, y), z) != _op(ts, i, _op(ts, j, x, z), _op(ts, j, y, z))
    invs = [_inverse_table(t) for t in ts]
    inner, outer = {
        DERIVED_OP_INV: (ts, invs),
        DERIVED_INV_OP: (invs, ts),
        DERIVED_INV_INV: (invs, invs),
    }[v.axiom]
    (i, j), (x, y, z) = v.ops, v.witness
    return _op(outer, j, _op(inner, i, x, y), z) != _op(inner, i, _op(outer, j, x, z), _op(outer, j, y, z))


class MultiQuandle:
    """
    A finite k-quandle on {1..n}; immutable.

    With ``check=True`` (the default) the constructor runs :func:`validate` and
    raises InvalidQuandleError on any violation. ``check=False`` only requires
    bijective columns, which is what the inverse tables need.
    """

    def __init__(self, tables, *, check: bool = True):
        self._tables = _normalize(tables)
        if check:
            report = validate(self._tables)
            if not report.valid:
                raise InvalidQuandleError(f"not a {len(self._tables)}-quandle:\n{report}", report)
        for i, t in enumerate(self._tables, 1):
            if not _column_bijective(t):
                raise InvalidQuandleError(f"table {i} has a non-bijective column")

    @property
    def tables(self) -> tuple[Table, ...]:
        return self._tables

    @property
    def order(self) -> int:
        return len(self._tables[0])

    @property
    def k(self) -> int:
        return len(self._tables)

    @cached_property
    def inverse_tables(self) -> tuple[Table, ...]:
        return tuple(_inverse_table(t) for t in self._tables)

    @cached_property
    def array(self) -> np.ndarray:
        """Zero-based (k, n, n) array: ``array[i, x, y]`` is (x+1) ▷_(i+1) (y+1), minus one."""
        return np.asarray(self._tables, dtype=np.int64) - 1

    @cached_property
    def inverse_array(self) -> np.ndarray:
        return np.asarray(self.inverse_tables, dtype=np.int64) - 1

    def op(self, i: int, x: int, y: int) -> int:
        return self._tables[i - 1][x - 1][y - 1]

    def inv(self, i: int, x: int, y: int) -> int:
        return self.inverse_tables[i - 1][x - 1][y - 1]

    def __eq__(self, other):
        return isinstance(other, MultiQuandle) and self._tables == other._tables

    def __hash__(self):
        return hash(self._tables)

    def __repr__(self):
        return f"MultiQuandle(order={self.order}, k={self.k})"


def invert(mq: MultiQuandle) -> list[Table]:
    """Tables of ▷_i^{-1}: column y of table i is the inverse permutation of column y of ▷_i."""
    return list(mq.inverse_tables)


def check_derived_identities(mq: MultiQuandle, cap: int = DEFAULT_CAP) -> AxiomReport:
    """
    Check the three mixed identities between ▷_i, ▷_j and their inverses.

    For a valid multi-quandle all three hold; this is a self-test. It also runs
    on tables that are only column-bijective, where it reports the failures.
    """
    ts, invs = mq.tables, mq.inverse_tables
    n, k = mq.order, mq.k
    # (x A_i y) B_j z == (x B_j z) A_i (y B_j z) for (A, B) in the three mixed pairs
    cases = (
        (DERIVED_OP_INV, ts, invs),
        (DERIVED_INV_OP, invs, ts),
        (DERIVED_INV_INV, invs, invs),
    )
    found = []
    for axiom, inner, outer in cases:
        for i, j in itertools.product(range(k), repeat=2):
            a, b = inner[i], outer[j]
            for x, y, z in itertools.product(range(n), repeat=3):
                if b[a[x][y] - 1][z] != a[b[x][z] - 1][b[y][z] - 1]:
                    found.append(Violation(axiom, (i + 1, j + 1), (x + 1, y + 1, z + 1)))
    found.sort()
    return AxiomReport(tuple(found[:cap]), truncated=len(found) > cap)


def _affine_tables(modulus, ts, formula) -> MultiQuandle:
    if modulus < 2:
        raise StructureError("modulus must be at least 2")
    ts = list(ts)
    if not ts:
        raise StructureError("need at least one parameter")
    for t in ts:
        if math.gcd(t, modulus) != 1:
            raise StructureError(f"{t} is not a unit mod {modulus}")
    tables = [
        [[formula(t, x, y) % modulus + 1 for y in range(modulus)] for x in range(modulus)]
        for t in ts
    ]
    return MultiQuandle(tables)


def alexander_multi_quandle(modulus: int, ts: Iterable[int]) -> MultiQuandle:
    """x ▷_i y = t_i x + (1 - t_i) y on Z_m, carrier re-indexed to 1..m."""
    return _affine_tables(modulus, ts, lambda t, x, y: t * x + (1 - t) * y)


def conjugation_diquandle(cyclic_order: int, auts: tuple[int, int]) -> MultiQuandle:
    """
    x ▷_i y = σ_i(y)^{-1} σ_i(x) y on the cyclic group Z_m, where σ_i is
    multiplication by the unit u_i; written additively as -u y + u x + y.
    """
    if len(auts) != 2:
        raise StructureError("a diquandle needs exactly two automorphisms")
    return _affine_tables(cyclic_order, auts, lambda u, x, y: -u * y + u * x + y)


def trivial_multi_quandle(order: int, k: int) -> MultiQuandle:
    row = lambda x: [x] * order
    return MultiQuandle([[row(x) for x in range(1, order + 1)] for _ in range(k)])


# -- mq v1 text format -----------------------------------------------------------


def serialize(mq: MultiQuandle, *, include_inverse: bool = False) -> str:
    lines = ["mq v1", f"order {mq.order}", f"k {mq.k}"]
    blocks = [("op", mq.tables)]
    if include_inverse:
        blocks.append(("inv", mq.inverse_tables))
    for tag, tables in blocks:
        for i, t in enumerate(tables, 1):
            lines.append(f"{tag} {i}")
            lines.extend(" ".join(map(str, row)) for row in t)
    return "\n".join(lines) + "\n"


def parse_tables(text: str) -> tuple[list[Table], dict[int, Table]]:
    """Parse mq v1 text into (operation tables, supplied inverse blocks); no axiom checks."""
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.strip().startswith("#")
    ]
    pos = 0

    def take(prefix):
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"unexpected end of input, expected '{prefix}'")
        no, line = lines[pos]
        parts = line.split()
        if parts[0] != prefix:
            raise ParseError(f"expected '{prefix}', got {line!r}", f"line {no}")
        pos += 1
        return no, parts[1:]

    no, rest = take("mq")
    if rest != ["v1"]:
        raise ParseError("unsupported version", f"line {no}")

    def intval(prefix):
        no, rest = take(prefix)
        if len(rest) != 1 or not rest[0].isdigit() or int(rest[0]) < 1:
            raise ParseError(f"'{prefix}' needs one positive integer", f"line {no}")
        return int(rest[0])

    n = intval("order")
    k = intval("k")
    ops: dict[int, Table] = {}
    invs: dict[int, Table] = {}
    while pos < len(lines):
        no, line = lines[pos]
        parts = line.split()
        if parts[0] not in ("op", "inv") or len(parts) != 2 or not parts[1].isdigit():
            raise ParseError(f"expected 'op <i>' or 'inv <i>', got {line!r}", f"line {no}")
        target = ops if parts[0] == "op" else invs
        idx = int(parts[1])
        if not 1 <= idx <= k or idx in target:
            raise ParseError(f"bad or repeated block index {idx}", f"line {no}")
        pos += 1
        rows = []
        for _ in range(n):
            if pos >= len(lines):
                raise ParseError(f"block {parts[0]} {idx} has fewer than {n} rows")
            rno, row = lines[pos]
            try:
                vals = tuple(int(v) for v in row.split())
            except ValueError:
                raise ParseError(f"non-integer entry in {row!r}", f"line {rno}") from None
            if len(vals) != n:
                raise ParseError(f"row has {len(vals)} entries, expected {n}", f"line {rno}")
            rows.append(vals)
            pos += 1
        target[idx] = tuple(rows)
    if sorted(ops) != list(range(1, k + 1)):
        raise ParseError(f"expected op blocks 1..{k}, found {sorted(ops)}")
    return [ops[i] for i in range(1, k + 1)], invs


def parse(text: str, *, check: bool = True) -> MultiQuandle:
    """Parse mq v1 text; supplied ``inv`` blocks must match the derived inverses."""
    tables, invs = parse_tables(text)
    mq = MultiQuandle(tables, check=check)
    for i, given in sorted(invs.items()):
        if given != mq.inverse_tables[i - 1]:
            raise InvalidQuandleError(f"inv block {i} does not match the inverse of op block {i}")
    return mq


def load(path, *, check: bool = True) -> MultiQuandle:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), check=check)
