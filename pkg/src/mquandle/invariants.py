"""
Coloring invariants of colored links.

Two independent engines count colorings by a finite multi-quandle X:

* fixed points of the colored-braid action on X^n (braid mode), and
* exhaustive constraint solving on a diagram's crossing relations (diagram mode).

Both count the X-colorings of the closed link.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .braids import ClosableBraid, ColoredBraid, juxtapose
from .core import MultiQuandle
from .diagrams import ColoredDiagram, closure_with_top_arcs
from .errors import MQError, StructureError

SOLUTION_CAP = 10**6
ENUMERATION_LIMIT = 10**7
CHUNK = 1 << 18


@dataclass(frozen=True)
class ColoringSet:
    carrier: MultiQuandle
    variables: tuple
    count: int
    _solutions: tuple | None = field(default=None, repr=False)
    source: object = field(default=None, repr=False, compare=False)

    @property
    def truncated(self) -> bool:
        return self._solutions is None

    @property
    def solutions(self) -> tuple[tuple[int, ...], ...]:
        if self._solutions is None:
            raise MQError(f"{self.count} solutions exceed the listing cap; only the count was kept")
        return self._solutions

    def __len__(self):
        return self.count

    def verify(self) -> bool:
        """Re-check every stored solution against the defining equations of its source."""
        if isinstance(self.source, ColoredDiagram):
            index = {a: i for i, a in enumerate(self.variables)}
            return all(_satisfies(self.source, self.carrier, index, s) for s in self.solutions)
        b = self.source
        return all(braid_action(b, self.carrier, s) == s for s in self.solutions)


def format_results(cs: ColoringSet, list_solutions: bool = False) -> str:
    lines = [f"count {cs.count}"]
    if list_solutions:
        lines.extend("solution " + ",".join(map(str, s)) for s in cs.solutions)
    return "\n".join(lines) + "\n"


def _check_colors(colors, mq: MultiQuandle):
    bad = [c for c in colors if c > mq.k]
    if bad:
        raise StructureError(f"color {bad[0]} exceeds the {mq.k} operations of the quandle")


# -- braid mode --------------------------------------------------------------------


def braid_action(b: ColoredBraid | ClosableBraid, mq: MultiQuandle, x: Sequence[int]) -> tuple[int, ...]:
    """
    Push a tuple of X^n through the braid, letter by letter from the top.

    σ_i sends (x_i, x_{i+1}) to (x_{i+1}, x_i ▷_{v_{i+1}} x_{i+1}); σ_i^{-1}
    sends it to (x_{i+1} ▷^{-1}_{v_i} x_i, x_i), where v is the color tuple at
    the current level.
    """
    if isinstance(b, ClosableBraid):
        b = b.braid
    if len(x) != b.strands:
        raise StructureError(f"input has {len(x)} entries for {b.strands} strands")
    if any(not 1 <= v <= mq.order for v in x):
        raise StructureError(f"entries must lie in 1..{mq.order}")
    _check_colors(b.top_colors, mq)
    x = list(x)
    v = list(b.top_colors)
    for g in b.word:
        i = abs(g) - 1
        if g > 0:
            x[i], x[i + 1] = x[i + 1], mq.op(v[i + 1], x[i], x[i + 1])
        else:
            x[i], x[i + 1] = mq.inv(v[i], x[i + 1], x[i]), x[i]
        v[i], v[i + 1] = v[i + 1], v[i]
    return tuple(x)


def _fixed_in_range(args):
    strands, word, colors, tables, inv_tables, order, lo, hi = args
    idx = np.arange(lo, hi, dtype=np.int64)
    x0 = []
    for j in range(strands):
        x0.append((idx // order ** (strands - 1 - j)) % order)
    x = list(x0)
    v = list(colors)
    for g in word:
        i = abs(g) - 1
        if g > 0:
            x[i], x[i + 1] = x[i + 1], tables[v[i + 1] - 1][x[i], x[i + 1]]
        else:
            x[i], x[i + 1] = inv_tables[v[i] - 1][x[i + 1], x[i]], x[i]
        v[i], v[i + 1] = v[i + 1], v[i]
    mask = np.ones(len(idx), dtype=bool)
    for a, b in zip(x, x0):
        mask &= a == b
    return idx[mask]


def _workers(workers):
    if workers is None:
        workers = int(os.environ.get("MQ_WORKERS", "1") or 1)
    return max(1, workers)


def count_colorings_braid(
    b: ClosableBraid,
    mq: MultiQuandle,
    *,
    cap: int = SOLUTION_CAP,
    workers: int | None = None,
    enumeration_limit: int = ENUMERATION_LIMIT,
) -> ColoringSet:
    """
    All x in X^n fixed by the braid action; variables are strand positions.

    Small spaces (|X|^n up to ``enumeration_limit``) are enumerated in
    vectorized chunks, split across ``workers`` processes and merged in index
    order. Larger ones are solved on the closure diagram.
    """
    if not isinstance(b, ClosableBraid):
        b = ClosableBraid(b)
    _check_colors(b.top_colors, mq)
    n, order = b.strands, mq.order
    variables = tuple(range(1, n + 1))
    total = order**n
    if total > enumeration_limit:
        d, tops = closure_with_top_arcs(b)
        cs = count_colorings_diagram(d, mq, cap=cap)
        cols = [cs.variables.index(a) for a in tops]
        sols = None if cs.truncated else tuple(sorted(tuple(s[c] for c in cols) for s in cs.solutions))
        return ColoringSet(mq, variables, cs.count, sols, b)
    tables = [np.asarray(t) for t in mq.array]
    inv_tables = [np.asarray(t) for t in mq.inverse_array]
    bounds = list(range(0, total, CHUNK)) + [total]
    jobs = [
        (n, b.word, b.top_colors, tables, inv_tables, order, lo, hi)
        for lo, hi in zip(bounds[:-1], bounds[1:])
    ]
    w = _workers(workers)
    if w > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=w) as ex:
            parts = list(ex.map(_fixed_in_range, jobs))
    else:
        parts = [_fixed_in_range(j) for j in jobs]
    hits = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    count = int(len(hits))
    sols = None
    if count <= cap:
        digits = [(hits // order ** (n - 1 - j)) % order + 1 for j in range(n)]
        sols = tuple(zip(*(d.tolist() for d in digits))) if n else ((),) * count
    return ColoringSet(mq, variables, count, sols, b)


# -- diagram mode ----------------------------------------------------------------


def _satisfies(d: ColoredDiagram, mq: MultiQuandle, index, values) -> bool:
    for c in d.crossings:
        j = d.color_of(c.over)
        x, y, z = values[index[c.under_in]], values[index[c.over]], values[index[c.under_out]]
        want = mq.op(j, x, y) if c.sign > 0 else mq.inv(j, x, y)
        if want != z:
            return False
    return True


class _Solver:
    """Propagation with fail-first backtracking over arc values (0-based internally)."""

    def __init__(self, d: ColoredDiagram, mq: MultiQuandle):
        self.n = mq.order
        self.arcs = d.arcs
        index = {a: i for i, a in enumerate(self.arcs)}
        fwd = [[list(r) for r in (np.asarray(t) - 1).tolist()] for t in mq.tables]
        inv = [[list(r) for r in (np.asarray(t) - 1).tolist()] for t in mq.inverse_tables]
        self.cons = []
        self.touch = [[] for _ in self.arcs]
        masks = {}
        for c in d.crossings:
            j = d.color_of(c.over) - 1
            F, B = (fwd[j], inv[j]) if c.sign > 0 else (inv[j], fwd[j])
            key = (j, c.sign)
            if key not in masks:
                # over values y with F[x][y] == z, as bitmasks indexed [x][z]
                m = [[0] * self.n for _ in range(self.n)]
                for x in range(self.n):
                    for y in range(self.n):
                        m[x][F[x][y]] |= 1 << y
                masks[key] = m
            con = (index[c.over], index[c.under_in], index[c.under_out], F, B, masks[key])
            ci = len(self.cons)
            self.cons.append(con)
            for a in {con[0], con[1], con[2]}:
                self.touch[a].append(ci)

    def _set(self, val, dom, queue, a, v):
        if val[a] >= 0:
            return val[a] == v
        if not dom[a] >> v & 1:
            return False
        val[a] = v
        dom[a] = 1 << v
        queue.append(a)
        return True

    def _propagate(self, val, dom, queue) -> bool:
        while queue:
            a = queue.pop()
            for ci in self.touch[a]:
                o, i, z, F, B, M = self.cons[ci]
                vo, vi, vz = val[o], val[i], val[z]
                if vo >= 0 and vi >= 0:
                    if not self._set(val, dom, queue, z, F[vi][vo]):
                        return False
                elif vo >= 0 and vz >= 0:
                    if not self._set(val, dom, queue, i, B[vz][vo]):
                        return False
                elif vi >= 0 and vz >= 0:
                    m = dom[o] & M[vi][vz]
                    if not m:
                        return False
                    if m != dom[o]:
                        dom[o] = m
                        if m & (m - 1) == 0:
                            if not self._set(val, dom, queue, o, m.bit_length() - 1):
                                return False
        return True

    def solve(self, cap):
        count = 0
        sols = []
        full = (1 << self.n) - 1
        A = len(self.arcs)
        stack = [([-1] * A, [full] * A, None)]
        while stack:
            val, dom, pending = stack.pop()
            if pending is not None:
                a, v = pending
                queue = []
                if not self._set(val, dom, queue, a, v) or not self._propagate(val, dom, queue):
                    continue
            best, best_size = -1, self.n + 1
            for a in range(A):
                if val[a] < 0:
                    size = bin(dom[a]).count("1")
                    if size < best_size:
                        best, best_size = a, size
            if best < 0:
                count += 1
                if count <= cap:
                    sols.append(tuple(v + 1 for v in val))
                continue
            m = dom[best]
            vs = [v for v in range(self.n) if m >> v & 1]
            for v in reversed(vs):
                stack.append((list(val), list(dom), (best, v)))
        return count, sols


def count_colorings_diagram(d: ColoredDiagram, mq: MultiQuandle, *, cap: int = SOLUTION_CAP) -> ColoringSet:
    """All arc colorings satisfying every crossing relation; variables are the diagram's arcs in traversal order."""
    _check_colors([c.color for c in d.components], mq)
    count, sols = _Solver(d, mq).solve(cap)
    stored = tuple(sorted(sols)) if count <= cap else None
    return ColoringSet(mq, d.arcs, count, stored, d)


# -- presentation ----------------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Apply:
    left: object
    right: object
    op: int
    inverse: bool = False

    def __str__(self):
        sym = f"▷{self.op}" + ("^-1" if self.inverse else "")
        def wrap(w):
            return f"({w})" if isinstance(w, Apply) else str(w)
        return f"{wrap(self.left)} {sym} {wrap(self.right)}"


@dataclass(frozen=True)
class Relation:
    lhs: str
    rhs: object

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[Relation, ...]

    def __str__(self):
        gens = ", ".join(self.generators)
        rels = "; ".join(map(str, self.relations))
        return f"< {gens} | {rels} >"


def evaluate(word, assignment: dict, mq: MultiQuandle) -> int:
    if isinstance(word, Gen):
        return assignment[word.name]
    x, y = evaluate(word.left, assignment, mq), evaluate(word.right, assignment, mq)
    return mq.inv(word.op, x, y) if word.inverse else mq.op(word.op, x, y)


def extract_presentation(d: ColoredDiagram) -> Presentation:
    """Generators are arcs; each crossing gives ``out = in ▷^{±1}_j over`` with j the over arc's color."""
    rels = tuple(
        Relation(c.under_out, Apply(Gen(c.under_in), Gen(c.over), d.color_of(c.over), c.sign < 0))
        for c in d.crossings
    )
    return Presentation(d.arcs, rels)


# -- disjoint sums ---------------------------------------------------------------


@dataclass(frozen=True)
class DisjointUnionResult:
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def disjoint_union_check(b1: ClosableBraid, b2: ClosableBraid, mq: MultiQuandle) -> DisjointUnionResult:
    """Fixed points of b1 beside b2 versus the product of the separate counts."""
    both = ClosableBraid(juxtapose(b1.braid, b2.braid))
    lhs = count_colorings_braid(both, mq, cap=0).count
    rhs = count_colorings_braid(b1, mq, cap=0).count * count_colorings_braid(b2, mq, cap=0).count
    return DisjointUnionResult(lhs, rhs)
