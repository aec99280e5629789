"""
Colored link diagrams as arc/crossing incidence data.

A diagram stores no planar embedding: components are cyclic lists of arcs in
orientation order, and each crossing records its sign, its over arc, and the
under arcs entering and leaving it. The coloring rule at a crossing is
``out = in ▷_j over`` (positive) or ``out = in ▷_j^{-1} over`` (negative),
with j the color of the over arc's component.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Sequence

from .braids import ClosableBraid
from .errors import DiagramError, MoveError, ParseError


@dataclass(frozen=True)
class Crossing:
    sign: int
    over: str
    under_in: str
    under_out: str

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DiagramError(f"crossing sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class Component:
    id: str
    color: int
    arcs: tuple[str, ...]


@dataclass(frozen=True)
class ColoredDiagram:
    components: tuple[Component, ...]
    crossings: tuple[Crossing, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        _check(self)

    @cached_property
    def arcs(self) -> tuple[str, ...]:
        return tuple(a for c in self.components for a in c.arcs)

    @cached_property
    def component_of(self) -> dict[str, Component]:
        return {a: c for c in self.components for a in c.arcs}

    def color_of(self, arc: str) -> int:
        return self.component_of[arc].color

    def next_arc(self, arc: str) -> str:
        arcs = self.component_of[arc].arcs
        return arcs[(arcs.index(arc) + 1) % len(arcs)]

    def crossing_ending(self, arc: str) -> int | None:
        """Index of the crossing where ``arc`` passes under and ends, if any."""
        for idx, c in enumerate(self.crossings):
            if c.under_in == arc:
                return idx
        return None

    def over_uses(self, arc: str) -> list[int]:
        return [idx for idx, c in enumerate(self.crossings) if c.over == arc]

    def canonical(self) -> "ColoredDiagram":
        """Rename arcs 1..N in traversal order and sort crossings by their incoming under arc."""
        names = {a: str(i) for i, a in enumerate(self.arcs, 1)}
        comps = tuple(Component(c.id, c.color, tuple(names[a] for a in c.arcs)) for c in self.components)
        xs = sorted(
            (Crossing(c.sign, names[c.over], names[c.under_in], names[c.under_out]) for c in self.crossings),
            key=lambda c: int(c.under_in),
        )
        return ColoredDiagram(comps, tuple(xs))


def _check(d: ColoredDiagram):
    owner = {}
    ids = set()
    for comp in d.components:
        if comp.id in ids:
            raise DiagramError(f"duplicate component id {comp.id!r}")
        ids.add(comp.id)
        if comp.color < 1:
            raise DiagramError(f"component {comp.id} has color {comp.color}")
        if not comp.arcs:
            raise DiagramError(f"component {comp.id} has no arcs")
        for a in comp.arcs:
            if a in owner:
                raise DiagramError(f"arc {a!r} belongs to more than one component")
            owner[a] = comp
    ins, outs = {}, {}
    for idx, c in enumerate(d.crossings):
        for a in (c.over, c.under_in, c.under_out):
            if a not in owner:
                raise DiagramError(f"crossing {idx + 1} refers to unknown arc {a!r}")
        if owner[c.under_in] is not owner[c.under_out]:
            raise DiagramError(f"crossing {idx + 1}: under arcs lie on different components")
        arcs = owner[c.under_in].arcs
        if arcs[(arcs.index(c.under_in) + 1) % len(arcs)] != c.under_out:
            raise DiagramError(f"crossing {idx + 1}: {c.under_out!r} does not follow {c.under_in!r}")
        if c.under_in in ins:
            raise DiagramError(f"arc {c.under_in!r} enters more than one crossing")
        if c.under_out in outs:
            raise DiagramError(f"arc {c.under_out!r} leaves more than one crossing")
        ins[c.under_in] = idx
        outs[c.under_out] = idx
    for comp in d.components:
        under = sum(1 for a in comp.arcs if a in ins)
        if len(comp.arcs) > 1 and under != len(comp.arcs):
            raise DiagramError(f"component {comp.id}: {len(comp.arcs)} arcs but {under} under-crossings")


def diagram(components: Sequence[tuple[str, int, Sequence[str]]], crossings: Sequence[tuple]) -> ColoredDiagram:
    """Convenience constructor from plain tuples ``(id, color, arcs)`` and ``(sign, over, in, out)``."""
    return ColoredDiagram(
        tuple(Component(str(i), int(c), tuple(arcs)) for i, c, arcs in components),
        tuple(Crossing(int(s), o, a, b) for s, o, a, b in crossings),
    )


# -- diag v1 text format ----------------------------------------------------------

_COMPONENT = re.compile(r"component\s+(\S+)\s+color\s+(\d+)\s+arcs\s+(\S+)$")
_CROSSING = re.compile(r"x\s+([+-])\s+over=(\S+)\s+in=(\S+)\s+out=(\S+)$")


def serialize_diagram(d: ColoredDiagram) -> str:
    lines = ["diag v1", f"components {len(d.components)}"]
    for c in d.components:
        lines.append(f"component {c.id} color {c.color} arcs {','.join(c.arcs)}")
    lines.append(f"crossings {len(d.crossings)}")
    for c in d.crossings:
        lines.append(f"x {'+' if c.sign > 0 else '-'} over={c.over} in={c.under_in} out={c.under_out}")
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> ColoredDiagram:
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.strip().startswith("#")
    ]
    it = iter(lines)

    def expect_count(word):
        try:
            no, line = next(it)
        except StopIteration:
            raise ParseError(f"missing '{word} <n>' line") from None
        parts = line.split()
        if len(parts) != 2 or parts[0] != word or not parts[1].isdigit():
            raise ParseError(f"expected '{word} <n>', got {line!r}", f"line {no}")
        return int(parts[1])

    try:
        no, header = next(it)
    except StopIteration:
        raise ParseError("empty diagram text") from None
    if header != "diag v1":
        raise ParseError(f"expected 'diag v1', got {header!r}", f"line {no}")
    comps = []
    for _ in range(expect_count("components")):
        no, line = next(it, (None, ""))
        m = _COMPONENT.match(line)
        if not m:
            raise ParseError(f"bad component line {line!r}", f"line {no}")
        comps.append(Component(m.group(1), int(m.group(2)), tuple(m.group(3).split(","))))
    xs = []
    for _ in range(expect_count("crossings")):
        no, line = next(it, (None, ""))
        m = _CROSSING.match(line)
        if not m:
            raise ParseError(f"bad crossing line {line!r}", f"line {no}")
        xs.append(Crossing(1 if m.group(1) == "+" else -1, m.group(2), m.group(3), m.group(4)))
    extra = next(it, None)
    if extra is not None:
        raise ParseError(f"trailing content {extra[1]!r}", f"line {extra[0]}")
    return ColoredDiagram(tuple(comps), tuple(xs))


# -- PD codes ----------------------------------------------------------------------

_PD_TERM = re.compile(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_pd(text: str) -> list[tuple[int, int, int, int]]:
    body = text.strip()
    if body.startswith("PD[") and body.endswith("]"):
        body = body[3:-1]
    terms = []
    pos = 0
    for m in _PD_TERM.finditer(body):
        gap = body[pos:m.start()].replace(",", " ").strip()
        if gap:
            raise ParseError(f"unexpected text {gap!r} in PD code", f"char {pos}")
        terms.append(tuple(int(v) for v in m.groups()))
        pos = m.end()
    if body[pos:].replace(",", " ").strip():
        raise ParseError(f"unexpected text {body[pos:]!r} in PD code", f"char {pos}")
    if not terms:
        raise ParseError("PD code has no X[...] terms")
    return terms


def pd_components(terms) -> tuple[list[list[int]], dict[int, tuple[int, int]]]:
    """
    Orient a PD code. Returns the components as edge cycles (ordered by least
    edge label, each starting at it) and, per crossing, the over edge pair as
    (entering, leaving).
    """
    count = {}
    for t in terms:
        for e in t:
            count[e] = count.get(e, 0) + 1
    bad = sorted(e for e, c in count.items() if c != 2)
    if bad:
        raise DiagramError(f"PD edges must each appear exactly twice; offending: {bad}")
    succ = {}
    for a, _, c, _ in terms:
        if a in succ:
            raise DiagramError(f"edge {a} enters two crossings as under strand")
        succ[a] = c
    over = {}
    pending = set(range(len(terms)))
    while pending:
        progressed = False
        heads, tails = set(succ), set(succ.values())
        for idx in sorted(pending):
            _, b, _, d = terms[idx]
            if b in tails or d in heads:
                over[idx] = (b, d)
            elif d in tails or b in heads:
                over[idx] = (d, b)
            else:
                continue
            pending.discard(idx)
            progressed = True
            e_in, e_out = over[idx]
            if e_in in succ:
                raise DiagramError(f"edge {e_in} is entered twice; inconsistent PD orientation")
            succ[e_in] = e_out
            heads, tails = set(succ), set(succ.values())
        if not progressed:
            # a component that only passes over: orient by consecutive labels
            idx = min(pending)
            _, b, _, d = terms[idx]
            over[idx] = (b, d) if d == b + 1 or (b > d + 1) else (d, b)
            pending.discard(idx)
            succ[over[idx][0]] = over[idx][1]
    if sorted(succ) != sorted(count) or sorted(succ.values()) != sorted(count):
        raise DiagramError("PD code does not describe closed oriented components")
    seen = set()
    comps = []
    for e in sorted(succ):
        if e in seen:
            continue
        cyc = []
        while e not in seen:
            seen.add(e)
            cyc.append(e)
            e = succ[e]
        comps.append(cyc)
    return comps, over


def from_pd_code(text: str, component_colors: Sequence[int]) -> ColoredDiagram:
    """
    Build a colored diagram from PD notation.

    ``X[a,b,c,d]`` lists edges counter-clockwise from the incoming under edge
    a, so the under strand runs a -> c. The crossing is positive when the over
    strand runs d -> b and negative when it runs b -> d. Components are ordered
    by their least edge label; arcs are named after their first edge.
    """
    terms = parse_pd(text) if isinstance(text, str) else [tuple(t) for t in text]
    comps, over = pd_components(terms)
    if len(component_colors) != len(comps):
        raise DiagramError(f"{len(component_colors)} colors for {len(comps)} components")
    arc_start = {c for _, _, c, _ in terms}
    arc_of = {}
    components = []
    for ci, cyc in enumerate(comps):
        starts = [i for i, e in enumerate(cyc) if e in arc_start]
        if not starts:
            name = str(cyc[0])
            for e in cyc:
                arc_of[e] = name
            arcs = [name]
        else:
            rot = cyc[starts[0]:] + cyc[:starts[0]]
            arcs = []
            for e in rot:
                if e in arc_start:
                    arcs.append(str(e))
                arc_of[e] = arcs[-1]
            # traversal starts at the arc holding the component's least edge
            lead = arcs.index(arc_of[cyc[0]])
            arcs = arcs[lead:] + arcs[:lead]
        components.append(Component(str(ci + 1), int(component_colors[ci]), tuple(arcs)))
    crossings = []
    for idx, (a, b, c, d) in enumerate(terms):
        sign = 1 if over[idx] == (d, b) else -1
        crossings.append(Crossing(sign, arc_of[b], arc_of[a], arc_of[c]))
    return ColoredDiagram(tuple(components), tuple(crossings))


def parse_pd_input(text: str) -> tuple[str, list[int]]:
    """Parse the ``pd "<X[..] ...>" colors=<c1,...>`` input line."""
    m = re.fullmatch(r'\s*pd\s+"([^"]*)"\s+colors=([\d,]+)\s*', text)
    if not m:
        raise ParseError('expected: pd "<X[..] X[..] ...>" colors=<c1,...,cm>')
    return m.group(1), [int(c) for c in m.group(2).split(",") if c]


# -- braid closure ---------------------------------------------------------------


def closure_diagram(b: ClosableBraid) -> ColoredDiagram:
    """
    The standard closure diagram of a closable braid.

    Top arcs are named ``t<pos>`` and the arc created below the i-th letter is
    ``c<i>``; an arc that reaches the bottom is identified with the top arc at
    the same position.
    """
    return closure_with_top_arcs(b)[0]


def closure_with_top_arcs(b: ClosableBraid) -> tuple[ColoredDiagram, list[str]]:
    """Closure diagram plus the arc crossing the top of each strand position."""
    n = b.strands
    cur = [f"t{p}" for p in range(1, n + 1)]
    strand_at = list(range(n))
    strand_arcs = [[f"t{p}"] for p in range(1, n + 1)]
    raw = []
    for li, g in enumerate(b.word, 1):
        i = abs(g) - 1
        new = f"c{li}"
        if g > 0:
            raw.append((1, cur[i + 1], cur[i], new))
            strand_arcs[strand_at[i]].append(new)
            cur[i], cur[i + 1] = cur[i + 1], new
        else:
            raw.append((-1, cur[i], cur[i + 1], new))
            strand_arcs[strand_at[i + 1]].append(new)
            cur[i], cur[i + 1] = new, cur[i]
        strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]

    parent = {}

    def find(a):
        while parent.get(a, a) != a:
            a = parent[a]
        return a

    def rank(a):
        return (0, int(a[1:])) if a[0] == "t" else (1, int(a[1:]))

    for p in range(n):
        x, y = find(cur[p]), find(f"t{p + 1}")
        if x != y:
            lo, hi = sorted((x, y), key=rank)
            parent[hi] = lo

    info_perm = [0] * n
    for pos in range(n):
        info_perm[strand_at[pos]] = pos
    components = []
    seen = set()
    for start in range(n):
        if start in seen:
            continue
        seq = []
        s = start
        while s not in seen:
            seen.add(s)
            seq.extend(find(a) for a in strand_arcs[s])
            s = info_perm[s]
        arcs = []
        for a in seq:
            if not arcs or arcs[-1] != a:
                arcs.append(a)
        while len(arcs) > 1 and arcs[-1] == arcs[0]:
            arcs.pop()
        components.append(Component(str(len(components) + 1), b.top_colors[start], tuple(arcs)))
    crossings = tuple(Crossing(s, find(o), find(u), find(w)) for s, o, u, w in raw)
    tops = [find(f"t{p}") for p in range(1, n + 1)]
    return ColoredDiagram(tuple(components), crossings), tops


# -- Reidemeister moves ------------------------------------------------------------


def _fresh(d: ColoredDiagram, base: str, taken=()) -> str:
    used = set(d.arcs) | set(taken)
    i = 1
    while f"{base}.{i}" in used:
        i += 1
    return f"{base}.{i}"


def _insert_after(d: ColoredDiagram, arc: str, new: Sequence[str]) -> tuple[Component, ...]:
    out = []
    for c in d.components:
        if arc in c.arcs:
            i = c.arcs.index(arc)
            c = replace(c, arcs=c.arcs[: i + 1] + tuple(new) + c.arcs[i + 1:])
        out.append(c)
    return tuple(out)


def _rename(c: Crossing, old: str, new: str, *, over=True, under_in=True) -> Crossing:
    return Crossing(
        c.sign,
        new if over and c.over == old else c.over,
        new if under_in and c.under_in == old else c.under_in,
        c.under_out,
    )


def add_kink(d: ColoredDiagram, arc: str, sign: int) -> ColoredDiagram:
    """R1: twist ``arc`` so it passes under itself; a new arc follows it and the new crossing has ``arc`` as over arc."""
    if arc not in d.component_of:
        raise MoveError(f"unknown arc {arc!r}")
    end = d.crossing_ending(arc)
    if end is None and len(d.component_of[arc].arcs) == 1:
        # crossing-free loop: the kink closes the loop on itself
        return ColoredDiagram(d.components, d.crossings + (Crossing(sign, arc, arc, arc),))
    new = _fresh(d, arc)
    xs = list(d.crossings)
    xs[end] = replace(xs[end], under_in=new)
    xs.append(Crossing(sign, arc, arc, new))
    return ColoredDiagram(_insert_after(d, arc, [new]), tuple(xs))


def remove_kink(d: ColoredDiagram, index: int) -> ColoredDiagram:
    """Inverse R1 at crossing ``index`` (its over arc must be one of its own under arcs)."""
    c = d.crossings[index]
    if c.over not in (c.under_in, c.under_out):
        raise MoveError(f"crossing {index} is not a kink")
    rest = d.crossings[:index] + d.crossings[index + 1:]
    if c.under_in == c.under_out:
        return ColoredDiagram(d.components, rest)
    keep, gone = c.under_in, c.under_out
    xs = tuple(_rename(x, gone, keep) for x in rest)
    comps = tuple(replace(k, arcs=tuple(a for a in k.arcs if a != gone)) for k in d.components)
    return ColoredDiagram(comps, xs)


def add_bigon(d: ColoredDiagram, over: str, under: str, sign: int = 1) -> ColoredDiagram:
    """
    R2: push ``under`` beneath ``over``. The under arc gains two new arcs; the
    first new crossing has sign ``sign``, the second the opposite sign.
    Over passages of ``under`` stay on its first piece.
    """
    for a in (over, under):
        if a not in d.component_of:
            raise MoveError(f"unknown arc {a!r}")
    if over == under:
        raise MoveError("R2 needs two distinct arcs")
    if sign not in (1, -1):
        raise MoveError("sign must be +1 or -1")
    end = d.crossing_ending(under)
    mid = _fresh(d, under)
    xs = list(d.crossings)
    if end is None and len(d.component_of[under].arcs) == 1:
        xs += [Crossing(sign, over, under, mid), Crossing(-sign, over, mid, under)]
        return ColoredDiagram(_insert_after(d, under, [mid]), tuple(xs))
    last = _fresh(d, under, taken=[mid])
    xs[end] = replace(xs[end], under_in=last)
    xs += [Crossing(sign, over, under, mid), Crossing(-sign, over, mid, last)]
    return ColoredDiagram(_insert_after(d, under, [mid, last]), tuple(xs))


def remove_bigon(d: ColoredDiagram, first: int, second: int) -> ColoredDiagram:
    """Inverse R2 at two crossings sharing an over arc, opposite signs, joined by an arc with no over passages."""
    c1, c2 = d.crossings[first], d.crossings[second]
    if first == second or c1.over != c2.over or c1.sign != -c2.sign or c1.under_out != c2.under_in:
        raise MoveError(f"crossings {first}, {second} do not form an R2 bigon")
    mid = c1.under_out
    if d.over_uses(mid):
        raise MoveError(f"arc {mid!r} inside the bigon passes over another strand")
    keep, gone = c1.under_in, c2.under_out
    if keep == mid or gone == mid:
        raise MoveError("degenerate bigon")
    rest = [x for i, x in enumerate(d.crossings) if i not in (first, second)]
    drop = {mid} if gone == keep else {mid, gone}
    if gone != keep:
        rest = [_rename(x, gone, keep) for x in rest]
    comps = tuple(replace(k, arcs=tuple(a for a in k.arcs if a not in drop)) for k in d.components)
    return ColoredDiagram(comps, tuple(rest))


def _r3_pattern(d: ColoredDiagram, ia: int, ib: int, ic: int):
    """
    Return the rewritten (crossing a, crossing c) if (ia, ib, ic) is a legal
    positive R3 triangle, else None. Crossings a and c are the successive under
    passages of the bottom strand, crossing b is the middle strand passing under
    the top strand.
    """
    if len({ia, ib, ic}) != 3:
        return None
    a, b, c = d.crossings[ia], d.crossings[ib], d.crossings[ic]
    if (a.sign, b.sign, c.sign) != (1, 1, 1) or a.under_out != c.under_in:
        return None
    b2 = a.under_out
    if b2 in (a.under_in, c.under_out, b.under_in, b.under_out, b.over) or d.over_uses(b2):
        return None
    if b.over == b.under_in or b.over == b.under_out:
        return None
    if a.over == b.under_in and c.over == b.over:
        # bottom strand meets middle (before it passes under top) first
        return Crossing(1, b.over, a.under_in, b2), Crossing(1, b.under_out, b2, c.under_out)
    if a.over == b.over and c.over == b.under_out:
        # bottom strand meets top first, then the middle strand's lower arc
        return Crossing(1, b.under_in, a.under_in, b2), Crossing(1, b.over, b2, c.under_out)
    return None


def r3_sites(d: ColoredDiagram) -> list[tuple[int, int, int]]:
    sites = []
    r = range(len(d.crossings))
    for ia in r:
        a = d.crossings[ia]
        if a.sign != 1:
            continue
        ic = d.crossing_ending(a.under_out)
        if ic is None:
            continue
        for ib in r:
            if _r3_pattern(d, ia, ib, ic) is not None:
                sites.append((ia, ib, ic))
    return sites


def slide_r3(d: ColoredDiagram, site: tuple[int, int, int]) -> ColoredDiagram:
    """R3 on an all-positive triangle: move the top strand across the other crossing."""
    ia, ib, ic = site
    got = _r3_pattern(d, ia, ib, ic)
    if got is None:
        raise MoveError(f"crossings {site} do not form a positive R3 triangle")
    xs = list(d.crossings)
    xs[ia], xs[ic] = got
    return ColoredDiagram(d.components, tuple(xs))


MOVES = ("R1+", "R1-", "R2", "R3", "R1^-1", "R2^-1")


def apply_reidemeister(d: ColoredDiagram, move: str, site, sign: int = 1) -> ColoredDiagram:
    """
    Apply a colored Reidemeister move.

    ``R1+``/``R1-``: site is an arc. ``R2``: site is (over arc, under arc), with
    ``sign`` the sign of the first new crossing. ``R3``: site is a triple of
    crossing indices (see :func:`r3_sites`). ``R1^-1`` takes a crossing index
    and ``R2^-1`` a pair of crossing indices.
    """
    if move == "R1+":
        return add_kink(d, site, 1)
    if move == "R1-":
        return add_kink(d, site, -1)
    if move == "R2":
        over, under = site
        return add_bigon(d, over, under, sign)
    if move == "R3":
        return slide_r3(d, tuple(site))
    if move == "R1^-1":
        return remove_kink(d, site)
    if move == "R2^-1":
        return remove_bigon(d, *site)
    raise MoveError(f"unknown move {move!r}; expected one of {', '.join(MOVES)}")


def build_r3_site(d: ColoredDiagram, top: str, middle: str, bottom: str):
    """
    Use three R2 moves to create a positive R3 triangle among three distinct
    arcs. Returns the new diagram and the triangle's crossing indices.
    """
    if len({top, middle, bottom}) != 3:
        raise MoveError("R3 construction needs three distinct arcs")
    d = add_bigon(d, middle, bottom, 1)
    ia = len(d.crossings) - 2
    b2 = d.crossings[ia].under_out
    d = add_bigon(d, top, b2, 1)
    ic = len(d.crossings) - 2
    d = add_bigon(d, top, middle, 1)
    ib = len(d.crossings) - 2
    return d, (ia, ib, ic)
