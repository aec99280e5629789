"""Seeded randomized invariance checks for Markov and Reidemeister moves."""

from __future__ import annotations

import random
from math import gcd
from dataclasses import dataclass, field

from .braids import ClosableBraid, ColoredBraid, conjugate, format_braid, permutation_info, stabilize
from .core import MultiQuandle, alexander_multi_quandle
from .diagrams import (
    ColoredDiagram,
    add_bigon,
    add_kink,
    build_r3_site,
    closure_diagram,
    r3_sites,
    remove_bigon,
    remove_kink,
    slide_r3,
)
from .invariants import count_colorings_braid, count_colorings_diagram

MARKOV_KINDS = ("conjugate", "stabilize+", "stabilize-")
REIDEMEISTER_KINDS = ("R1+", "R1-", "R2", "R3")


@dataclass
class FuzzReport:
    applied: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, kind: str, before: int, after: int, detail: str):
        self.applied[kind] = self.applied.get(kind, 0) + 1
        if before != after:
            self.failures.append(f"{kind}: {before} -> {after} ({detail})")

    def merge(self, other: "FuzzReport"):
        for k, v in other.applied.items():
            self.applied[k] = self.applied.get(k, 0) + v
        self.failures.extend(other.failures)

    def summary(self) -> str:
        lines = [f"{k} applied={v}" for k, v in sorted(self.applied.items())]
        lines += [f"FAIL {f}" for f in self.failures]
        lines.append("ok" if self.ok else f"{len(self.failures)} failures")
        return "\n".join(lines) + "\n"


def random_word(rng: random.Random, strands: int, length: int) -> tuple[int, ...]:
    if strands < 2:
        return ()
    return tuple(rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length))


def random_closable_braid(rng: random.Random, k: int, max_strands: int = 3, max_len: int = 4) -> ClosableBraid:
    """A random word, then one random color per cycle of its permutation."""
    n = rng.randint(1, max_strands)
    word = random_word(rng, n, rng.randint(0, max_len))
    info = permutation_info(ColoredBraid(n, word, (1,) * n))
    colors = [0] * n
    for cyc in info.cycles:
        c = rng.randint(1, k)
        for p in cyc:
            colors[p - 1] = c
    return ClosableBraid(ColoredBraid(n, word, tuple(colors)))


def random_conjugator(rng: random.Random, b: ClosableBraid, max_len: int = 4) -> ColoredBraid:
    """A random braid whose bottom colors match the top colors of ``b``."""
    n = b.strands
    word = random_word(rng, n, rng.randint(0, max_len))
    perm = permutation_info(ColoredBraid(n, word, (1,) * n)).perm
    top = tuple(b.top_colors[perm[j] - 1] for j in range(n))
    return ColoredBraid(n, word, top)


def random_alexander(rng: random.Random, k: int) -> MultiQuandle:
    m = rng.randint(3, 9)
    units = [t for t in range(1, m) if gcd(t, m) == 1]
    return alexander_multi_quandle(m, [rng.choice(units) for _ in range(k)])


def markov_fuzz(mq: MultiQuandle, iters: int, seed: int) -> FuzzReport:
    """Each iteration draws a closable braid and checks one conjugation and a stabilization of each sign."""
    rng = random.Random(seed)
    report = FuzzReport()

    def count(b):
        return count_colorings_braid(b, mq, cap=0).count

    for _ in range(iters):
        b = random_closable_braid(rng, mq.k, max_strands=4, max_len=6)
        base = count(b)
        t = random_conjugator(rng, b)
        c = conjugate(b, t)
        report.record("conjugate", base, count(c), f"{format_braid(b.braid)} by {format_braid(t)}")
        for sign, kind in ((1, "stabilize+"), (-1, "stabilize-")):
            s = stabilize(b, sign)
            report.record(kind, base, count(s), format_braid(b.braid))
    return report


def _random_base(rng: random.Random, k: int) -> ColoredDiagram:
    while True:
        d = closure_diagram(random_closable_braid(rng, k, max_strands=3, max_len=4))
        if len(d.arcs) >= 3:
            return d


def reidemeister_fuzz(mq: MultiQuandle, iters: int, seed: int, *, restart: int = 8) -> FuzzReport:
    """
    Walk randomly through diagrams, checking R1±, R2 and R3 at every step.

    R1 and R2 are also undone, and the undo must give back the original
    diagram exactly. When no positive R3 triangle exists one is first built
    from three R2 moves.
    """
    rng = random.Random(seed)
    report = FuzzReport()

    def count(d):
        return count_colorings_diagram(d, mq, cap=0).count

    d = None
    for it in range(iters):
        if it % restart == 0:
            d = _random_base(rng, mq.k)
        base = count(d)
        arcs = d.arcs
        moved = {}
        for kind, sign in (("R1+", 1), ("R1-", -1)):
            arc = rng.choice(arcs)
            e = add_kink(d, arc, sign)
            report.record(kind, base, count(e), f"arc {arc}")
            if remove_kink(e, len(e.crossings) - 1) != d:
                report.failures.append(f"{kind}: undo at arc {arc} did not restore the diagram")
            moved[kind] = e

        over, under = rng.sample(arcs, 2)
        sign = rng.choice((1, -1))
        e = add_bigon(d, over, under, sign)
        report.record("R2", base, count(e), f"over {over} under {under} sign {sign}")
        n = len(e.crossings)
        if remove_bigon(e, n - 2, n - 1) != d:
            report.failures.append(f"R2: undo at ({over}, {under}) did not restore the diagram")
        moved["R2"] = e

        sites = r3_sites(d)
        if sites:
            start, site = d, rng.choice(sites)
            start_count = base
        else:
            start, site = build_r3_site(d, *rng.sample(arcs, 3))
            start_count = count(start)
        e = slide_r3(start, site)
        report.record("R3", start_count, count(e), f"triangle {site}")
        moved["R3"] = e

        d = moved[rng.choice(sorted(moved))]
    return report


def random_quandle_suite(base: MultiQuandle, extra: int, seed: int) -> list[MultiQuandle]:
    """``base`` followed by ``extra`` random Alexander multi-quandles with the same number of operations."""
    rng = random.Random(seed)
    return [base] + [random_alexander(rng, base.k) for _ in range(extra)]
