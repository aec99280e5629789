"""
Colored braids.

Strands run top to bottom; word letters are read top to bottom. Letter ``+i``
is σ_i, where the strand at position i+1 crosses over to position i; ``-i`` is
σ_i^{-1}, where the strand at position i crosses over to position i+1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import ClosureError, ParseError, StructureError


@dataclass(frozen=True)
class ColoredBraid:
    strands: int
    word: tuple[int, ...]
    top_colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(g) for g in self.word))
        object.__setattr__(self, "top_colors", tuple(int(c) for c in self.top_colors))
        if self.strands < 1:
            raise StructureError("a braid needs at least one strand")
        for pos, g in enumerate(self.word):
            if g == 0 or abs(g) >= self.strands:
                raise StructureError(f"letter {g} at word position {pos + 1} is outside ±1..±{self.strands - 1}")
        if len(self.top_colors) != self.strands:
            raise StructureError(f"{len(self.top_colors)} colors for {self.strands} strands")
        if any(c < 1 for c in self.top_colors):
            raise StructureError("colors are positive integers")

    @property
    def bottom_colors(self) -> tuple[int, ...]:
        return permutation_info(self).bottom_colors

    def colors_at_levels(self):
        """Yield the color tuple above each letter, then the bottom tuple."""
        v = list(self.top_colors)
        for g in self.word:
            yield tuple(v)
            i = abs(g) - 1
            v[i], v[i + 1] = v[i + 1], v[i]
        yield tuple(v)

    def __str__(self):
        return format_braid(self)


@dataclass(frozen=True)
class ClosableBraid:
    """A colored braid whose bottom colors equal its top colors."""

    braid: ColoredBraid

    def __post_init__(self):
        info = permutation_info(self.braid)
        for cyc in info.cycles:
            colors = {self.braid.top_colors[p - 1] for p in cyc}
            if len(colors) > 1:
                raise ClosureError(
                    "cycle {%s} carries colors {%s}"
                    % (",".join(map(str, cyc)), ",".join(map(str, sorted(colors))))
                )

    @property
    def strands(self):
        return self.braid.strands

    @property
    def word(self):
        return self.braid.word

    @property
    def top_colors(self):
        return self.braid.top_colors

    def __str__(self):
        return format_braid(self.braid)


@dataclass(frozen=True)
class PermutationInfo:
    perm: tuple[int, ...]  # perm[j-1] is the bottom position of the strand starting at top position j
    cycles: tuple[tuple[int, ...], ...]
    bottom_colors: tuple[int, ...]


def permutation_info(b: ColoredBraid | ClosableBraid) -> PermutationInfo:
    b = _plain(b)
    n = b.strands
    at = list(range(1, n + 1))  # at[pos] = top position of the strand now at pos
    for g in b.word:
        i = abs(g) - 1
        at[i], at[i + 1] = at[i + 1], at[i]
    perm = [0] * n
    for pos, start in enumerate(at, 1):
        perm[start - 1] = pos
    seen = set()
    cycles = []
    for start in range(1, n + 1):
        if start in seen:
            continue
        cyc = []
        p = start
        while p not in seen:
            seen.add(p)
            cyc.append(p)
            p = perm[p - 1]
        cycles.append(tuple(cyc))
    bottom = tuple(b.top_colors[s - 1] for s in at)
    return PermutationInfo(tuple(perm), tuple(cycles), bottom)


def check_closable(b: ColoredBraid) -> ClosableBraid:
    return ClosableBraid(_plain(b))


def _plain(b) -> ColoredBraid:
    return b.braid if isinstance(b, ClosableBraid) else b


def inverse(b: ColoredBraid) -> ColoredBraid:
    """The mirror-in-time braid: reversed word with letters negated, starting from b's bottom colors."""
    b = _plain(b)
    return ColoredBraid(b.strands, tuple(-g for g in reversed(b.word)), b.bottom_colors)


def compose(*braids: ColoredBraid) -> ColoredBraid:
    """Stack braids top to bottom; each bottom color tuple must match the next top tuple."""
    bs = [_plain(b) for b in braids]
    first = bs[0]
    word = list(first.word)
    bottom = first.bottom_colors
    for b in bs[1:]:
        if b.strands != first.strands:
            raise ClosureError("cannot compose braids with different strand counts")
        if b.top_colors != bottom:
            raise ClosureError(f"color interface mismatch: {bottom} above {b.top_colors}")
        word.extend(b.word)
        bottom = b.bottom_colors
    return ColoredBraid(first.strands, tuple(word), first.top_colors)


def conjugate(b: ClosableBraid, t: ColoredBraid) -> ClosableBraid:
    """Markov conjugation: t · b · t^{-1}, with the top colors of t."""
    t = _plain(t)
    if t.strands != b.strands:
        raise ClosureError(f"conjugator has {t.strands} strands, braid has {b.strands}")
    if t.bottom_colors != b.top_colors:
        raise ClosureError(f"conjugator bottom colors {t.bottom_colors} != braid top colors {b.top_colors}")
    return ClosableBraid(compose(t, b.braid, inverse(t)))


def stabilize(b: ClosableBraid, sign: int = 1) -> ClosableBraid:
    """Markov stabilization: append σ_n^{±1} below b on a new strand carrying the color of strand n."""
    if sign not in (1, -1):
        raise StructureError("sign must be +1 or -1")
    n = b.strands
    word = b.word + (sign * n,)
    return ClosableBraid(ColoredBraid(n + 1, word, b.top_colors + (b.top_colors[-1],)))


def juxtapose(b1: ColoredBraid, b2: ColoredBraid) -> ColoredBraid:
    """b1 beside b2 (b2's strands to the right)."""
    b1, b2 = _plain(b1), _plain(b2)
    shift = b1.strands
    word = b1.word + tuple(g + shift if g > 0 else g - shift for g in b2.word)
    return ColoredBraid(b1.strands + b2.strands, word, b1.top_colors + b2.top_colors)


def trivial_braid(colors: Sequence[int]) -> ClosableBraid:
    return ClosableBraid(ColoredBraid(len(colors), (), tuple(colors)))


# -- text grammar ----------------------------------------------------------------

_FIELD = re.compile(r"(\w+)=(\S*)")


def parse_braid(spec: str, k: int | None = None) -> ColoredBraid:
    """
    Parse ``strands=<n> word=<i,j,...> colors=<c1,...,cn>``.

    ``k``, when given, bounds the colors. Errors carry the character offset of
    the offending field.
    """
    fields = {}
    pos = 0
    text = spec.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _FIELD.match(text, pos)
        if not m:
            raise ParseError(f"expected key=value in {text!r}", f"char {pos}")
        key = m.group(1)
        if key not in ("strands", "word", "colors") or key in fields:
            raise ParseError(f"unexpected or repeated field {key!r}", f"char {pos}")
        fields[key] = (m.group(2), pos)
        pos = m.end()
    for key in ("strands", "word", "colors"):
        if key not in fields:
            raise ParseError(f"missing field {key!r}")

    def ints(key):
        raw, at = fields[key]
        if raw == "":
            return []
        try:
            return [int(v) for v in raw.split(",")]
        except ValueError:
            raise ParseError(f"{key} must be comma-separated integers, got {raw!r}", f"char {at}") from None

    strands = ints("strands")
    if len(strands) != 1 or strands[0] < 1:
        raise ParseError("strands must be one positive integer", f"char {fields['strands'][1]}")
    n = strands[0]
    word = ints("word")
    for idx, g in enumerate(word):
        if g == 0 or abs(g) >= n:
            raise ParseError(
                f"letter {g} (word position {idx + 1}) outside ±1..±{n - 1}", f"char {fields['word'][1]}"
            )
    colors = ints("colors")
    if len(colors) != n:
        raise ParseError(f"{len(colors)} colors for {n} strands", f"char {fields['colors'][1]}")
    for c in colors:
        if c < 1 or (k is not None and c > k):
            bound = f"1..{k}" if k is not None else "positive integers"
            raise ParseError(f"color {c} outside {bound}", f"char {fields['colors'][1]}")
    return ColoredBraid(n, tuple(word), tuple(colors))


def format_braid(b: ColoredBraid) -> str:
    b = _plain(b)
    return "strands={} word={} colors={}".format(
        b.strands, ",".join(map(str, b.word)), ",".join(map(str, b.top_colors))
    )
