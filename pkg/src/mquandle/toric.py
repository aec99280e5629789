"""
Fixed points of affine circle multi-quandles, solved exactly on the torus.

Angles are stored as fractions of a full turn: the value ``Fraction(1, 2)``
stands for π. A system row ``(c, r)`` means Σ c_i θ_i ≡ r (mod 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Sequence

from .braids import ClosableBraid
from .errors import ParseError, StructureError

Matrix = list[list[int]]


@dataclass(frozen=True)
class AffineCircleQuandle:
    """θ ▷_i φ = t_i θ + (1 − t_i) φ on R/2πZ, with each t_i = ±1."""

    ts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ts", tuple(int(t) for t in self.ts))
        if not self.ts:
            raise StructureError("need at least one operation")
        if any(t not in (1, -1) for t in self.ts):
            raise StructureError(f"circle operations need t = ±1, got {self.ts}")

    @property
    def k(self) -> int:
        return len(self.ts)


@dataclass(frozen=True)
class ToricRow:
    coeffs: tuple[int, ...]
    rhs: Fraction  # in turns, reduced mod 1

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs) % 1)

    def holds(self, theta: Sequence[Fraction]) -> bool:
        return (sum(c * t for c, t in zip(self.coeffs, theta)) - self.rhs) % 1 == 0


@dataclass(frozen=True)
class ToricAffineSystem:
    nvars: int
    rows: tuple[ToricRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.nvars < 0:
            raise StructureError("nvars must be non-negative")
        for r in self.rows:
            if len(r.coeffs) != self.nvars:
                raise StructureError(f"row has {len(r.coeffs)} coefficients for {self.nvars} variables")

    @classmethod
    def of(cls, nvars: int, rows: Sequence[tuple[Sequence[int], object]]) -> "ToricAffineSystem":
        return cls(nvars, tuple(ToricRow(tuple(c), Fraction(r)) for c, r in rows))

    def holds(self, theta: Sequence[Fraction]) -> bool:
        return all(r.holds(theta) for r in self.rows)


@dataclass(frozen=True)
class ToricSolution:
    """
    Solution set in the coordinates θ = V·s.

    The first ``len(choices)`` coordinates of s each take one of finitely
    many listed values; the remaining ``dimension`` coordinates are free.
    """

    nonempty: bool
    dimension: int
    components: int
    basis: tuple[tuple[int, ...], ...] = ()  # V, row-major
    choices: tuple[tuple[Fraction, ...], ...] = ()

    def point(self, picks: Sequence[int], free: Sequence[Fraction]) -> tuple[Fraction, ...]:
        s = [self.choices[i][p] for i, p in enumerate(picks)] + list(free)
        return tuple(sum(v * x for v, x in zip(row, s)) % 1 for row in self.basis)

    def contains(self, theta: Sequence[Fraction]) -> bool:
        if not self.nonempty:
            return False
        s = _solve_rational(self.basis, list(theta))
        return all(s[i] % 1 in allowed for i, allowed in enumerate(self.choices))


def format_solution(sol: ToricSolution) -> str:
    if not sol.nonempty:
        return "empty"
    return f"nonempty dim={sol.dimension} components={sol.components}"


# -- Smith normal form -------------------------------------------------------------


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """
    Return (U, D, V) with U·A·V = D, U and V unimodular, and D diagonal with
    non-negative entries each dividing the next.
    """
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    d = [list(map(int, row)) for row in a]
    u, v = _identity(m), _identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row dst += f * row src
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for row in d:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        nz = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: fold any entry not divisible by the pivot into row t
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % d[t][t]), None
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


def _solve_rational(a: Sequence[Sequence[int]], b: list) -> list[Fraction]:
    """Solve the square nonsingular system a·x = b exactly."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n] for row in m]


# -- solving -----------------------------------------------------------------------


def solve_toric(sys: ToricAffineSystem) -> ToricSolution:
    n = sys.nvars
    a = [list(r.coeffs) for r in sys.rows]
    rhs = [r.rhs for r in sys.rows]
    u, d, v = smith_normal_form(a, n)
    ur = [sum(x * y for x, y in zip(row, rhs)) for row in u]
    rank = sum(1 for i in range(min(len(a), n)) if d[i][i])
    if any(ur[i] % 1 for i in range(rank, len(a))):
        return ToricSolution(False, 0, 0)
    choices = []
    for i in range(rank):
        di = d[i][i]
        choices.append(tuple(sorted(((ur[i] + j) / di) % 1 for j in range(di))))
    return ToricSolution(
        True,
        n - rank,
        prod(len(c) for c in choices),
        tuple(tuple(row) for row in v),
        tuple(choices),
    )


# -- braid encoding ----------------------------------------------------------------


def encode_braid_fixed_points(b: ClosableBraid, q: AffineCircleQuandle) -> ToricAffineSystem:
    """
    Push the affine forms θ_1..θ_n through the braid; each strand gives the
    row (output_j − θ_j) ≡ 0. Both circle operations are involutions in the
    first argument, so ▷^{-1} acts like ▷.
    """
    if not isinstance(b, ClosableBraid):
        b = ClosableBraid(b)
    n = b.strands
    if any(c > q.k for c in b.top_colors):
        raise StructureError(f"braid uses color {max(b.top_colors)} but the quandle has {q.k} operations")

    def op(j, x, y):
        t = q.ts[j - 1]
        return tuple(t * xi + (1 - t) * yi for xi, yi in zip(x, y))

    forms = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    colors = list(b.top_colors)
    for g in b.word:
        i = abs(g) - 1
        x, y = forms[i], forms[i + 1]
        if g > 0:
            forms[i], forms[i + 1] = y, op(colors[i + 1], x, y)
        else:
            forms[i], forms[i + 1] = op(colors[i], y, x), x
        colors[i], colors[i + 1] = colors[i + 1], colors[i]
    rows = []
    for j, f in enumerate(forms):
        c = tuple(x - int(i == j) for i, x in enumerate(f))
        if any(c):
            rows.append(ToricRow(c, Fraction(0)))
    return ToricAffineSystem(n, tuple(rows))


# -- verification ------------------------------------------------------------------


def _random_angle(rng: random.Random) -> Fraction:
    q = rng.randint(1, 997)
    return Fraction(rng.randrange(q), q)


def _nonzero_maximal_minor(a: Sequence[Sequence[int]]) -> int:
    """|det| of some rank x rank minor of a (1 when a has rank 0), by exact elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        det *= m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return abs(int(det))


def _grid_step(sys: ToricAffineSystem) -> int:
    # every solution component meets (1/N)Z^n for N = lcm(rhs denominators) * (gcd of maximal minors);
    # any nonzero maximal minor is a multiple of that gcd
    den = 1
    for r in sys.rows:
        den = lcm(den, r.rhs.denominator)
    return den * _nonzero_maximal_minor([r.coeffs for r in sys.rows])


def sample_verify(
    sys: ToricAffineSystem, sol: ToricSolution, samples: int = 100, rng: random.Random | None = None
) -> bool:
    """
    Spot-check a claimed solution: random points drawn from the claimed
    components must satisfy every row, and random points outside the claim
    must violate at least one row.

    Half of the outside points lie on a grid that meets every true component,
    so a claim that drops a lower-dimensional component is caught with
    positive probability per sample.
    """
    rng = rng or random.Random(0)
    n = sys.nvars
    if sol.nonempty:
        if len(sol.basis) != n or len(sol.choices) + sol.dimension != n:
            return False
        for _ in range(samples):
            picks = [rng.randrange(len(c)) for c in sol.choices]
            free = [_random_angle(rng) for _ in range(sol.dimension)]
            if not sys.holds(sol.point(picks, free)):
                return False
    if sol.nonempty and sol.dimension == n:
        return True
    step = _grid_step(sys)
    for i in range(samples):
        if i % 2:
            theta = [_random_angle(rng) for _ in range(n)]
        else:
            theta = [Fraction(rng.randrange(step), step) for _ in range(n)]
        if sol.contains(theta):
            continue
        if sys.holds(theta):
            return False
    return True


# -- toric v1 text format ----------------------------------------------------------


def parse_toric(text: str) -> ToricAffineSystem:
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines or lines[0][1] != "toric v1":
        raise ParseError("expected header 'toric v1'", f"line {lines[0][0]}" if lines else None)
    if len(lines) < 2:
        raise ParseError("missing 'vars <n>' line")
    no, line = lines[1]
    parts = line.split()
    if len(parts) != 2 or parts[0] != "vars" or not parts[1].isdigit():
        raise ParseError(f"expected 'vars <n>', got {line!r}", f"line {no}")
    n = int(parts[1])
    rows = []
    for no, line in lines[2:]:
        parts = line.split()
        if not parts or parts[0] != "eq" or "=" not in parts:
            raise ParseError(f"expected 'eq c1 .. cn = p/q', got {line!r}", f"line {no}")
        eq = parts.index("=")
        coeffs, rhs = parts[1:eq], parts[eq + 1 :]
        if len(coeffs) != n or len(rhs) != 1:
            raise ParseError(f"row needs {n} coefficients and one right-hand side", f"line {no}")
        try:
            c = tuple(int(x) for x in coeffs)
            p, _, qq = rhs[0].partition("/")
            den = int(qq) if qq else 1
            if den <= 0:
                raise ValueError
            r = Fraction(int(p), den)
        except ValueError:
            raise ParseError(f"bad number in {line!r}", f"line {no}") from None
        rows.append(ToricRow(c, r))
    return ToricAffineSystem(n, tuple(rows))


def serialize_toric(sys: ToricAffineSystem) -> str:
    out = ["toric v1", f"vars {sys.nvars}"]
    for r in sys.rows:
        out.append("eq " + " ".join(map(str, r.coeffs)) + f" = {r.rhs.numerator}/{r.rhs.denominator}")
    return "\n".join(out) + "\n"


def load_toric(path) -> ToricAffineSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_toric(fh.read())
