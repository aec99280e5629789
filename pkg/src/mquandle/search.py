"""
Enumeration of small quandles and their assembly into multi-quandles.

A quandle on {1..n} is determined by its columns σ_y = (x ↦ x ▷ y): each is a
permutation fixing y, and self-distributivity says
σ_z σ_y σ_z^{-1} = σ_{σ_z(y)}. The enumerator assigns columns one at a time
and propagates that identity, which forces many columns outright.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .core import MultiQuandle, Table, serialize
from .errors import StructureError

SOFT_CAP = 6
LABELED = "all-labeled"
ISO = "up-to-isomorphism"


@dataclass(frozen=True)
class SearchSpec:
    order: int
    k: int = 1
    mode: str = LABELED
    allow_large: bool = False

    def __post_init__(self):
        if self.order < 1 or self.k < 1:
            raise StructureError("order and k must be positive")
        if self.mode not in (LABELED, ISO):
            raise StructureError(f"mode must be {LABELED!r} or {ISO!r}")
        if self.order > SOFT_CAP and not self.allow_large:
            raise StructureError(f"order {self.order} exceeds the soft cap {SOFT_CAP}; pass the override to proceed")


# Columns are 0-based tuples internally: col[y][x] = x ▷ y.


def _propagate(cols: list) -> bool:
    changed = True
    while changed:
        changed = False
        done = [z for z, c in enumerate(cols) if c is not None]
        for z in done:
            sz = cols[z]
            inv = [0] * len(sz)
            for x, v in enumerate(sz):
                inv[v] = x
            for y in done:
                sy = cols[y]
                w = sz[y]
                forced = tuple(sz[sy[inv[x]]] for x in range(len(sz)))
                if cols[w] is None:
                    cols[w] = forced
                    changed = True
                elif cols[w] != forced:
                    return False
            if changed:
                break
    return True


def _column_choices(n: int, y: int) -> list[tuple[int, ...]]:
    others = [x for x in range(n) if x != y]
    out = []
    for p in itertools.permutations(others):
        col = list(p)
        col.insert(y, y)
        out.append(tuple(col))
    return out


def _extend(cols: list, choices) -> Iterator[tuple]:
    y = next((i for i, c in enumerate(cols) if c is None), None)
    if y is None:
        yield tuple(cols)
        return
    for c in choices[y]:
        trial = list(cols)
        trial[y] = c
        if _propagate(trial):
            yield from _extend(trial, choices)


def _subtree(args) -> list[tuple]:
    n, first = args
    cols = [None] * n
    cols[0] = first
    if not _propagate(cols):
        return []
    choices = [_column_choices(n, y) for y in range(n)]
    return list(_extend(cols, choices))


def _to_table(cols: Sequence[Sequence[int]]) -> Table:
    n = len(cols)
    return tuple(tuple(cols[y][x] + 1 for y in range(n)) for x in range(n))


@lru_cache(maxsize=None)
def _perm_arrays(n: int):
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    return perms, np.argsort(perms, axis=1)


def canonical_form(table: Table) -> Table:
    """Lexicographically least relabeling of ``table`` over all permutations of {1..n}."""
    n = len(table)
    perms, inv = _perm_arrays(n)
    t = np.asarray(table, dtype=np.int64) - 1
    # relabeled[p][a][b] = p(t[p^-1 a][p^-1 b])
    moved = t[inv[:, :, None], inv[:, None, :]]
    relabeled = np.take_along_axis(perms, moved.reshape(len(perms), -1), axis=1)
    rows = np.arange(len(perms))
    for col in range(n * n):
        vals = relabeled[rows, col]
        rows = rows[vals == vals.min()]
        if len(rows) == 1:
            break
    best = relabeled[rows[0]].reshape(n, n) + 1
    return tuple(tuple(int(v) for v in r) for r in best)


def enumerate_quandles(
    order: int, mode: str = LABELED, *, allow_large: bool = False, workers: int | None = None
) -> list[Table]:
    """All quandle tables of the given order (or one canonical representative per isomorphism class), sorted."""
    SearchSpec(order, 1, mode, allow_large)
    n = order
    jobs = [(n, c) for c in _column_choices(n, 0)]
    if workers is None:
        workers = int(os.environ.get("MQ_WORKERS", "1") or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_subtree, jobs))
    else:
        parts = [_subtree(j) for j in jobs]
    tables = sorted({_to_table(cols) for part in parts for cols in part})
    if mode == ISO:
        tables = sorted({canonical_form(t) for t in tables})
    return tables


def cross_distributive(a: Table, b: Table) -> bool:
    """(x ▷_a y) ▷_b z = (x ▷_b z) ▷_a (y ▷_b z) for all x, y, z."""
    n = len(a)
    for x in range(n):
        for y in range(n):
            xy = a[x][y] - 1
            for z in range(n):
                if b[xy][z] != a[b[x][z] - 1][b[y][z] - 1]:
                    return False
    return True


def assemble_multi_quandles(tables: Sequence[Table], k: int) -> Iterator[MultiQuandle]:
    """Every ordered k-tuple (repetition allowed) of ``tables`` whose ordered pairs are all cross-distributive."""
    tables = [tuple(tuple(r) for r in t) for t in tables]
    if len({len(t) for t in tables}) > 1:
        raise StructureError("all tables must share one order")
    m = len(tables)
    ok = [[cross_distributive(tables[i], tables[j]) for j in range(m)] for i in range(m)]

    def grow(prefix):
        if len(prefix) == k:
            yield MultiQuandle([tables[i] for i in prefix])
            return
        for j in range(m):
            if all(ok[i][j] and ok[j][i] for i in prefix) and ok[j][j]:
                yield from grow(prefix + [j])

    yield from grow([])


def write_search(spec: SearchSpec, out_dir, *, workers: int | None = None) -> dict:
    """
    Write one ``mq v1`` file per multi-quandle assembled from the enumerated
    quandles, plus ``manifest.txt`` with the counts. With ISO mode the
    assembly runs over isomorphism representatives only.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    quandles = enumerate_quandles(spec.order, spec.mode, allow_large=spec.allow_large, workers=workers)
    results = list(assemble_multi_quandles(quandles, spec.k))
    width = max(4, len(str(len(results))))
    names = []
    for idx, mq in enumerate(results, 1):
        name = f"mq-{idx:0{width}d}.mq"
        (out / name).write_text(serialize(mq), encoding="utf-8")
        names.append(name)
    summary = {
        "order": spec.order,
        "k": spec.k,
        "mode": spec.mode,
        "quandles": len(quandles),
        "multi-quandles": len(results),
    }
    lines = [f"{key} {val}" for key, val in summary.items()] + [f"file {n}" for n in names]
    (out / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return summary

