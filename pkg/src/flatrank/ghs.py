"""Generalized horizontal strips: finding them inside a tableau and adding them on top of one.

A generalized horizontal strip (GHS) is a set of cells, at most one per column.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import factorial, prod
from typing import Sequence

from .combinatorics import Partition, Tableau, composition
from .straighten import FormalSum, Key, straighten_keys


class GHSNotFound(ValueError):
    pass


@dataclass(frozen=True)
class StripSelection:
    """Cells ``(row, col)`` of a tableau, no two in one column, with their letters."""

    cells: tuple[tuple[int, int, int], ...]  # (row, col, letter)

    def __post_init__(self):
        cells = tuple(sorted((int(r), int(c), int(x)) for r, c, x in self.cells))
        object.__setattr__(self, "cells", cells)
        cols = [c for _, c, _ in cells]
        if len(set(cols)) != len(cols):
            raise ValueError("two strip cells share a column")

    def content(self, num_letters: int) -> tuple[int, ...]:
        counts = [0] * num_letters
        for _, _, x in self.cells:
            counts[x] += 1
        return tuple(counts)

    def positions(self) -> frozenset[tuple[int, int]]:
        return frozenset((r, c) for r, c, _ in self.cells)

    def to_json(self) -> str:
        return json.dumps([list(c) for c in self.cells])


def _check_selection(t: Tableau, sel: StripSelection, nu: Sequence[int]) -> None:
    for r, c, x in sel.cells:
        if t.rows[r][c] != x:
            raise AssertionError(f"cell ({r},{c}) holds {t.rows[r][c]}, not {x}")
    if sel.content(len(nu)) != tuple(nu):
        raise AssertionError(f"strip content {sel.content(len(nu))} != {tuple(nu)}")


def all_ghs(t: Tableau, nu: Sequence[int]) -> list[StripSelection]:
    """Every GHS of ``t`` with content ``nu`` (letter i occurs ``nu[i]`` times), by brute force."""
    cells = [(r, c, x) for r, row in enumerate(t.rows) for c, x in enumerate(row)]
    if len(cells) > 16:
        raise ValueError("brute-force GHS search is limited to 16 cells")
    nu = tuple(nu)
    size = sum(nu)
    wanted = [x for x in range(len(nu)) for _ in range(nu[x])]
    if size > len(cells) or any(x >= len(nu) and False for x in wanted):
        return []
    wanted_sorted = sorted(wanted)
    out = []
    for subset in combinations(cells, size):
        if sorted(x for _, _, x in subset) != wanted_sorted:
            continue
        if len({c for _, c, _ in subset}) != size:
            continue
        out.append(StripSelection(subset))
    return out


def _blocks(shape: Partition) -> list[list[int]]:
    """Group column indices into runs of equal height, tallest first."""
    conj = shape.conjugate()
    blocks: list[list[int]] = []
    for c, h in enumerate(conj):
        if blocks and conj[blocks[-1][0]] == h:
            blocks[-1].append(c)
        else:
            blocks.append([c])
    return blocks


def find_ghs(t: Tableau, nu: Sequence[int], *, record: list | None = None) -> StripSelection:
    """Find a GHS with content ``nu`` in ``t``.

    Blocks of equal-height columns are visited from the shortest (rightmost)
    to the tallest.  Each column of a block takes the smallest letter it holds
    that is still demanded.  When a later block cannot cover a demand, earlier
    choices are traded back along an alternating path (a column gives up its
    letter for another letter it holds, freeing the first for someone else),
    which is the swap step of the block-by-block argument.

    ``record``, if given, receives one string per block with the letters chosen
    there, in visiting order.
    """
    nu = tuple(nu)
    letters = len(nu)
    cols = t.columns
    demand = list(nu)
    chosen: dict[int, int] = {}  # column -> letter
    for block in reversed(_blocks(t.shape)):
        picked = []
        for c in block:
            for x in cols[c]:
                if x < letters and demand[x] > 0:
                    chosen[c] = x
                    demand[x] -= 1
                    picked.append(x)
                    break
        if record is not None:
            record.append("".join(map(str, picked)))
    # swap-backs: route every unmet demand through an augmenting path
    for x in range(letters):
        while demand[x] > 0:
            if not _augment(cols, chosen, x):
                raise GHSNotFound(f"no GHS with content {nu} in {t}")
            demand[x] -= 1
    cells = []
    for c, x in chosen.items():
        r = cols[c].index(x)
        cells.append((r, c, x))
    sel = StripSelection(tuple(cells))
    _check_selection(t, sel, nu)
    return sel


def _augment(cols, chosen: dict[int, int], letter: int) -> bool:
    """Give ``letter`` one more column, re-routing existing choices if needed."""
    seen: set[int] = set()

    def visit(x: int) -> bool:
        for c, col in enumerate(cols):
            if c in seen or x not in col:
                continue
            seen.add(c)
            y = chosen.get(c)
            if y is None or visit(y):
                chosen[c] = x
                return True
        return False

    return visit(letter)


def strip_cells(shape: Sequence[int], d: int) -> list[tuple[int, int]]:
    """Cells of the skew shape (d, shape)/shape, one at the foot of each of the first d columns."""
    shape = Partition(shape)
    if shape and d < shape[0]:
        raise ValueError(f"degree {d} is smaller than the first row {shape[0]}")
    conj = shape.conjugate()
    return [(conj[c] if c < len(conj) else 0, c) for c in range(d)]


def place_keys(columns: Sequence[tuple[int, ...]], d: int, alpha: Sequence[int]) -> dict[Key, int]:
    """Append the letters of ``alpha`` to the feet of the first ``d`` columns in every arrangement.

    ``columns`` must be sorted columns.  Returns canonical (not yet straightened)
    fillings with their signed labeled-Pieri multiplicities.
    """
    alpha = list(alpha)
    if sum(alpha) != d:
        raise ValueError(f"content {alpha} does not have size {d}")
    cols = list(columns) + [()] * (d - len(columns))
    weight = prod(factorial(a) for a in alpha)
    out: dict[Key, int] = {}
    new_cols: list[tuple[int, ...]] = [()] * d
    remaining = alpha[:]
    nletters = len(alpha)
    tail = tuple(cols[d:])

    def rec(c: int, sign: int) -> None:
        if c == d:
            key = _sort_runs(new_cols, tail)
            out[key] = out.get(key, 0) + sign * weight
            return
        col = cols[c]
        for x in range(nletters):
            if not remaining[x] or x in col:
                continue
            above = 0
            pos = len(col)
            while pos and col[pos - 1] > x:
                pos -= 1
                above += 1
            new_cols[c] = col[:pos] + (x,) + col[pos:]
            remaining[x] -= 1
            rec(c + 1, -sign if above & 1 else sign)
            remaining[x] += 1

    rec(0, 1)
    return {k: v for k, v in out.items() if v}


def _sort_runs(new_cols, tail) -> Key:
    cols = list(new_cols) + list(tail)
    i, n = 0, len(cols)
    while i < n:
        j = i + 1
        h = len(cols[i])
        while j < n and len(cols[j]) == h:
            j += 1
        if j - i > 1:
            cols[i:j] = sorted(cols[i:j])
        i = j
    return tuple(cols)


def place_ghs(t: Tableau, alpha: Sequence[int]) -> FormalSum:
    """Labeled Pieri product of ``t`` with the monomial of exponent ``alpha``, restricted to shape (d, shape)."""
    alpha = composition(alpha)
    d = sum(alpha)
    if t.shape and d < t.shape[0]:
        raise ValueError(f"degree {d} is smaller than the first row {t.shape[0]}")
    if t.rows and max(t.reading_word()) >= len(alpha):
        alpha = composition(alpha, max(t.reading_word()) + 1)
    target = Partition((d,) + tuple(t.shape))
    return FormalSum.from_keys(target, straighten_keys(place_keys(t.columns, d, alpha)))
