"""Partitions, tableaux, semistandard enumeration and dimension counts.

Letters are 0-based integers.  A tableau is stored row by row; the
straightening code works with columns and converts at the boundary.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import accumulate
from math import prod
from typing import Iterable, Iterator, Sequence

import networkx as nx


class Partition(tuple):
    """Weakly decreasing tuple of positive integers (trailing zeros trimmed)."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"{parts} is not weakly decreasing")
        return super().__new__(cls, parts)

    def size(self) -> int:
        return sum(self)

    def conjugate(self) -> Partition:
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, length in enumerate(self):
            for j in range(length):
                yield i, j

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


def composition(entries: Iterable[int], length: int | None = None) -> tuple[int, ...]:
    """Nonnegative integer vector, optionally zero-padded to ``length``."""
    entries = tuple(int(e) for e in entries)
    if any(e < 0 for e in entries):
        raise ValueError(f"negative entry in {entries}")
    if length is not None:
        if len(entries) > length and any(entries[length:]):
            raise ValueError(f"{entries} does not fit in length {length}")
        entries = (entries + (0,) * length)[:length]
    return entries


def dominates(a: Sequence[int], b: Sequence[int], *, equal_totals: bool = True) -> bool:
    """True iff every prefix sum of ``b`` is at most the matching prefix sum of ``a``.

    With ``equal_totals`` (ordinary dominance) the totals must also agree.
    Sequences are zero padded to a common length.
    """
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    if equal_totals and sum(a) != sum(b):
        return False
    return all(pb <= pa for pa, pb in zip(accumulate(a), accumulate(b)))


def hook_lengths(shape: Sequence[int]) -> list[list[int]]:
    shape = Partition(shape)
    conj = shape.conjugate()
    return [[shape[i] - j + conj[j] - i - 1 for j in range(shape[i])] for i in range(len(shape))]


def hook_dim(shape: Sequence[int], num_vars: int) -> int:
    """Dimension of the Schur module of ``shape`` over a ``num_vars``-dimensional space."""
    shape = Partition(shape)
    hooks = hook_lengths(shape)
    num = prod(num_vars + j - i for i, j in shape.cells())
    den = prod(h for row in hooks for h in row)
    if num <= 0:
        return 0
    assert num % den == 0
    return num // den


@dataclass(frozen=True)
class Tableau:
    """A filled Young diagram; ``rows[i][j]`` is the letter in row i, column j."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        rows = tuple(r for r in rows if r)
        object.__setattr__(self, "rows", rows)
        Partition(len(r) for r in rows)  # validates the shape

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> Tableau:
        height = max((len(c) for c in columns), default=0)
        rows = [[c[i] for c in columns if len(c) > i] for i in range(height)]
        return cls(tuple(tuple(r) for r in rows))

    @cached_property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    @cached_property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        width = len(self.rows[0]) if self.rows else 0
        return tuple(tuple(r[j] for r in self.rows if len(r) > j) for j in range(width))

    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def reading_word(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def content(self, num_letters: int | None = None) -> tuple[int, ...]:
        word = self.reading_word()
        if num_letters is None:
            num_letters = max(word, default=-1) + 1
        counts = [0] * num_letters
        for x in word:
            counts[x] += 1
        return tuple(counts)

    def is_semistandard(self) -> bool:
        rows = self.rows
        for i, r in enumerate(rows):
            if any(r[j] > r[j + 1] for j in range(len(r) - 1)):
                return False
            if i and any(rows[i - 1][j] >= r[j] for j in range(len(r))):
                return False
        return True

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.rows], separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> Tableau:
        return cls(tuple(tuple(r) for r in json.loads(text)))

    def __str__(self) -> str:
        return "/".join("".join(map(str, r)) if max(r) < 10 else ",".join(map(str, r)) for r in self.rows)

    def __lt__(self, other: Tableau) -> bool:
        return (self.shape, self.reading_word()) < (other.shape, other.reading_word())


def tableau(text: str) -> Tableau:
    """Parse the compact ``"00/1"`` notation (single-digit letters)."""
    if not text:
        return Tableau(())
    return Tableau(tuple(tuple(int(ch) for ch in row) for row in text.split("/")))


def enumerate_ssyt(shape: Sequence[int], alphabet_max: int, *, start: int = 0) -> list[Tableau]:
    """All semistandard tableaux of ``shape`` with letters in ``start..alphabet_max``.

    The result is sorted lexicographically by row-major reading word.
    """
    shape = Partition(shape)
    cells = list(shape.cells())
    grid = [[0] * r for r in shape]
    out: list[Tableau] = []

    def fill(k: int) -> None:
        if k == len(cells):
            out.append(Tableau(tuple(tuple(r) for r in grid)))
            return
        i, j = cells[k]
        lo = start
        if j:
            lo = max(lo, grid[i][j - 1])
        if i:
            lo = max(lo, grid[i - 1][j] + 1)
        # letters below need room to keep increasing down the column
        hi = alphabet_max - (sum(1 for r in shape[i + 1:] if r > j))
        for x in range(lo, hi + 1):
            grid[i][j] = x
            fill(k + 1)

    fill(0)
    return out


def content(t: Tableau, num_letters: int | None = None) -> tuple[int, ...]:
    return t.content(num_letters)


def contragradient(t: Tableau, box_rows: int, box_cols: int) -> Tableau:
    """Column-wise complement of ``t`` inside a ``box_rows`` x ``box_cols`` box.

    Letters live in ``0..box_rows-1``; output column ``box_cols-1-i`` is the
    complement of input column ``i``.
    """
    shape = t.shape
    if shape and (shape[0] > box_cols or len(shape) > box_rows):
        raise ValueError(f"shape {list(shape)} does not fit in a {box_rows}x{box_cols} box")
    letters = set(range(box_rows))
    cols = list(t.columns) + [()] * (box_cols - len(t.columns))
    out = [()] * box_cols
    for i, col in enumerate(cols):
        if len(set(col)) != len(col):
            raise ValueError(f"column {i} of {t} repeats a letter")
        if not set(col) <= letters:
            raise ValueError(f"column {i} of {t} uses letters outside 0..{box_rows - 1}")
        out[box_cols - 1 - i] = tuple(sorted(letters - set(col)))
    while out and not out[-1]:
        out.pop()
    return Tableau.from_columns(out)


def optimal_shape(alpha: Sequence[int]) -> Partition:
    """The monomial-optimal shape (a_1+...+a_n, a_1+...+a_{n-1}, ..., a_1)."""
    alpha = composition(alpha)
    if any(alpha[i] < alpha[i + 1] for i in range(len(alpha) - 1)):
        raise ValueError(f"exponent vector {alpha} must be sorted in decreasing order")
    tail = alpha[1:]
    return Partition(reversed(list(accumulate(tail))))


def partitions(d: int, max_parts: int | None = None, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``d`` in reverse lexicographic order."""
    if max_part is None:
        max_part = d
    if d == 0:
        yield Partition()
        return
    if max_parts == 0:
        return
    for first in range(min(d, max_part), 0, -1):
        rest_parts = None if max_parts is None else max_parts - 1
        for rest in partitions(d - first, rest_parts, first):
            yield Partition((first,) + tuple(rest))


def border_rank_label(alpha: Sequence[int]) -> int:
    return prod(a + 1 for a in tuple(alpha)[1:])


def dominance_poset(d: int, max_vars: int | None = None) -> nx.DiGraph:
    """Hasse diagram of dominance on partitions of ``d``; edges point downward."""
    if d < 1:
        raise ValueError("degree must be positive")
    nodes = list(partitions(d, max_vars))
    order = nx.DiGraph()
    for p in nodes:
        order.add_node(p)
    for a in nodes:
        for b in nodes:
            if a != b and dominates(a, b):
                order.add_edge(a, b)
    hasse = nx.transitive_reduction(order)
    for p in nodes:
        hasse.nodes[p]["label"] = border_rank_label(p)
    return hasse


def poset_to_json(g: nx.DiGraph) -> str:
    nodes = [{"partition": list(p), "label": g.nodes[p]["label"]} for p in g.nodes]
    edges = sorted([list(a), list(b)] for a, b in g.edges)
    return json.dumps({"nodes": nodes, "edges": edges}, indent=2)


def poset_to_dot(g: nx.DiGraph) -> str:
    def name(p):
        return '"' + ",".join(map(str, p)) + '"'

    lines = ["digraph dominance {"]
    for p in g.nodes:
        lines.append(f"  {name(p)} [label=\"({','.join(map(str, p))})\\n{g.nodes[p]['label']}\"];")
    for a, b in sorted(g.edges):
        lines.append(f"  {name(a)} -> {name(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
