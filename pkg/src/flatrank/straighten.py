"""Straightening arbitrary fillings into the semistandard basis.

A filling is handled as a tuple of columns.  Three relations are used:

* a column is alternating: swapping two entries flips the sign, a repeated
  letter kills the tableau;
* columns of equal height commute;
* the Garnir exchange between adjacent columns j, j+1 at a row r where
  ``col_j[r] > col_{j+1}[r]``: antisymmetrizing the entries ``col_j[r:]``
  together with ``col_{j+1}[:r+1]`` (one more letter than column j holds)
  gives zero.

After sorting, every term produced by a Garnir exchange is strictly smaller
than its parent in lexicographic order on the column word, so rewriting the
largest pending tableau first touches each tableau at most once and always
terminates.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping

from .combinatorics import Partition, Tableau

Key = tuple  # tuple of column tuples


def sort_column(col: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sort a column, returning the permutation sign (0 on a repeated letter)."""
    col = list(col)
    n = len(col)
    sign = 1
    # insertion sort; columns are short
    for i in range(1, n):
        x = col[i]
        j = i - 1
        while j >= 0 and col[j] > x:
            col[j + 1] = col[j]
            j -= 1
            sign = -sign
        if j >= 0 and col[j] == x:
            return 0, ()
        col[j + 1] = x
    return sign, tuple(col)


def canonical(columns: Iterable[Iterable[int]]) -> tuple[int, Key]:
    """Normal form of a filling modulo column alternation and equal-height symmetry."""
    sign = 1
    cols = []
    for col in columns:
        s, c = sort_column(col)
        if s == 0:
            return 0, ()
        sign *= s
        cols.append(c)
    # sort runs of equal-height columns
    i = 0
    n = len(cols)
    while i < n:
        j = i + 1
        h = len(cols[i])
        while j < n and len(cols[j]) == h:
            j += 1
        if j - i > 1:
            cols[i:j] = sorted(cols[i:j])
        i = j
    return sign, tuple(cols)


def first_violation(key: Key) -> tuple[int, int] | None:
    """Leftmost, then topmost, (column, row) where a row strictly decreases."""
    for c in range(len(key) - 1):
        left, right = key[c], key[c + 1]
        for r in range(len(right)):
            if left[r] > right[r]:
                return c, r
    return None


def is_standard_key(key: Key) -> bool:
    return first_violation(key) is None


def garnir(key: Key, c: int, r: int) -> list[tuple[int, Key]]:
    """Expand ``key`` via the Garnir exchange at column ``c``, row ``r``.

    Returns canonical ``(coefficient, key)`` pairs with ``key = sum coef * term``.
    """
    left, right = key[c], key[c + 1]
    a_part = left[r:]
    b_part = right[: r + 1]
    pool = a_part + b_part
    k = len(a_part)
    base = k * (k - 1) // 2
    out: list[tuple[int, Key]] = []
    idx = range(len(pool))
    for chosen in combinations(idx, k):
        if sum(chosen) == base:
            continue  # the identity shuffle, i.e. ``key`` itself
        rest = [pool[i] for i in idx if i not in chosen]
        shuffle_sign = -1 if (sum(chosen) - base) & 1 else 1
        new_left = left[:r] + tuple(pool[i] for i in chosen)
        new_right = tuple(rest) + right[r + 1:]
        cols = list(key)
        cols[c] = new_left
        cols[c + 1] = new_right
        s, canon = canonical(cols)
        if s:
            # 0 = key + sum(shuffle_sign * term)  =>  key = -sum(...)
            out.append((-shuffle_sign * s, canon))
    return out


def _neg(key: Key) -> tuple:
    return tuple(-x for col in key for x in col)


def straighten_keys(combo: Mapping[Key, int]) -> dict[Key, int]:
    """Straighten a linear combination of canonical fillings of one shape."""
    pending: dict[Key, int] = {}
    heap: list[tuple[tuple, Key]] = []
    for key, coef in combo.items():
        if not coef:
            continue
        if key in pending:
            pending[key] += coef
        else:
            pending[key] = coef
            heapq.heappush(heap, (_neg(key), key))
    result: dict[Key, int] = {}
    while heap:
        _, key = heapq.heappop(heap)
        coef = pending.pop(key)
        if not coef:
            continue
        v = first_violation(key)
        if v is None:
            result[key] = coef
            continue
        for sub_coef, sub in garnir(key, *v):
            assert sub < key, "straightening measure failed to decrease"
            if sub in pending:
                pending[sub] += coef * sub_coef
            else:
                pending[sub] = coef * sub_coef
                heapq.heappush(heap, (_neg(sub), sub))
    return result


@dataclass(frozen=True)
class FormalSum:
    """Integer combination of semistandard tableaux of a single shape."""

    shape: Partition
    terms: Mapping[Tableau, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "shape", Partition(self.shape))
        clean = {t: int(c) for t, c in self.terms.items() if c}
        for t in clean:
            if t.shape != self.shape:
                raise ValueError(f"tableau {t} does not have shape {list(self.shape)}")
            if not t.is_semistandard():
                raise ValueError(f"tableau {t} is not semistandard")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_keys(cls, shape, combo: Mapping[Key, int]) -> FormalSum:
        return cls(shape, {Tableau.from_columns(k): c for k, c in combo.items()})

    def keys_combo(self) -> dict[Key, int]:
        return {t.columns: c for t, c in self.terms.items()}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __getitem__(self, t: Tableau) -> int:
        return self.terms.get(t, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, tuple(self.terms.items())))

    def __add__(self, other: FormalSum) -> FormalSum:
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.shape != other.shape:
            raise ValueError("cannot add formal sums of different shapes")
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, 0) + c
        return FormalSum(self.shape, terms)

    def __neg__(self) -> FormalSum:
        return FormalSum(self.shape, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: FormalSum) -> FormalSum:
        return self + (-other)

    def __mul__(self, k: int) -> FormalSum:
        return FormalSum(self.shape, {t: k * c for t, c in self.terms.items()})

    __rmul__ = __mul__

    def to_json(self) -> str:
        return json.dumps(
            [{"tableau": [list(r) for r in t.rows], "coefficient": c} for t, c in self.terms.items()]
        )

    def __repr__(self) -> str:
        inner = " + ".join(f"{c}*[{t}]" for t, c in self.terms.items()) or "0"
        return f"FormalSum({inner})"


def zero(shape) -> FormalSum:
    return FormalSum(shape, {})


def straighten(t: Tableau) -> FormalSum:
    """Expand an arbitrary filling in the semistandard basis."""
    sign, key = canonical(t.columns)
    if not sign:
        return zero(t.shape)
    return FormalSum.from_keys(t.shape, straighten_keys({key: sign}))


def straighten_fillings(shape, fillings: Mapping[Key, int] | Iterable[tuple[Key, int]]) -> FormalSum:
    """Straighten a combination of raw column fillings (not yet canonical)."""
    items = fillings.items() if isinstance(fillings, Mapping) else fillings
    combo: dict[Key, int] = {}
    for cols, coef in items:
        s, key = canonical(cols)
        if s:
            combo[key] = combo.get(key, 0) + s * coef
    return FormalSum.from_keys(shape, straighten_keys(combo))


def apply_linear(op: Callable[[Tableau], FormalSum], s: FormalSum) -> FormalSum:
    """Extend ``op`` (defined on semistandard tableaux) linearly to ``s``."""
    total: FormalSum | None = None
    for t, c in s.terms.items():
        image = op(t)
        if not image:
            continue
        image = image * c
        total = image if total is None else total + image
    return total if total is not None else zero(s.shape)

