"""Sparse integer matrices and their rank, exact or modulo large primes.

Rank over the rationals is bounded below by the rank modulo any prime, so
modular ranks are always valid lower bounds; exact ranks come from
fraction-free elimination on primitive integer rows.
"""
from __future__ import annotations

import json
import os
import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from sympy import nextprime

from .combinatorics import Tableau

EXACT_ESCALATION_LIMIT = 512


@dataclass(frozen=True)
class ExactMatrix:
    """A ``rows x cols`` integer matrix stored as ``{(r, c): value}``.

    The map it represents is ``scalar`` times the stored integer matrix.
    """

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(default_factory=dict)
    row_labels: Sequence[Tableau] | None = None
    col_labels: Sequence[Tableau] | None = None
    scalar: Fraction = Fraction(1)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside a {self.rows}x{self.cols} matrix")
            v = int(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "scalar", Fraction(self.scalar))
        if self.row_labels is not None:
            object.__setattr__(self, "row_labels", tuple(self.row_labels))
            if len(self.row_labels) != self.rows:
                raise ValueError("row label count does not match the row count")
        if self.col_labels is not None:
            object.__setattr__(self, "col_labels", tuple(self.col_labels))
            if len(self.col_labels) != self.cols:
                raise ValueError("column label count does not match the column count")

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(
            self.cols,
            self.rows,
            {(c, r): v for (r, c), v in self.entries.items()},
            self.col_labels,
            self.row_labels,
            self.scalar,
        )

    def dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def values(self) -> dict[tuple[int, int], Fraction]:
        """Entries of the represented map (stored entries times the scalar)."""
        return {k: v * self.scalar for k, v in self.entries.items()}

    def row_dicts(self) -> list[dict[int, int]]:
        rows: list[dict[int, int]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for (r, c), v in other.entries.items():
            by_row[r].append((c, v))
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] += v * w
        return ExactMatrix(
            self.rows, other.cols, out, self.row_labels, other.col_labels, self.scalar * other.scalar
        )

    def sub_matrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> ExactMatrix:
        rpos = {r: i for i, r in enumerate(row_idx)}
        cpos = {c: i for i, c in enumerate(col_idx)}
        entries = {
            (rpos[r], cpos[c]): v for (r, c), v in self.entries.items() if r in rpos and c in cpos
        }
        return ExactMatrix(
            len(row_idx),
            len(col_idx),
            entries,
            None if self.row_labels is None else [self.row_labels[r] for r in row_idx],
            None if self.col_labels is None else [self.col_labels[c] for c in col_idx],
            self.scalar,
        )


def write_matrix(m: ExactMatrix, path: str | Path) -> list[Path]:
    """Write ``path`` (sparse triples) and, when labels exist, ``path.rows`` / ``path.cols``."""
    path = Path(path)
    lines = [f"{m.rows} {m.cols} {m.scalar.numerator} {m.scalar.denominator}"]
    lines += [f"{r} {c} {v}" for (r, c), v in sorted(m.entries.items())]
    path.write_text("\n".join(lines) + "\n")
    written = [path]
    for suffix, labels in ((".rows", m.row_labels), (".cols", m.col_labels)):
        if labels is not None:
            lp = path.with_name(path.name + suffix)
            lp.write_text("".join(t.to_json() + "\n" for t in labels))
            written.append(lp)
    return written


def read_matrix(path: str | Path) -> ExactMatrix:
    path = Path(path)
    lines = path.read_text().split("\n")
    rows, cols, num, den = (int(x) for x in lines[0].split())
    entries = {}
    for line in lines[1:]:
        if line.strip():
            r, c, v = (int(x) for x in line.split())
            entries[(r, c)] = v
    labels = []
    for suffix in (".rows", ".cols"):
        lp = path.with_name(path.name + suffix)
        if lp.exists():
            labels.append([Tableau.from_json(x) for x in lp.read_text().splitlines() if x])
        else:
            labels.append(None)
    return ExactMatrix(rows, cols, entries, labels[0], labels[1], Fraction(num, den))


def weight_blocks(m: ExactMatrix, shift: Sequence[int]) -> list[ExactMatrix]:
    """Split ``m`` into diagonal blocks by torus weight.

    Column ``c`` and row ``r`` share a block when ``content(r) = content(c) + shift``.
    Only blocks with at least one column are returned; rows outside every
    block must be zero.  Any entry off the blocks raises AssertionError.
    """
    if m.row_labels is None or m.col_labels is None:
        raise ValueError("weight blocks need row and column labels")
    shift = tuple(shift)
    k = len(shift)
    col_class: dict[tuple, list[int]] = defaultdict(list)
    for c, t in enumerate(m.col_labels):
        col_class[t.content(k)].append(c)
    row_class: dict[tuple, list[int]] = defaultdict(list)
    for r, t in enumerate(m.row_labels):
        w = tuple(a - b for a, b in zip(t.content(k), shift))
        row_class[w].append(r)
    row_key = {r: w for w, rs in row_class.items() for r in rs}
    col_key = {c: w for w, cs in col_class.items() for c in cs}
    bucket: dict[tuple, dict] = defaultdict(dict)
    for (r, c), v in m.entries.items():
        assert row_key[r] == col_key[c], (
            f"entry ({r},{c}) links weight {m.row_labels[r].content(k)} "
            f"to {m.col_labels[c].content(k)} with shift {shift}"
        )
        bucket[col_key[c]][(r, c)] = v
    blocks = []
    for w, cols in sorted(col_class.items()):
        rows = row_class.get(w, [])
        rpos = {r: i for i, r in enumerate(rows)}
        cpos = {c: i for i, c in enumerate(cols)}
        entries = {(rpos[r], cpos[c]): v for (r, c), v in bucket[w].items()}
        blocks.append(
            ExactMatrix(
                len(rows),
                len(cols),
                entries,
                [m.row_labels[r] for r in rows],
                [m.col_labels[c] for c in cols],
                m.scalar,
            )
        )
    return blocks


def _rank_mod_rows(rows: list[dict[int, int]], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    # sparse rows first keeps fill-in down
    for row in sorted(rows, key=len):
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in piv.items():
                x = (row.get(k, 0) - f * v) % p
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)
    return len(pivots)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {k: v // g for k, v in row.items()}


def _rank_exact_rows(rows: list[dict[int, int]]) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for row in sorted(rows, key=len):
        row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = _primitive(row)
                break
            a, b = piv[c], row[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * v for k, v in row.items()}
            for k, v in piv.items():
                x = new.get(k, 0) - b * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            row = _primitive(new)
    return len(pivots)


def rank_modular(m: ExactMatrix, prime: int) -> int:
    """Rank of ``m`` over the field with ``prime`` elements."""
    return _rank_mod_rows(_orient(m), prime)


def rank_exact(m: ExactMatrix) -> int:
    """Rank over the rationals by fraction-free elimination."""
    return _rank_exact_rows(_orient(m))


def _orient(m: ExactMatrix) -> list[dict[int, int]]:
    # eliminate along the shorter side
    rows = m.row_dicts() if m.rows <= m.cols else m.transpose().row_dicts()
    return [r for r in rows if r]


def random_primes(seed: int, count: int = 2, bits: int = 62) -> list[int]:
    rng = random.Random(seed)
    out: list[int] = []
    while len(out) < count:
        p = int(nextprime(rng.getrandbits(bits) | (1 << (bits - 1))))
        if p not in out and p.bit_length() == bits:
            out.append(p)
    return out


@dataclass
class RankReport:
    rows: int
    cols: int
    rank: int
    tag: str
    per_block: list[dict]
    seed: int
    primes: list[int]

    @property
    def exact(self) -> bool:
        return self.tag == "exact"

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "rank": self.rank,
            "tag": self.tag,
            "per_block": self.per_block,
            "seed": self.seed,
            "primes": self.primes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


STRATEGIES = ("auto", "modular", "modular-certified", "exact")


def _block_rank(args) -> dict:
    rows, shape, strategy, primes = args
    info = {"rows": shape[0], "cols": shape[1]}
    if not rows:
        info.update(rank=0, method="exact")
        return info
    if strategy == "exact":
        info.update(rank=_rank_exact_rows(rows), method="exact")
        return info
    mods = [_rank_mod_rows(rows, p) for p in primes]
    if len(set(mods)) == 1:
        info.update(rank=mods[0], method="modular")
    elif strategy == "auto" and max(shape) <= EXACT_ESCALATION_LIMIT:
        info.update(rank=_rank_exact_rows(rows), method="exact", modular=mods)
    else:
        info.update(rank=max(mods), method="modular-disagreed", modular=mods)
    return info


def default_threads() -> int:
    env = os.environ.get("FLATRANK_THREADS")
    return max(1, int(env)) if env else 1


def rank(
    m: ExactMatrix,
    strategy: str = "auto",
    *,
    shift: Sequence[int] | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> RankReport:
    """Rank with a certification tag.

    ``shift`` is the content of the evaluated monomial; when given (and the
    matrix is labeled) the rank is computed per weight block.  ``auto`` and
    ``modular`` use two random 62-bit primes from ``seed``; ``auto`` falls back
    to exact elimination on small blocks where the primes disagree.
    """
    if strategy == "modular-certified":
        strategy = "modular"
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    threads = threads or default_threads()
    if shift is not None and m.row_labels is not None and m.col_labels is not None:
        blocks = weight_blocks(m, shift)
    else:
        blocks = [m]
    primes = [] if strategy == "exact" else random_primes(seed)
    jobs = [(_orient(b), b.shape, strategy, primes) for b in blocks]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            per_block = list(pool.map(_block_rank, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        per_block = [_block_rank(j) for j in jobs]
    total = sum(b["rank"] for b in per_block)
    methods = {b["method"] for b in per_block}
    if methods <= {"exact"}:
        tag = "exact"
    elif "modular-disagreed" in methods:
        tag = "modular-disagreed (lower bound certified)"
    else:
        tag = "modular-agreed (lower bound certified)"
    return RankReport(m.rows, m.cols, total, tag, per_block, seed, primes)


def random_sparse(rows: int, cols: int, density: float, rng: random.Random, bound: int = 5) -> ExactMatrix:
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                entries[(r, c)] = rng.randint(-bound, bound)
    return ExactMatrix(rows, cols, entries)


def block_diagonal(blocks: Iterable[ExactMatrix]) -> ExactMatrix:
    entries = {}
    r0 = c0 = 0
    for b in blocks:
        for (r, c), v in b.entries.items():
            entries[(r0 + r, c0 + c)] = v
        r0 += b.rows
        c0 += b.cols
    return ExactMatrix(r0, c0, entries)


def infer_shift(m: ExactMatrix) -> tuple[int, ...] | None:
    """The common weight shift of all entries of a labeled matrix, if there is one."""
    if m.row_labels is None or m.col_labels is None or not m.entries:
        return None
    k = 1 + max(max(t.reading_word(), default=0) for t in (*m.row_labels, *m.col_labels))
    shifts = {
        tuple(a - b for a, b in zip(m.row_labels[r].content(k), m.col_labels[c].content(k)))
        for r, c in m.entries
    }
    return shifts.pop() if len(shifts) == 1 else None
