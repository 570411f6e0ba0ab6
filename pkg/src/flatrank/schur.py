"""Young flattenings, lowering operators, contraction and the partial flattening blocks.

The flattening of a degree ``d`` polynomial at shape ``lam`` maps a tableau
``T`` of shape ``lam`` to the straightened sum of all ways of adding the
polynomial's letters to ``T`` as a strip on the first ``d`` columns, giving
shape ``(d, *lam)``.  Matrices use rows for the target basis and columns for
the source basis, both semistandard tableaux over ``0..n``.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import factorial, gcd, lcm
from typing import Iterable, Sequence

from .combinatorics import Partition, Tableau, composition, dominates, enumerate_ssyt, optimal_shape
from .ghs import place_keys
from .linalg import ExactMatrix, default_threads
from .poly import Polynomial
from .straighten import FormalSum, Key, canonical, straighten_keys, zero


@dataclass(frozen=True)
class LoweringMonomial:
    """The commuting product of ``X_0^j`` raised to ``nu[j-1]`` for j = 1..n."""

    nu: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nu", composition(self.nu))

    @property
    def degree(self) -> int:
        return sum(self.nu)

    def __str__(self) -> str:
        parts = [f"X0^{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(self.nu) if e]
        return "*".join(parts) or "1"


def _key_content(key: Key, k: int) -> tuple[int, ...]:
    counts = [0] * k
    for col in key:
        for x in col:
            counts[x] += 1
    return tuple(counts)


def lower_keys(combo: dict[Key, int], i: int, j: int) -> dict[Key, int]:
    """Replace one letter ``i`` by ``j`` in every possible cell, then straighten."""
    if i == j:
        raise ValueError("lowering needs two different letters")
    raw: dict[Key, int] = {}
    for key, coef in combo.items():
        for c, col in enumerate(key):
            if i not in col:
                continue
            cols = list(key)
            cols[c] = tuple(j if x == i else x for x in col)
            s, canon = canonical(cols)
            if s:
                raw[canon] = raw.get(canon, 0) + s * coef
    return straighten_keys(raw)


def lowering(t: Tableau, i: int, j: int) -> FormalSum:
    """The operator that turns one letter ``i`` into ``j``, acting as a derivation."""
    return FormalSum.from_keys(t.shape, lower_keys({t.columns: 1}, i, j))


def lower_sum(s: FormalSum, i: int, j: int) -> FormalSum:
    return FormalSum.from_keys(s.shape, lower_keys(s.keys_combo(), i, j))


def apply_lowering_monomial(s: FormalSum, m: LoweringMonomial | Sequence[int]) -> FormalSum:
    nu = m.nu if isinstance(m, LoweringMonomial) else composition(m)
    combo = s.keys_combo()
    for j, e in enumerate(nu, start=1):
        for _ in range(e):
            if not combo:
                return zero(s.shape)
            combo = lower_keys(combo, 0, j)
    return FormalSum.from_keys(s.shape, combo)


def lowering_matrix(shape: Sequence[int], i: int, j: int, num_letters: int) -> ExactMatrix:
    """Matrix of the ``i -> j`` lowering operator on the semistandard basis of ``shape``."""
    basis = enumerate_ssyt(shape, num_letters - 1)
    index = {t.columns: r for r, t in enumerate(basis)}
    entries = {}
    for c, t in enumerate(basis):
        for key, v in lower_keys({t.columns: 1}, i, j).items():
            entries[(index[key], c)] = v
    return ExactMatrix(len(basis), len(basis), entries, basis, basis)


def _flatten_columns(job) -> list[dict[Key, int]]:
    columns_list, d, terms = job
    out = []
    for columns in columns_list:
        raw: dict[Key, int] = {}
        for alpha, coef in terms:
            for key, v in place_keys(columns, d, alpha).items():
                raw[key] = raw.get(key, 0) + coef * v
        out.append(straighten_keys(raw))
    return out


def flattening_matrix(
    lam: Sequence[int],
    phi: Polynomial,
    *,
    num_vars: int | None = None,
    threads: int | None = None,
    normalize: bool = True,
) -> ExactMatrix:
    """Matrix of the Young flattening of ``phi`` from shape ``lam`` to ``(d, *lam)``.

    The stored integers times ``scalar`` give the map.  Rational coefficients
    of ``phi`` are cleared by their common denominator; with ``normalize`` the
    gcd of all entries is also moved into the scalar.
    """
    lam = Partition(lam)
    n1 = max(phi.num_vars, num_vars or 0, 1)
    phi = phi.padded(n1)
    d = phi.degree
    if lam and d < lam[0]:
        raise ValueError(f"degree {d} is smaller than the first row {lam[0]} of the shape")
    source = enumerate_ssyt(lam, n1 - 1)
    target = enumerate_ssyt((d,) + tuple(lam), n1 - 1)
    index = {t.columns: r for r, t in enumerate(target)}
    denom = lcm(*(c.denominator for c in phi.terms.values())) if phi.terms else 1
    terms = [(alpha, int(c * denom)) for alpha, c in phi.terms.items()]

    threads = threads or default_threads()
    cols_in = [t.columns for t in source]
    if threads > 1 and len(cols_in) > 64:
        size = -(-len(cols_in) // (4 * threads))
        jobs = [(cols_in[k:k + size], d, terms) for k in range(0, len(cols_in), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            images = [img for chunk in pool.map(_flatten_columns, jobs) for img in chunk]
    else:
        images = _flatten_columns((cols_in, d, terms))

    support = set(phi.terms)
    entries: dict[tuple[int, int], int] = {}
    g = 0
    for c, img in enumerate(images):
        src_content = source[c].content(n1)
        for key, v in img.items():
            r = index[key]
            shift = tuple(a - b for a, b in zip(_key_content(key, n1), src_content))
            assert shift in support, f"entry ({r},{c}) breaks the weight grading"
            entries[(r, c)] = v
            g = gcd(g, v)
    scalar = Fraction(1, denom)
    if normalize and g > 1:
        entries = {k: v // g for k, v in entries.items()}
        scalar *= g
    return ExactMatrix(len(target), len(source), entries, target, source, scalar)


def contraction(s: FormalSum, alpha: Sequence[int], *, shape: Sequence[int] | None = None) -> FormalSum:
    """Remove a strip with content ``alpha`` (no two cells in a column) in every possible way.

    Each removed cell is first moved to the top of its column, which costs
    the sign of that move.  Selections whose remainder is not a partition
    shape are skipped; all remaining terms must share one shape.
    """
    alpha = composition(alpha)
    if not sum(alpha):
        return s
    raw_by_shape: dict[Partition, dict[Key, int]] = {}
    for t, coef in s.terms.items():
        cells_by_letter = [[] for _ in alpha]
        for c, col in enumerate(t.columns):
            for r, x in enumerate(col):
                if x < len(alpha) and alpha[x]:
                    cells_by_letter[x].append((r, c))
        choices = [combinations(cells_by_letter[x], alpha[x]) for x in range(len(alpha))]
        for pick in product(*choices):
            cells = [cell for group in pick for cell in group]
            cols_hit = [c for _, c in cells]
            if len(set(cols_hit)) != len(cols_hit):
                continue
            new_cols = [list(col) for col in t.columns]
            sign = 1
            for r, c in cells:
                del new_cols[c][r]
                if r & 1:
                    sign = -sign
            heights = [len(col) for col in new_cols]
            if any(heights[k] < heights[k + 1] for k in range(len(heights) - 1)):
                continue
            new_cols = [tuple(col) for col in new_cols if col]
            new_shape = Partition(Tableau.from_columns(new_cols).shape) if new_cols else Partition()
            s2, key = canonical(new_cols)
            if not s2:
                continue
            bucket = raw_by_shape.setdefault(new_shape, {})
            bucket[key] = bucket.get(key, 0) + sign * s2 * coef
    if shape is not None:
        shape = Partition(shape)
        raw = raw_by_shape.get(shape, {})
    elif len(raw_by_shape) > 1:
        raise ValueError(f"contraction leaves several shapes: {sorted(raw_by_shape)}")
    elif raw_by_shape:
        shape, raw = next(iter(raw_by_shape.items()))
    else:
        return zero(shape if shape is not None else Partition())
    return FormalSum.from_keys(shape, straighten_keys(raw))


def _power_images(columns_list: Iterable[Key], d: int, num_letters: int) -> list[dict[Key, int]]:
    alpha = (d,) + (0,) * (num_letters - 1)
    return [straighten_keys(place_keys(cols, d, alpha)) for cols in columns_list]


def h0(s: FormalSum, d: int, num_letters: int | None = None) -> FormalSum:
    """Add a row of ``d`` zeros, contract it back, and rescale so zero-free tableaux are fixed."""
    if not s:
        return s
    lam = s.shape
    if lam and d < lam[0]:
        raise ValueError(f"degree {d} is smaller than the first row {lam[0]}")
    if num_letters is None:
        num_letters = max(max(t.reading_word(), default=0) for t in s.terms) + 1
    target = Partition((d,) + tuple(lam))
    lifted: dict[Key, int] = {}
    for t, coef in s.terms.items():
        for key, v in _power_images([t.columns], d, num_letters)[0].items():
            lifted[key] = lifted.get(key, 0) + coef * v
    image = FormalSum.from_keys(target, lifted)
    back = contraction(image, (d,), shape=lam)
    scale = (-1) ** lam.size() * factorial(d)
    out = {}
    for t, c in back.terms.items():
        q, rem = divmod(c, scale)
        assert not rem, "row addition and contraction did not return a multiple of the input"
        out[t] = q
    return FormalSum(lam, out)


def partial_flattening_blocks(
    lam: Sequence[int],
    alpha: Sequence[int],
    beta: Sequence[int] | None = None,
    *,
    threads: int | None = None,
) -> list[tuple[LoweringMonomial, ExactMatrix, tuple[int, ...]]]:
    """The blocks of the partial flattening of ``x^beta`` built on the shape optimal for ``alpha``.

    Returns ``(nu, block, shift)`` for every ``0 <= nu <= alpha'`` where
    ``alpha' = alpha[1:]``.  The block is ``(-1)^|mu| M(x0^d) L(X0^mu)`` with
    ``mu = beta' - nu`` (zero when some entry of ``mu`` is negative), and
    ``shift`` is its weight shift for :func:`weight_blocks`.
    """
    alpha = composition(alpha)
    lam = Partition(lam)
    if lam != optimal_shape(alpha):
        raise ValueError(f"shape {list(lam)} is not the optimal shape {list(optimal_shape(alpha))} for {alpha}")
    n1 = len(alpha)
    d = sum(alpha)
    beta = composition(alpha if beta is None else beta, n1)
    if any(beta[i] < beta[i + 1] for i in range(n1 - 1)):
        raise ValueError(f"{beta} must be sorted in decreasing order")
    if sum(beta) != d:
        raise ValueError(f"{beta} and {alpha} have different degrees")
    a_tail, b_tail = alpha[1:], beta[1:]
    if not dominates(a_tail, b_tail, equal_totals=False):
        raise ValueError(f"{b_tail} is not dominated by {a_tail}")

    source = enumerate_ssyt(lam, n1 - 1)
    power = flattening_matrix(lam, Polynomial.monomial((d,) + (0,) * (n1 - 1)), threads=threads)
    index = {t.columns: c for c, t in enumerate(source)}
    zeros = [sum(1 for x in t.reading_word() if x == 0) for t in source]

    # images of X0^mu T for every mu <= beta', grown one lowering at a time
    images: dict[tuple[int, ...], dict[int, dict[Key, int]]] = {}
    mus = sorted(product(*(range(b + 1) for b in b_tail)), key=sum)
    for mu in mus:
        if not sum(mu):
            images[mu] = {c: {t.columns: 1} for c, t in enumerate(source)}
            continue
        j = next(k for k, e in enumerate(mu) if e)
        prev = images[mu[:j] + (mu[j] - 1,) + mu[j + 1:]]
        # each lowering uses up one 0, so sources with too few zeros drop out
        images[mu] = {
            c: img
            for c, combo in prev.items()
            if zeros[c] >= sum(mu)
            for img in [lower_keys(combo, 0, j + 1)]
            if img
        }

    blocks = []
    for nu in product(*(range(a + 1) for a in a_tail)):
        mu = tuple(b - v for b, v in zip(b_tail, nu))
        shift = (d - sum(mu),) + mu
        if any(x < 0 for x in mu):
            block = ExactMatrix(power.rows, len(source), {}, power.row_labels, source, power.scalar)
            blocks.append((LoweringMonomial(nu), block, shift))
            continue
        sign = -1 if sum(mu) & 1 else 1
        entries = {}
        for c, img in images[mu].items():
            # leftover zeros are killed by the row of zeros added next
            if zeros[c] != sum(mu):
                continue
            for key, v in img.items():
                entries[(index[key], c)] = sign * v
        lowered = ExactMatrix(len(source), len(source), entries, source, source)
        blocks.append((LoweringMonomial(nu), power @ lowered, shift))
    return blocks
