"""Border-rank bounds for monomials from (partial) Young flattening ranks."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from math import prod
from typing import Iterable, Sequence

from .combinatorics import Partition, composition, dominates, hook_dim, optimal_shape, partitions
from .linalg import RankReport, rank
from .poly import Polynomial
from .schur import flattening_matrix, partial_flattening_blocks


class InvariantViolation(RuntimeError):
    """A computed bound contradicts another; points at a construction bug."""


class InexactDivision(ArithmeticError):
    pass


class Infeasible(RuntimeError):
    """The requested matrix exceeds the size cutoff."""


def _sorted(alpha: Sequence[int]) -> tuple[int, ...]:
    alpha = composition(alpha)
    if any(alpha[i] < alpha[i + 1] for i in range(len(alpha) - 1)):
        raise ValueError(f"exponent vector {alpha} must be sorted in decreasing order")
    return alpha


def upper_bound(alpha: Sequence[int]) -> int:
    alpha = _sorted(alpha)
    return prod(a + 1 for a in alpha[1:])


def waring_rank(alpha: Sequence[int]) -> int:
    alpha = _sorted(alpha)
    while len(alpha) > 1 and alpha[-1] == 0:
        alpha = alpha[:-1]
    return prod(a + 1 for a in alpha[:-1])


def monomial_name(alpha: Sequence[int]) -> str:
    return str(Polynomial.monomial(alpha))


def _trim(alpha: tuple[int, ...]) -> tuple[int, ...]:
    while len(alpha) > 1 and alpha[-1] == 0:
        alpha = alpha[:-1]
    return alpha


def flattening_ranks(
    alpha: Sequence[int],
    lam: Sequence[int],
    *,
    num_vars: int | None = None,
    strategy: str = "auto",
    seed: int = 0,
    threads: int | None = None,
) -> tuple[RankReport, RankReport]:
    """Rank reports of the flattening at ``x^alpha`` and at ``x0^d``."""
    n1 = max(len(alpha), num_vars or 0)
    alpha = composition(alpha, n1)
    d = sum(alpha)
    power = (d,) + (0,) * (n1 - 1)
    m_phi = flattening_matrix(lam, Polynomial.monomial(alpha), threads=threads)
    m_pow = flattening_matrix(lam, Polynomial.monomial(power), threads=threads)
    return (
        rank(m_phi, strategy, shift=alpha, seed=seed, threads=threads),
        rank(m_pow, strategy, shift=power, seed=seed, threads=threads),
    )


def lower_bound_full(alpha: Sequence[int], lam: Sequence[int], **kw) -> int:
    r_phi, r_pow = flattening_ranks(alpha, lam, **kw)
    return -(-r_phi.rank // r_pow.rank)


def partial_rank(
    alpha: Sequence[int],
    beta: Sequence[int] | None = None,
    *,
    strategy: str = "auto",
    seed: int = 0,
    threads: int | None = None,
) -> tuple[int, list[RankReport]]:
    alpha = _trim(_sorted(alpha))
    lam = optimal_shape(alpha)
    reports = [
        rank(block, strategy, shift=shift, seed=seed, threads=threads)
        for _, block, shift in partial_flattening_blocks(lam, alpha, beta, threads=threads)
    ]
    return sum(r.rank for r in reports), reports


def lower_bound_partial(alpha: Sequence[int], **kw) -> int:
    """Partial flattening rank divided by the rank at the pure power; raises on a remainder."""
    alpha = _trim(_sorted(alpha))
    total, _ = partial_rank(alpha, **kw)
    m = hook_dim(optimal_shape(alpha), len(alpha) - 1)
    q, rem = divmod(total, m)
    if rem:
        raise InexactDivision(f"partial rank {total} is not a multiple of {m}")
    return q


def thm13_condition2(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """Both tail-dominance conditions on ``beta' = beta[1:]`` (prefix sums only)."""
    alpha, beta = _sorted(alpha), _sorted(beta)
    if sum(alpha) != sum(beta):
        raise ValueError("alpha and beta must have the same degree")
    n = max(len(alpha), len(beta))
    alpha, beta = composition(alpha, n), composition(beta, n)
    tail = beta[1:]
    first = alpha[1:]
    second = alpha[:1] + tuple(reversed(alpha[2:]))
    return dominates(first, tail, equal_totals=False) and dominates(second, tail, equal_totals=False)


@dataclass
class BrankReport:
    alpha: tuple[int, ...]
    permutation: tuple[int, ...]
    lam: tuple[int, ...]
    matrix_dims: tuple[int, int]
    rank_power: int
    rank_phi: int
    rank_partial: int | None
    lower_full: int
    lower_partial: int | None
    upper: int
    waring: int
    certified: dict = field(default_factory=dict)

    @property
    def determined(self) -> bool:
        return self.lower_partial == self.upper or self.lower_full == self.upper

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = list(out.pop("lam"))
        out["monomial"] = monomial_name(self.alpha)
        out["border_rank_determined"] = self.determined
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def certify(
    alpha: Sequence[int],
    *,
    shape: Sequence[int] | None = None,
    partial: bool = True,
    strategy: str = "auto",
    seed: int = 0,
    threads: int | None = None,
    cutoff: int | None = None,
) -> BrankReport:
    """Lower and upper border-rank bounds for ``x^alpha`` (sorted internally)."""
    raw = composition(alpha)
    perm = tuple(sorted(range(len(raw)), key=lambda i: -raw[i]))
    alpha = _trim(tuple(raw[i] for i in perm))
    n1 = len(alpha)
    opt = optimal_shape(alpha)
    lam = Partition(shape) if shape is not None else opt
    d = sum(alpha)
    dims = (hook_dim((d,) + tuple(lam), n1), hook_dim(lam, n1))
    if cutoff is not None and max(dims) > cutoff:
        raise Infeasible(f"{dims[0]}x{dims[1]} flattening exceeds the cutoff {cutoff}")
    kw = dict(strategy=strategy, seed=seed, threads=threads)
    r_phi, r_pow = flattening_ranks(alpha, lam, **kw)
    lower_full = -(-r_phi.rank // r_pow.rank)
    certified = {"rank_phi": r_phi.tag, "rank_power": r_pow.tag}
    rank_p = lower_p = None
    if partial:
        rank_p, reports = partial_rank(alpha, **kw)
        m = hook_dim(opt, n1 - 1)
        lower_p, rem = divmod(rank_p, m)
        certified["rank_partial"] = (
            "exact" if all(r.exact for r in reports) else "modular-agreed (lower bound certified)"
        )
        certified["partial_division_exact"] = not rem
        if rem:
            lower_p += 1
    upper = upper_bound(alpha)
    report = BrankReport(
        alpha, perm, tuple(lam), dims, r_pow.rank, r_phi.rank, rank_p, lower_full, lower_p,
        upper, waring_rank(alpha), certified,
    )
    best_lower = lower_full if lower_p is None else lower_p
    if not (lower_full <= best_lower <= upper):
        raise InvariantViolation(
            f"bounds out of order for {alpha}: full {lower_full}, partial {lower_p}, upper {upper}"
        )
    if partial and not certified["partial_division_exact"]:
        raise InvariantViolation(f"partial rank {rank_p} of {alpha} is not a multiple of the power rank")
    return report


CSV_COLUMNS = ["monomial", "shape", "size", "m", "rank", "partial rank", "status"]


def table_rows(
    degree: int,
    *,
    shape: Sequence[int] | None = None,
    cutoff: int | None = None,
    partial: bool = True,
    strategy: str = "auto",
    seed: int = 0,
    threads: int | None = None,
) -> Iterable[dict]:
    """One row per sorted monomial of ``degree`` in the style of the degree 6 and 7 tables.

    With a fixed ``shape`` every monomial (including the pure power) is
    evaluated on that shape over ``len(shape) + 1`` variables and no
    partial rank is computed.  Otherwise the pure power is left out and
    each monomial uses its optimal shape.
    """
    for alpha in partitions(degree):
        alpha = tuple(alpha)
        if shape is None:
            if len(alpha) == 1:
                continue
            lam = optimal_shape(alpha)
            n1 = len(alpha)
        else:
            lam = Partition(shape)
            n1 = len(lam) + 1
            if len(alpha) > n1:
                continue
        row = {"monomial": monomial_name(alpha), "shape": ",".join(map(str, lam))}
        dims = (hook_dim((degree,) + tuple(lam), n1), hook_dim(lam, n1))
        row["size"] = f"{dims[0]}x{dims[1]}"
        if cutoff is not None and max(dims) > cutoff:
            row.update({"m": "", "rank": "", "partial rank": "", "status": "skipped"})
            yield row
            continue
        kw = dict(strategy=strategy, seed=seed, threads=threads)
        r_phi, r_pow = flattening_ranks(alpha, lam, num_vars=n1, **kw)
        row["m"] = r_pow.rank
        row["rank"] = r_phi.rank
        tags = {r_phi.tag, r_pow.tag}
        row["partial rank"] = ""
        if shape is None and partial:
            total, reports = partial_rank(alpha, **kw)
            row["partial rank"] = total
            tags |= {r.tag for r in reports}
        row["status"] = "exact" if tags == {"exact"} else "modular"
        yield row


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def reports_to_csv(reports: Iterable[BrankReport]) -> str:
    rows = []
    for r in reports:
        rows.append(
            {
                "monomial": monomial_name(r.alpha),
                "shape": ",".join(map(str, r.lam)),
                "size": f"{r.matrix_dims[0]}x{r.matrix_dims[1]}",
                "m": r.rank_power,
                "rank": r.rank_phi,
                "partial rank": "" if r.rank_partial is None else r.rank_partial,
                "status": "exact" if all(v == "exact" for k, v in r.certified.items() if k.startswith("rank")) else "modular",
            }
        )
    return rows_to_csv(rows)
