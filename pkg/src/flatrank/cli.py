"""Command-line interface: ``flatrank {flatten,rank,certify,table,poset}``."""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import brank
from .combinatorics import Partition, dominance_poset, hook_dim, optimal_shape, poset_to_dot, poset_to_json
from .linalg import default_threads, infer_shift, rank, read_matrix, write_matrix
from .poly import Polynomial, parse_polynomial
from .schur import flattening_matrix

EXIT_OK, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_INVARIANT = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def parse_shape(text: str | None) -> Partition | None:
    if text is None:
        return None
    text = text.strip().strip("()")
    if not text:
        return Partition()
    try:
        return Partition(int(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad shape {text!r}: {exc}") from exc


def parse_monomial(text: str) -> tuple[int, ...]:
    """A monomial string such as ``x0^2*x1`` or an exponent list such as ``2,1``."""
    if re.fullmatch(r"\s*\d+(\s*,\s*\d+)*\s*", text):
        return tuple(int(x) for x in text.split(","))
    poly = parse_polynomial(text)
    if not poly.is_monomial():
        raise UsageError(f"{text!r} is not a single monomial")
    return poly.exponent()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    return args.threads or default_threads()


def cmd_flatten(args) -> int:
    if (args.poly is None) == (args.monomial is None):
        raise UsageError("give exactly one of --poly or --monomial")
    if args.poly is not None:
        phi = parse_polynomial(args.poly)
    else:
        phi = Polynomial.monomial(parse_monomial(args.monomial))
    shape = parse_shape(args.shape)
    if shape is None:
        if not phi.is_monomial():
            raise UsageError("--shape is required for a polynomial that is not a monomial")
        alpha = phi.exponent()
        try:
            shape = optimal_shape(alpha)
        except ValueError as exc:
            raise UsageError(f"{exc}; pass --shape explicitly") from exc
    n1 = phi.num_vars
    if shape and phi.degree < shape[0]:
        raise UsageError(f"degree {phi.degree} is smaller than the first row {shape[0]}")
    if args.cutoff is not None:
        dims = (hook_dim((phi.degree,) + tuple(shape), n1), hook_dim(shape, n1))
        if max(dims) > args.cutoff:
            raise brank.Infeasible(f"{dims[0]}x{dims[1]} exceeds the cutoff {args.cutoff}")
    m = flattening_matrix(shape, phi, threads=_threads(args))
    if args.format == "json":
        report = rank(m, args.strategy, shift=infer_shift(m), seed=args.seed, threads=_threads(args))
        _emit(report.to_json() + "\n", args.out)
        return EXIT_OK
    if args.out:
        written = write_matrix(m, args.out)
        print(f"{m.rows}x{m.cols} matrix, {m.nnz} nonzeros, written to " + ", ".join(map(str, written)))
    else:
        lines = [f"{m.rows} {m.cols} {m.scalar.numerator} {m.scalar.denominator}"]
        lines += [f"{r} {c} {v}" for (r, c), v in sorted(m.entries.items())]
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_rank(args) -> int:
    m = read_matrix(args.matrix)
    report = rank(m, args.strategy, shift=infer_shift(m), seed=args.seed, threads=_threads(args))
    _emit(report.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    texts = list(args.monomial or [])
    if args.poly:
        texts.append(args.poly)
    if not texts:
        raise UsageError("give --monomial (repeatable) or --poly")
    shape = parse_shape(args.shape)
    reports = []
    for text in texts:
        alpha = parse_monomial(text)
        reports.append(
            brank.certify(
                alpha,
                shape=shape,
                partial=not args.no_partial,
                strategy=args.strategy,
                seed=args.seed,
                threads=_threads(args),
                cutoff=args.cutoff,
            )
        )
    if args.format == "csv":
        _emit(brank.reports_to_csv(reports), args.out)
    elif len(reports) == 1:
        _emit(reports[0].to_json() + "\n", args.out)
    else:
        _emit(json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    rows = list(
        brank.table_rows(
            args.degree,
            shape=parse_shape(args.shape),
            cutoff=args.cutoff,
            partial=not args.no_partial,
            strategy=args.strategy,
            seed=args.seed,
            threads=_threads(args),
        )
    )
    if args.format == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        _emit(brank.rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_poset(args) -> int:
    g = dominance_poset(args.degree, args.max_vars)
    _emit(poset_to_json(g) + "\n" if args.format == "json" else poset_to_dot(g), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strategy", choices=["auto", "exact", "modular"], default="auto")
    common.add_argument("--seed", type=int, default=0, help="seed for the random primes")
    common.add_argument("--threads", type=int, default=None, help="worker processes (env FLATRANK_THREADS)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--cutoff", type=int, default=None, help="skip matrices with a side larger than this")

    p = argparse.ArgumentParser(prog="flatrank", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("flatten", parents=[common], help="build a Young flattening matrix")
    f.add_argument("--poly")
    f.add_argument("--monomial")
    f.add_argument("--shape", help="comma separated partition, e.g. 2,1")
    f.add_argument("--format", choices=["matrix", "json"], default="matrix")
    f.set_defaults(func=cmd_flatten)

    r = sub.add_parser("rank", parents=[common], help="rank of a matrix written by flatten")
    r.add_argument("matrix")
    r.set_defaults(func=cmd_rank)

    c = sub.add_parser("certify", parents=[common], help="border-rank bounds for a monomial")
    c.add_argument("--monomial", action="append")
    c.add_argument("--poly")
    c.add_argument("--shape", help="override the flattening shape")
    c.add_argument("--no-partial", action="store_true")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.set_defaults(func=cmd_certify)

    t = sub.add_parser("table", parents=[common], help="flattening ranks for all monomials of a degree")
    t.add_argument("--degree", type=int, required=True)
    t.add_argument("--shape", help="evaluate every monomial on this shape")
    t.add_argument("--no-partial", action="store_true")
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.set_defaults(func=cmd_table)

    q = sub.add_parser("poset", help="dominance poset of partitions with border-rank labels")
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--max-vars", type=int, default=None)
    q.add_argument("--format", choices=["dot", "json"], default="dot")
    q.add_argument("--out")
    q.set_defaults(func=cmd_poset)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:  # parse errors and shape/degree mismatches
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except brank.Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (AssertionError, brank.InvariantViolation, ArithmeticError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
