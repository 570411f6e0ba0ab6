"""Homogeneous polynomials with rational coefficients and a small string parser.

Variables are ``x0, x1, ..., x9`` and ``x{10}, x{11}, ...`` for larger indices.
Accepted syntax: ``"x0^2*x1*x2 + 3*x3^4 - 1/2*x1^4"``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .combinatorics import composition


class PolynomialParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


@dataclass(frozen=True)
class Polynomial:
    """Map from exponent vectors to nonzero rational coefficients, all of one degree."""

    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)
    num_vars: int = 0

    def __post_init__(self):
        width = max([self.num_vars] + [len(e) for e in self.terms])
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in self.terms.items():
            key = composition(exps, width)
            coef = Fraction(coef)
            if coef:
                clean[key] = clean.get(key, Fraction(0)) + coef
        clean = {k: v for k, v in sorted(clean.items(), reverse=True) if v}
        degrees = {sum(k) for k in clean}
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "num_vars", width)

    @classmethod
    def monomial(cls, alpha: Iterable[int], coef=1) -> Polynomial:
        alpha = composition(alpha)
        return cls({alpha: Fraction(coef)}, len(alpha))

    @property
    def degree(self) -> int:
        for k in self.terms:
            return sum(k)
        return 0

    def padded(self, num_vars: int) -> Polynomial:
        if num_vars < self.num_vars:
            raise ValueError(f"cannot shrink {self.num_vars} variables to {num_vars}")
        return Polynomial(self.terms, num_vars)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def exponent(self) -> tuple[int, ...]:
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        return next(iter(self.terms))

    def lower(self, j: int, i: int = 0) -> Polynomial:
        """Apply the operator replacing x_i by x_j as a derivation."""
        width = max(self.num_vars, j + 1, i + 1)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in self.terms.items():
            exps = list(composition(exps, width))
            k = exps[i]
            if not k:
                continue
            exps[i] -= 1
            exps[j] += 1
            key = tuple(exps)
            out[key] = out.get(key, Fraction(0)) + k * coef
        return Polynomial(out, width)

    def __add__(self, other: Polynomial) -> Polynomial:
        terms = dict(self.terms)
        width = max(self.num_vars, other.num_vars)
        terms = {composition(k, width): v for k, v in terms.items()}
        for k, v in other.terms.items():
            k = composition(k, width)
            terms[k] = terms.get(k, Fraction(0)) + v
        return Polynomial(terms, width)

    def __mul__(self, c) -> Polynomial:
        return Polynomial({k: c * v for k, v in self.terms.items()}, self.num_vars)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coef in self.terms.items():
            factors = []
            for i, e in enumerate(exps):
                if not e:
                    continue
                name = f"x{i}" if i < 10 else f"x{{{i}}}"
                factors.append(name if e == 1 else f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(coef))
            elif abs(coef) == 1:
                body = mono
            else:
                body = f"{abs(coef)}*{mono}"
            sign = "-" if coef < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?:\d|\{\d+\}))|(?P<op>[-+*^]))"
)


def parse_polynomial(text: str, num_vars: int | None = None) -> Polynomial:
    """Parse a polynomial string; raises PolynomialParseError with the failing position."""
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise PolynomialParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))

    terms: dict[tuple[int, ...], Fraction] = {}
    i = 0

    def peek():
        return tokens[i]

    def expect_int(what: str) -> int:
        nonlocal i
        kind, val, at = tokens[i]
        if kind != "num" or "/" in val:
            raise PolynomialParseError(f"expected {what}", text, at)
        i += 1
        return int(val)

    sign = 1
    first = True
    while True:
        kind, val, at = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            raise PolynomialParseError("expected '+' or '-'", text, at)
        elif kind == "end":
            raise PolynomialParseError("empty polynomial", text, at)
        first = False
        coef = Fraction(sign)
        exps: dict[int, int] = {}
        need_factor = True
        while need_factor:
            kind, val, at = peek()
            if kind == "num":
                if "/" in val and int(val.split("/")[1]) == 0:
                    raise PolynomialParseError("zero denominator", text, at)
                coef *= Fraction(val)
                i += 1
            elif kind == "var":
                idx = int(val[1:].strip("{}"))
                i += 1
                power = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    i += 1
                    power = expect_int("an integer exponent")
                exps[idx] = exps.get(idx, 0) + power
            else:
                raise PolynomialParseError("expected a coefficient or variable", text, at)
            kind, val, at = peek()
            if kind == "op" and val == "*":
                i += 1
            else:
                need_factor = False
        width = max(exps, default=-1) + 1
        key = tuple(exps.get(k, 0) for k in range(width))
        terms[key] = terms.get(key, Fraction(0)) + coef
        if peek()[0] == "end":
            break
    width = max([len(k) for k in terms] + [num_vars or 0])
    try:
        return Polynomial(terms, width)
    except ValueError as exc:
        raise PolynomialParseError(str(exc), text, 0) from exc
