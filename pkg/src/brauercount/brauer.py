"""Order-2 Brauer classes as quaternion symbols (a, b) with rational-function entries.

Only symbol algebras are evaluable.  A class evaluated at a rational point
gives a local invariant in {0, 1/2} at each place; it vanishes globally iff
every local invariant vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import sympy

from .arith import (
    Place,
    Rational,
    as_fraction,
    as_place,
    hilbert_symbol,
    ramified_places,
    squarefree_kernel,
)
from .errors import InputError, UndefinedAtPoint

ZERO = Fraction(0)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Polynomial:
    """Multivariate integer polynomial: exponent tuple -> coefficient."""

    terms: tuple  # sorted ((exps, coeff), ...)
    nvars: int

    @classmethod
    def from_dict(cls, d: Mapping[tuple, int], nvars: int) -> "Polynomial":
        items = tuple(sorted((tuple(e), int(c)) for e, c in d.items() if c))
        for e, _ in items:
            if len(e) != nvars:
                raise InputError(f"monomial {e} does not have {nvars} exponents")
        return cls(items, nvars)

    @classmethod
    def constant(cls, c: int, nvars: int) -> "Polynomial":
        return cls.from_dict({(0,) * nvars: c}, nvars)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, t: Sequence[Rational]) -> Fraction:
        acc = Fraction(0)
        for exps, c in self.terms:
            term = Fraction(c)
            for x, e in zip(t, exps):
                if e:
                    term *= as_fraction(x) ** e
            acc += term
        return acc


@dataclass(frozen=True)
class PolyRatio:
    num: Polynomial
    den: Polynomial

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def __call__(self, t: Sequence[Rational]) -> Fraction:
        d = self.den(t)
        if d == 0:
            raise UndefinedAtPoint(f"denominator vanishes at {tuple(t)}")
        return self.num(t) / d

    @classmethod
    def parse(cls, expr: Union[str, int, "PolyRatio"], nvars: int = 1) -> "PolyRatio":
        """Build from a string in variables t (one variable) or t1..tn."""
        if isinstance(expr, PolyRatio):
            return expr
        names = ["t"] if nvars == 1 else [f"t{i + 1}" for i in range(nvars)]
        syms = sympy.symbols(names)
        if nvars == 1:
            syms = (syms[0] if isinstance(syms, (list, tuple)) else syms,)
        local = {n: s for n, s in zip(names, syms)}
        e = sympy.together(sympy.sympify(expr, locals=local))
        num, den = sympy.fraction(e)
        out = []
        for part in (num, den):
            p = sympy.Poly(part, *syms)
            d = {}
            for m, c in p.terms():
                c = sympy.Rational(c)
                if c.q != 1:
                    raise InputError(f"non-integer coefficient in {expr!r}")
                d[tuple(int(x) for x in m)] = int(c)
            out.append(Polynomial.from_dict(d, nvars))
        return cls(out[0], out[1])


@dataclass(frozen=True)
class SymbolClass:
    """The quaternion class (a, b) over Q(t1, ..., tn)."""

    a: PolyRatio
    b: PolyRatio

    def __post_init__(self):
        if self.a.num.is_zero or self.b.num.is_zero:
            raise InputError("symbol entries must not be identically zero")

    @classmethod
    def of(cls, a, b, nvars: int = 1) -> "SymbolClass":
        return cls(PolyRatio.parse(a, nvars), PolyRatio.parse(b, nvars))

    def values(self, t: Sequence[Rational]) -> tuple[Fraction, Fraction]:
        t = _as_point(t)
        av, bv = self.a(t), self.b(t)
        if av == 0 or bv == 0:
            raise UndefinedAtPoint(f"symbol entry vanishes at {tuple(t)}")
        return av, bv

    def __str__(self):
        return f"({self.a}, {self.b})"


BrauerSet = Sequence[SymbolClass]


def _as_point(t) -> tuple:
    if isinstance(t, (int, Fraction)):
        return (t,)
    return tuple(t)


def evaluate_local(c: SymbolClass, t, v) -> Fraction:
    """Local invariant of c(t) at v: 0 or 1/2."""
    a, b = c.values(t)
    return ZERO if hilbert_symbol(a, b, as_place(v)) == 1 else HALF


def evaluate_global_is_zero(c: SymbolClass, t) -> bool:
    a, b = c.values(t)
    return all(hilbert_symbol(a, b, v) == 1 for v in ramified_places(a, b))


def indicator(B: Iterable[SymbolClass], t) -> int:
    """1 if every class in B vanishes at t, else 0."""
    return int(all(evaluate_global_is_zero(c, t) for c in B))


def local_invariants(c: SymbolClass, t) -> dict:
    a, b = c.values(t)
    return {v: (ZERO if hilbert_symbol(a, b, v) == 1 else HALF) for v in ramified_places(a, b)}


def is_squarefree(d: int) -> bool:
    return d != 0 and abs(squarefree_kernel(d)) == abs(d)


def is_norm_quadratic(m: Rational, d: int) -> bool:
    """Whether m is a norm from Q(sqrt d), via the Hasse norm theorem."""
    m = as_fraction(m)
    if m == 0:
        raise InputError("m must be nonzero")
    d = int(d)
    if d == 1 or not is_squarefree(d):
        raise InputError(f"d = {d} must be squarefree and different from 1")
    if m > 0 and squarefree_kernel(m.numerator * m.denominator) == 1:
        return True
    return all(hilbert_symbol(d, m, v) == 1 for v in ramified_places(d, m))
