"""Univariate integer polynomials as ascending coefficient tuples.

``(c0, c1, ..., cd)`` stands for c0 + c1*t + ... + cd*t^d.  The zero
polynomial is ``()``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy

MAX_FACTOR_DEGREE = 6

_T = sympy.Symbol("t")


def trim(coeffs: Sequence[int]) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: Sequence[int]) -> int:
    f = trim(f)
    return len(f) - 1 if f else -1


def evaluate(f: Sequence, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def evaluate_homogeneous(f: Sequence[int], x0: int, x1: int, total_degree: int) -> int:
    """x1^D * f(x0/x1) for D = total_degree >= deg f, in exact integers.

    The variable order matches points (x0 : x1) of the projective line with
    t = x0/x1.
    """
    acc = 0
    for k, c in enumerate(f):
        if c:
            acc += c * x0**k * x1 ** (total_degree - k)
    return acc


def mul(f: Sequence, g: Sequence) -> tuple:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def divmod_poly(f: Sequence, g: Sequence) -> tuple[tuple, tuple]:
    """Quotient and remainder over Q (Fraction coefficients)."""
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in trim(f)]
    dg = len(g) - 1
    lead = Fraction(g[-1])
    q = [Fraction(0)] * max(len(r) - dg, 1)
    while len(r) - 1 >= dg and r:
        shift = len(r) - 1 - dg
        c = r[-1] / lead
        q[shift] = c
        for j, b in enumerate(g):
            r[shift + j] -= c * b
        r = list(trim(r))
    return trim(q), trim(r)


def content(f: Sequence[int]) -> int:
    from math import gcd

    g = 0
    for c in f:
        g = gcd(g, int(c))
    return g


def primitive_part(f: Sequence[int]) -> tuple:
    f = trim(f)
    g = content(f)
    if g == 0:
        return ()
    if f[-1] < 0:
        g = -g
    return tuple(c // g for c in f)


def to_sympy(f: Sequence[int]) -> sympy.Poly:
    return sympy.Poly(list(reversed(trim(f))) or [0], _T, domain="ZZ")


def from_sympy(p: sympy.Poly) -> tuple:
    return trim(int(c) for c in reversed(p.all_coeffs()))


def factor_over_q(f: Sequence[int]) -> list[tuple[tuple, int]]:
    """Irreducible factors over Q with multiplicities, content removed.

    Factors are primitive with positive leading coefficient and sorted by
    (degree, coefficients) so the output order is deterministic.
    """
    f = trim(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if degree(f) > MAX_FACTOR_DEGREE:
        raise ValueError(f"degree {degree(f)} exceeds supported maximum {MAX_FACTOR_DEGREE}")
    if degree(f) == 0:
        return []
    _, pairs = to_sympy(f).factor_list()
    out = [(primitive_part(from_sympy(p)), int(e)) for p, e in pairs]
    out.sort(key=lambda fe: (len(fe[0]), fe[0]))
    return out
