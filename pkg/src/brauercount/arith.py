"""Exact arithmetic kernel: factorization, Kronecker and Hilbert symbols, norm forms.

Rationals are handled as :class:`fractions.Fraction` (always reduced, positive
denominator).  Integers up to 2**127 in absolute value are supported by
:func:`factor`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

import gmpy2
import sympy

from . import poly
from .errors import InputError
from .sieve import SPF_LIMIT, primes_up_to, spf_table

Rational = Union[int, Fraction]

FACTOR_BOUND = 2**127
# First 13 primes as Miller-Rabin bases are deterministic below this bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_TRIAL_PRIMES = tuple(int(p) for p in primes_up_to(1000))


# --------------------------------------------------------------------------
# primality and factorization


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    if n < SPF_LIMIT:
        return int(spf_table()[n]) == n
    for p in _TRIAL_PRIMES:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    if n < _MR_DETERMINISTIC_BOUND:
        return True
    # beyond the proven MR range: Baillie-PSW
    return bool(gmpy2.is_bpsw_prp(n))


def _brent(n: int) -> int:
    """A nontrivial factor of the odd composite n (Pollard rho, Brent's cycle search)."""
    N = gmpy2.mpz(n)
    for c in range(1, 200):
        y, r, q, g = gmpy2.mpz(2), 1, gmpy2.mpz(1), 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % N
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % N
                    q = q * (x - y) % N
                g = gmpy2.gcd(q, N)
                k += m
            r *= 2
        if g == N:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % N
                g = gmpy2.gcd(x - ys, N)
        if g != N:
            return int(g)
    raise RuntimeError(f"Pollard-Brent failed to split {n}")


def _factor_positive(n: int, out: dict) -> None:
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < SPF_LIMIT:
            spf = spf_table()
            while m > 1:
                p = int(spf[m])
                m //= p
                out[p] = out.get(p, 0) + 1
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _brent(m)
        stack.append(d)
        stack.append(m // d)


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple  # ((p, e), ...) with p strictly increasing

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)


def factor(n: int) -> Factorization:
    """Signed prime factorization of a nonzero integer with |n| < 2**127."""
    n = int(n)
    if n == 0:
        raise InputError("cannot factor 0")
    if abs(n) >= FACTOR_BOUND:
        raise InputError(f"|n| must be below 2**127, got {n}")
    sign = 1 if n > 0 else -1
    m = abs(n)
    out: dict[int, int] = {}
    if m >= SPF_LIMIT:
        for p in _TRIAL_PRIMES:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out[p] = e
            if p * p > m:
                break
    _factor_positive(m, out)
    return Factorization(sign, tuple(sorted(out.items())))


def squarefree_kernel(n: int) -> int:
    """The squarefree s with n = s*m^2, keeping the sign of n."""
    f = factor(n)
    s = f.sign
    for p, e in f.factors:
        if e % 2:
            s *= p
    return s


def valuation(n: int, p: int) -> tuple[int, int]:
    """(v, u) with n = p^v * u and p not dividing u."""
    if n == 0:
        raise InputError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


# --------------------------------------------------------------------------
# symbols


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n) for arbitrary integers a, n."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    k = 1
    if v % 2 and a % 8 in (3, 5):
        k = -k
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    # Jacobi symbol (a | n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``Place(0)`` is the real place, ``Place(p)`` the p-adic one."""

    p: int

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "inf" if self.p == 0 else str(self.p)

    def __repr__(self) -> str:
        return f"Place({self})"


INF = Place(0)


def as_place(v) -> Place:
    if isinstance(v, Place):
        return v
    if v in ("inf", "oo", math.inf) or v == 0:
        return INF
    return Place(int(v))


def as_fraction(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def square_class(x: Rational) -> int:
    """An integer in the same square class as the nonzero rational x."""
    x = as_fraction(x)
    if x == 0:
        raise InputError("zero has no square class")
    return x.numerator * x.denominator


def hilbert_int(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero integers; p == 0 is the real place."""
    if p == 0:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = valuation(a, p)
    beta, w = valuation(b, p)
    if p == 2:
        eps_u = (u % 4 == 3)
        eps_w = (w % 4 == 3)
        om_u = u % 8 in (3, 5)
        om_w = w % 8 in (3, 5)
        e = (eps_u and eps_w) + (alpha % 2 and om_w) + (beta % 2 and om_u)
        return -1 if e % 2 else 1
    s = 1
    if alpha % 2 and beta % 2 and p % 4 == 3:
        s = -s
    if beta % 2:
        s *= kronecker(u, p)
    if alpha % 2:
        s *= kronecker(w, p)
    return s


def hilbert_symbol(a: Rational, b: Rational, v) -> int:
    """+1 if a x^2 + b y^2 = z^2 has a nontrivial solution over Q_v, else -1."""
    if a == 0 or b == 0:
        raise InputError("Hilbert symbol needs nonzero entries")
    return hilbert_int(square_class(a), square_class(b), as_place(v).p)


def ramified_places(a: Rational, b: Rational) -> frozenset:
    """{inf, 2} together with every prime dividing a numerator or denominator of a, b."""
    if a == 0 or b == 0:
        raise InputError("ramified_places needs nonzero entries")
    primes = {2}
    for x in (as_fraction(a), as_fraction(b)):
        for part in (x.numerator, x.denominator):
            if abs(part) > 1:
                primes.update(factor(part).primes())
    return frozenset([INF] + [Place(p) for p in primes])


# --------------------------------------------------------------------------
# norm forms


@dataclass(frozen=True)
class NormFormSpec:
    """A monic irreducible f in Z[x] of degree n+1 defining E = Q[x]/(f).

    ``min_poly`` lists coefficients in ascending order.
    """

    min_poly: tuple
    check_irreducible: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        f = poly.trim(int(c) for c in self.min_poly)
        object.__setattr__(self, "min_poly", f)
        if len(f) < 3:
            raise InputError("minimal polynomial must have degree >= 2")
        if f[-1] != 1:
            raise InputError("minimal polynomial must be monic")
        if self.check_irreducible:
            fac = poly.factor_over_q(f)
            if len(fac) != 1 or fac[0][1] != 1:
                raise InputError(f"minimal polynomial {f} is reducible over Q")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def arity(self) -> int:
        return self.degree - 1

    @cached_property
    def homogeneous_form(self) -> dict:
        """Coefficients of N(x0 + x1*w + ... + xn*w^n) keyed by exponent tuples."""
        y = sympy.Symbol("y")
        xs = sympy.symbols(f"x0:{self.degree}")
        f = sum(c * y**k for k, c in enumerate(self.min_poly))
        g = sum(x * y**k for k, x in enumerate(xs))
        res = sympy.Poly(sympy.resultant(f, g, y), *xs)
        return {tuple(int(e) for e in m): int(c) for m, c in res.terms()}

    @cached_property
    def discriminant(self) -> int:
        return int(sympy.discriminant(poly.to_sympy(self.min_poly).as_expr(), sympy.Symbol("t")))

    def norm_homogeneous(self, x: Sequence[int]) -> int:
        """N(x0 + x1*w + ... + xn*w^n) for an integer vector x of length n+1."""
        if len(x) != self.degree:
            raise InputError(f"expected {self.degree} coordinates, got {len(x)}")
        total = 0
        for exps, c in self.homogeneous_form.items():
            term = c
            for xi, e in zip(x, exps):
                if e:
                    term *= xi**e
            total += term
        return total


def _det_bareiss(m: list) -> Fraction:
    """Determinant of a square matrix of Fractions by fraction-free elimination."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def resultant(f: Sequence, g: Sequence) -> Fraction:
    """Sylvester resultant of f and g taken at their formal (list) degrees."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    fd = [Fraction(c) for c in reversed(f)]
    gd = [Fraction(c) for c in reversed(g)]
    for i in range(n):
        rows.append([Fraction(0)] * i + fd + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gd + [Fraction(0)] * (size - n - 1 - i))
    return _det_bareiss(rows)


def norm_form_value(spec: NormFormSpec, t: Sequence[Rational]) -> Fraction:
    """N_{E/Q}(1 + t1*w + ... + tn*w^n) as the resultant Res(f, 1 + t1 x + ... + tn x^n).

    f is monic, so the resultant is exactly the product of the conjugates.
    A value of 0 means the point lies on the boundary divisor.
    """
    if len(t) != spec.arity:
        raise InputError(f"expected {spec.arity} parameters, got {len(t)}")
    g = [Fraction(1)] + [as_fraction(x) for x in t]
    return resultant(spec.min_poly, g)


def product_over_places(a: Rational, b: Rational, places: Iterable[Place] | None = None) -> int:
    if places is None:
        places = ramified_places(a, b)
    s = 1
    for v in places:
        s *= hilbert_symbol(a, b, v)
    return s
