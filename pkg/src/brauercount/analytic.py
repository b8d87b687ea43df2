"""Quadratic characters, truncated Euler products and Tauberian constants.

Euler products are evaluated as sums of logarithms over a sieved prime
range in a fixed order, so results are reproducible bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .arith import kronecker, squarefree_kernel
from .errors import InputError
from .sieve import primes_up_to

LADDER = tuple(range(3, 21))
LADDER_RTOL = 1e-3
G_CUTOFF = 10**6


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return squarefree_kernel(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_kernel(m) == m
    return False


@dataclass(frozen=True, order=True)
class QuadCharacter:
    """The Kronecker character n -> (d | n) of a fundamental discriminant d.

    ``d == 1`` is the principal character.
    """

    d: int = 1

    def __post_init__(self):
        if self.d != 1 and not is_fundamental_discriminant(self.d):
            raise InputError(f"{self.d} is not a fundamental discriminant")

    @classmethod
    def principal(cls) -> "QuadCharacter":
        return cls(1)

    @property
    def is_principal(self) -> bool:
        return self.d == 1

    @property
    def modulus(self) -> int:
        return abs(self.d)

    def __call__(self, n: int) -> int:
        return 1 if self.d == 1 else kronecker(self.d, n)

    def __mul__(self, other: "QuadCharacter") -> "QuadCharacter":
        """Primitive character inducing the product (they agree away from d1*d2)."""
        k = squarefree_kernel(self.d * other.d)
        if k == 1:
            return QuadCharacter(1)
        return QuadCharacter(k if k % 4 == 1 else 4 * k)

    def ramified(self, p: int) -> bool:
        return self.d != 1 and self.d % p == 0

    def period_table(self) -> np.ndarray:
        return _period_table(self.d)

    def at(self, n: np.ndarray) -> np.ndarray:
        """Vectorized values at positive integers n."""
        if self.d == 1:
            return np.ones(len(n), dtype=np.int8)
        return self.period_table()[np.asarray(n) % self.modulus]

    def __str__(self):
        return "1" if self.d == 1 else f"chi_{self.d}"


@lru_cache(maxsize=64)
def _period_table(d: int) -> np.ndarray:
    q = abs(d)
    t = np.array([kronecker(d, r if r else q) if r else 0 for r in range(q)], dtype=np.int8)
    t.setflags(write=False)
    return t


def parse_character(s: str | int) -> QuadCharacter:
    s = str(s).strip()
    if s in ("1", "principal", "trivial"):
        return QuadCharacter(1)
    return QuadCharacter(int(s))


@dataclass(frozen=True)
class CharacterGroup:
    members: tuple

    def __post_init__(self):
        ms = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", ms)
        if QuadCharacter(1) not in ms:
            raise InputError("a character group must contain the principal character")
        for a in ms:
            for b in ms:
                if a * b not in ms:
                    raise InputError(f"{a} * {b} = {a * b} is not a member")
        n = len(ms)
        if n & (n - 1):
            raise InputError(f"group order {n} is not a power of 2")

    @classmethod
    def generated_by(cls, gens: Iterable[QuadCharacter | int]) -> "CharacterGroup":
        elems = {QuadCharacter(1)}
        for g in gens:
            g = g if isinstance(g, QuadCharacter) else QuadCharacter(int(g))
            elems |= {e * g for e in elems}
        return cls(tuple(elems))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, chi):
        return chi in self.members

    def ramified(self, p: int) -> bool:
        return any(m.ramified(p) for m in self.members)

    def thorn(self, n: np.ndarray) -> np.ndarray:
        """1 where every member equals 1 at n, else 0."""
        out = np.ones(len(n), dtype=np.int8)
        for m in self.members:
            out &= (m.at(n) == 1).astype(np.int8)
        return out

    def thorn_average(self, n: np.ndarray) -> np.ndarray:
        """(1/|R|) * sum of the members' values (exact rationals as floats)."""
        acc = np.zeros(len(n), dtype=np.int64)
        for m in self.members:
            acc += m.at(n)
        return acc / len(self.members)

    def __str__(self):
        return "{" + ", ".join(str(m) for m in self.members) + "}"


def _primes(P: int) -> np.ndarray:
    return primes_up_to(int(P))


def _unramified(primes: np.ndarray, chars: Iterable[QuadCharacter]) -> np.ndarray:
    mask = np.ones(len(primes), dtype=bool)
    for c in chars:
        if not c.is_principal:
            mask &= (c.modulus % primes) != 0
    return mask


def _log_euler(values: np.ndarray, primes: np.ndarray, s: float) -> float:
    """sum of -log(1 - v_p p^{-s})."""
    if len(primes) == 0:
        return 0.0
    x = values * np.power(primes.astype(np.float64), -s)
    return -math.fsum(np.log1p(-x).tolist())


def _check_s(s: float):
    if not s > 1:
        raise InputError(f"Euler products need s > 1, got {s}")


def euler_tail_log(s: float, P: float) -> float:
    """Approximate sum_{p > P} p^{-s} (prime number theorem), the log-tail of zeta."""
    if P < 2:
        return 0.0
    return float(mpmath.e1((s - 1) * math.log(P)))


def l_value(chi: QuadCharacter, s: float, cutoff: int = 10**6, method: str = "euler",
            tail_correction: bool = False) -> float:
    """L(chi, s) by a truncated Euler product over p <= cutoff, or by the full series.

    ``method="series"`` evaluates the Dirichlet series to full double
    precision (Hurwitz zeta decomposition) and is valid at s = 1 for
    non-principal chi; it serves as the cross-check for the Euler product.
    ``tail_correction`` adds the prime-number-theorem estimate of the
    omitted primes for the principal character.
    """
    if method == "series":
        if chi.is_principal:
            _check_s(s)
            return float(mpmath.zeta(s))
        table = [int(v) for v in chi.period_table()]
        # mpmath indexes the period from n = 0
        return float(mpmath.dirichlet(s, table))
    if method != "euler":
        raise InputError(f"unknown method {method!r}")
    _check_s(s)
    if cutoff < 2:
        return 1.0
    ps = _primes(cutoff)
    log_l = _log_euler(chi.at(ps).astype(np.float64), ps, s)
    if tail_correction and chi.is_principal:
        log_l += euler_tail_log(s, cutoff)
    return math.exp(log_l)


def partial_euler_product(R: CharacterGroup, chi: QuadCharacter, s: float, P: int) -> float:
    """Product over unramified p <= P of (1 - thorn(p) chi(p) p^{-s})^{-1}."""
    _check_s(s)
    return math.exp(_log_partial(R, chi, s, P))


def _log_partial(R: CharacterGroup, chi: QuadCharacter, s: float, P: int) -> float:
    ps = _primes(P)
    ps = ps[_unramified(ps, list(R) + [chi])]
    v = R.thorn(ps).astype(np.float64) * chi.at(ps)
    return _log_euler(v, ps, s)


def _log_g(R: CharacterGroup, chi: QuadCharacter, s: float, P: int) -> float:
    """log of L_R(chi,s)^{|R|} / prod_rho L(rho*chi, s), all truncated at P."""
    ps = _primes(P)
    keep = _unramified(ps, list(R) + [chi])
    v = np.zeros(len(ps))
    v[keep] = R.thorn(ps[keep]).astype(np.float64) * chi.at(ps[keep])
    # per-prime contributions are combined before summing so the O(1/p)
    # parts cancel exactly instead of at the end of two large sums
    pw = np.power(ps.astype(np.float64), -s)
    total = -len(R) * np.log1p(-v * pw)
    for rho in R:
        total += np.log1p(-(rho * chi).at(ps) * pw)
    return math.fsum(total.tolist())


def factorization_check(R: CharacterGroup, chi: QuadCharacter, s: float,
                        P1: int, P2: int) -> tuple[float, float]:
    """Estimates of G(R, chi, s) at the cutoffs P1 < P2."""
    if not P1 < P2:
        raise InputError("need P1 < P2")
    return math.exp(_log_g(R, chi, s, P1)), math.exp(_log_g(R, chi, s, P2))


def g_estimates(R: CharacterGroup, chi: QuadCharacter, s: float, cutoffs: Sequence[int]) -> list[float]:
    return [math.exp(_log_g(R, chi, s, P)) for P in cutoffs]


def _full_l(sigma: QuadCharacter, s: float) -> mpmath.mpf:
    if sigma.is_principal:
        raise InputError("principal L-function has a pole; handle (s-1)zeta(s) separately")
    return mpmath.dirichlet(s, [int(v) for v in sigma.period_table()])


@dataclass
class SingularLimit:
    c: float
    omega: Fraction
    cutoff_trace: list = field(default_factory=list)  # (s, estimate)
    converged: bool = True
    diagnostic: str = ""


def singular_limit(R: CharacterGroup, rho: QuadCharacter, cutoff: int = G_CUTOFF,
                   ladder: Sequence[int] = LADDER, rtol: float = LADDER_RTOL) -> SingularLimit:
    """c with L_R(rho, s) ~ c / (s-1)^{1/|R|} as s -> 1+.

    Uses L_R^{|R|} = G * prod_sigma L(sigma, s): G by its absolutely
    convergent Euler product, (s-1)zeta(s) and the non-principal L(sigma, s)
    analytically, along s_k = 1 + 2^{-k}.
    """
    if rho not in R:
        raise InputError(f"{rho} is not a member of {R}")
    n = len(R)
    trace = []
    for k in ladder:
        s = 1 + 2.0**-k
        prod = mpmath.mpf(math.exp(_log_g(R, rho, s, cutoff)))
        prod *= (s - 1) * mpmath.zeta(s)
        for sigma in R:
            sigma = sigma * rho
            if not sigma.is_principal:
                prod *= _full_l(sigma, s)
        trace.append((s, float(prod ** (mpmath.mpf(1) / n))))
    last, prev = trace[-1][1], trace[-2][1]
    rel = abs(last - prev) / abs(last) if last else math.inf
    converged = rel < rtol and last != 0
    diag = "" if converged else f"ladder not converged: last relative change {rel:.3g}"
    return SingularLimit(last, Fraction(1, n), trace, converged, diag)


def singular_value(R: CharacterGroup, rho: QuadCharacter, s: float, cutoff: int = G_CUTOFF) -> float:
    """(s-1)^{1/|R|} L_R(rho, s) by direct Euler product (usable only well away from s = 1)."""
    return math.exp(_log_partial(R, rho, s, cutoff)) * (s - 1) ** (1 / len(R))


def thorn_density(R: CharacterGroup, P: int) -> float:
    ps = _primes(P)
    ps = ps[_unramified(ps, R)]
    return float(R.thorn(ps).mean())


# --------------------------------------------------------------------------
# Tauberian constants


def gamma_exact(omega) -> float:
    """Gamma at positive omega, exact recurrence from Gamma(1/2) = sqrt(pi) at half-integers."""
    w = Fraction(omega)
    if w <= 0:
        raise InputError("omega must be positive")
    if (2 * w).denominator == 1:
        k = int(2 * w)
        if k % 2 == 0:
            return float(math.factorial(k // 2 - 1))
        g = math.sqrt(math.pi)
        x = Fraction(1, 2)
        while x < w:
            g *= float(x)
            x += 1
        return g
    return math.gamma(float(omega))


def delange_constant(g1: float, omega) -> float:
    """g(1)/Gamma(omega): the constant in sum_{n<=x} a_n ~ C x (log x)^{omega-1}."""
    if Fraction(omega) <= 0:
        raise InputError("omega must be positive")
    return g1 / gamma_exact(omega)


def landau_ramanujan(dps: int = 30, return_trace: bool = False):
    """Landau-Ramanujan constant K = 2^{-1/2} prod_{p = 3 mod 4} (1 - p^{-2})^{-1/2}.

    With A(s) = prod_{p=3(4)} (1 - p^{-2s})^{-1}:
    A(s)^2 = zeta(2s)(1 - 2^{-2s}) / L(chi_{-4}, 2s) * A(2s), iterated over
    s = 1, 2, 4, ... until A(s) is 1 to working precision.
    """
    with mpmath.workdps(dps):
        eps = mpmath.mpf(10) ** (-dps)
        log_a = mpmath.mpf(0)
        weight = mpmath.mpf(1) / 2
        s = 1
        trace = []
        while True:
            r = mpmath.zeta(2 * s) * (1 - mpmath.mpf(2) ** (-2 * s)) / mpmath.dirichlet(2 * s, [0, 1, 0, -1])
            log_a += weight * mpmath.log(r)
            weight /= 2
            s *= 2
            # remaining factor A(s)^{2*weight}; A(s) - 1 ~ 3^{-2s}
            K = mpmath.sqrt(mpmath.exp(log_a) / 2)
            trace.append((s, float(K)))
            if mpmath.mpf(3) ** (-2 * s) < eps:
                break
        K = float(K)
    return (K, trace) if return_trace else K


def landau_direct(P: int) -> float:
    """2^{-1/2} prod_{p <= P, p = 3 mod 4} (1 - p^{-2})^{-1/2} (monotone increasing in P)."""
    ps = _primes(P)
    ps = ps[ps % 4 == 3].astype(np.float64)
    log_a = -math.fsum(np.log1p(-ps**-2.0).tolist())
    return math.exp(0.5 * log_a) / math.sqrt(2)
