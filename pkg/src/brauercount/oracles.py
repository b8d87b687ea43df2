"""Brute-force oracles, kept independent of the routines they check.

Nothing here calls the Hilbert symbol, the norm test or the enumerator;
each oracle searches directly for solutions or points.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

import numpy as np


def _sqfree(n: int) -> int:
    s = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            out *= p
        p += 1
    return s * out * n


def _val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# --------------------------------------------------------------------------
# local solubility of a x^2 + b y^2 = z^2


@lru_cache(maxsize=None)
def _square_sets(p: int, k: int):
    M = p**k
    x = np.arange(M, dtype=np.int64)
    sq = x * x % M
    unit = x % p != 0
    su = np.zeros(M, dtype=bool)
    sn = np.zeros(M, dtype=bool)
    su[sq[unit]] = True
    sn[sq[~unit]] = True
    return su, sn


def _hits(a_vals: np.ndarray, b_vals: np.ndarray, target: np.ndarray, M: int) -> bool:
    """Is some a_vals[i] + b_vals[j] (mod M) in the target set?"""
    if len(a_vals) == 0 or len(b_vals) == 0:
        return False
    if len(a_vals) * len(b_vals) <= 4_000_000:
        sums = np.add.outer(a_vals, b_vals) % M
        return bool(target[sums].any())
    # all sums lie in g*Z/MZ; work in Z/(M/g) instead
    g = int(np.gcd(np.gcd.reduce(a_vals), np.gcd.reduce(b_vals)))
    g = gcd(g, M)
    if g > 1:
        return _hits(a_vals // g, b_vals // g, target[::g], M // g)
    ia = np.zeros(M)
    ib = np.zeros(M)
    ia[a_vals] = 1
    ib[b_vals] = 1
    conv = np.fft.irfft(np.fft.rfft(ia) * np.fft.rfft(ib), n=M)
    return bool((np.rint(conv)[target] > 0).any())


@lru_cache(maxsize=None)
def _primitive_solution_mod(a: int, b: int, p: int, k: int) -> bool:
    M = p**k
    su, sn = _square_sets(p, k)
    sall = su | sn
    U = np.flatnonzero(su)
    N = np.flatnonzero(sn)
    A = np.flatnonzero(sall)
    aU, aN = np.unique(a * U % M), np.unique(a * N % M)
    bU, bN, bA = np.unique(b * U % M), np.unique(b * N % M), np.unique(b * A % M)
    # x a unit / x not a unit and y a unit / x, y not units and z a unit
    return (
        _hits(aU, bA, sall, M)
        or _hits(aN, bU, sall, M)
        or _hits(aN, bN, su, M)
    )


def local_solubility(a: int, b: int, p: int) -> bool:
    """Does a x^2 + b y^2 = z^2 have a nontrivial solution over Q_p (p = 0: over R)?

    Real place: the form a x^2 + b y^2 - z^2 must be indefinite.  Finite p:
    exhaustive search for a primitive solution modulo p^(2 + 2 v_p(4ab)) after
    replacing a, b by their squarefree parts.
    """
    if p == 0:
        signs = {a > 0, b > 0, False}
        return len(signs) == 2
    a, b = _sqfree(a), _sqfree(b)
    if a > b:
        a, b = b, a
    k = 2 + 2 * _val(4 * a * b, p)
    M = p**k
    return _primitive_solution_mod(a % M, b % M, p, k)


# --------------------------------------------------------------------------
# rational points on diagonal conics


def _normalize_conic(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Squarefree, pairwise coprime coefficients of an equivalent conic."""
    while True:
        g = gcd(gcd(a, b), c)
        a, b, c = a // g, b // g, c // g
        a, b, c = _sqfree(a), _sqfree(b), _sqfree(c)
        for (i, j, k) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            co = [a, b, c]
            g = gcd(co[i], co[j])
            if g > 1:
                co[i] //= g
                co[j] //= g
                co[k] *= g
                a, b, c = co
                break
        else:
            return a, b, c


def conic_point(a: int, b: int, c: int):
    """A nontrivial integer solution of a x^2 + b y^2 + c z^2 = 0 in Holzer's box, or None.

    The conic is first brought to squarefree pairwise coprime form; the box
    |x| <= sqrt|bc|, |y| <= sqrt|ca|, |z| <= sqrt|ab| is then searched
    exhaustively.  The returned point solves the normalized equation
    (returned alongside it).
    """
    a, b, c = _normalize_conic(a, b, c)
    coeffs = [a, b, c]
    order = sorted(range(3), key=lambda i: abs(coeffs[i]))
    # solve for the variable with the smallest coefficient
    s, u, w = order[0], order[1], order[2]
    bound = {
        0: isqrt(abs(b * c)),
        1: isqrt(abs(c * a)),
        2: isqrt(abs(a * b)),
    }
    cs, cu, cw = coeffs[s], coeffs[u], coeffs[w]
    ws = np.arange(0, bound[w] + 1, dtype=np.int64)
    for xu in range(0, bound[u] + 1):
        rhs = -(cu * xu * xu + cw * ws * ws)
        ok = (rhs % cs == 0)
        q = np.where(ok, rhs // cs, -1)
        q[q < 0] = -1
        r = np.sqrt(np.maximum(q, 0)).round().astype(np.int64)
        good = ok & (q >= 0) & (r * r == q) & (r <= bound[s])
        if xu == 0:
            good &= ~((ws == 0) & (r == 0))
        idx = np.flatnonzero(good)
        if len(idx):
            pt = [0, 0, 0]
            pt[u] = xu
            pt[w] = int(ws[idx[0]])
            pt[s] = int(r[idx[0]])
            return tuple(pt), (a, b, c)
    return None


def conic_has_point(a: int, b: int, c: int) -> bool:
    return conic_point(a, b, c) is not None


def norm_witness(m, d: int, max_den: int = 100, y_bound: int = 2000):
    """(x, y, z) with x^2 - d y^2 = m z^2, 1 <= z <= max_den, or None."""
    from fractions import Fraction

    m = Fraction(m)
    # clear the denominator of m: x^2 - d y^2 = (num/den) z^2
    num, den = m.numerator, m.denominator
    ys = np.arange(-y_bound, y_bound + 1, dtype=object)
    ys_i = np.arange(-y_bound, y_bound + 1, dtype=np.int64)
    for z in range(1, max_den + 1):
        if (num * z * z) % den:
            continue
        target = num * z * z // den
        val = target + d * ys_i * ys_i
        cand = np.flatnonzero(val >= 0)
        r = np.sqrt(val[cand].astype(np.float64)).round().astype(np.int64)
        hit = np.flatnonzero(r * r == val[cand])
        if len(hit):
            i = cand[hit[0]]
            return int(r[hit[0]]), int(ys[i]), z
    return None


# --------------------------------------------------------------------------
# enumeration and counting


def brute_force_points(n: int, T: int) -> np.ndarray:
    """Sorted integer keys of all canonical points of P^n with naive height <= T.

    Every vector of [-T, T]^(n+1) minus 0 is divided by its gcd and sign
    normalized; duplicates are removed.  Keys encode coordinates in base 2T+1.
    """
    base = 2 * T + 1
    rng = np.arange(-T, T + 1, dtype=np.int64)
    keys = []
    for first in rng:
        grids = np.meshgrid(*([rng] * n), indexing="ij")
        rest = np.stack([g.ravel() for g in grids], axis=1)
        v = np.hstack([np.full((len(rest), 1), first, dtype=np.int64), rest])
        v = v[(v != 0).any(axis=1)]
        g = np.gcd.reduce(np.abs(v), axis=1)
        v = v // g[:, None]
        nz = v != 0
        lead = v[np.arange(len(v)), np.argmax(nz, axis=1)]
        v = v * np.sign(lead)[:, None]
        keys.append(encode_points(v, T))
    return np.unique(np.concatenate(keys))


def encode_points(v: np.ndarray, T: int) -> np.ndarray:
    base = 2 * T + 1
    key = np.zeros(len(v), dtype=np.int64)
    for j in range(v.shape[1]):
        key = key * base + (v[:, j] + T)
    return key


def landau_brute(x: int) -> int:
    """#{n <= x : n = a^2 + b^2} by listing all a^2 + b^2 <= x."""
    seen = set()
    a = 0
    while a * a <= x:
        b = a
        while a * a + b * b <= x:
            if a or b:
                seen.add(a * a + b * b)
            b += 1
        a += 1
    return len(seen)


def squares_mod(n: int) -> set:
    return {x * x % n for x in range(n)}
