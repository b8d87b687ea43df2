"""Compiled inner loops (numba) for the counting engine.

Everything here works on int64 and is released from the GIL so chunks of
the outer loop can run on threads.  The pure-Python routines in
:mod:`brauercount.model` define the semantics; tests check agreement.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_OPTS = dict(nogil=True, cache=True)


@njit(**_OPTS)
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(**_OPTS)
def _powmod(b, e, m):
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


@njit(**_OPTS)
def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if _powmod(a, (p - 1) // 2, p) == 1 else -1


@njit(**_OPTS)
def hilbert_i64(a, b, p):
    """Hilbert symbol (a, b)_p for nonzero int64 a, b; p == 0 is the real place."""
    if p == 0:
        return -1 if (a < 0 and b < 0) else 1
    alpha = 0
    while a % p == 0:
        a //= p
        alpha += 1
    beta = 0
    while b % p == 0:
        b //= p
        beta += 1
    if p == 2:
        ua = a % 8
        ub = b % 8
        e = 0
        if ua % 4 == 3 and ub % 4 == 3:
            e += 1
        if alpha % 2 == 1 and (ub == 3 or ub == 5):
            e += 1
        if beta % 2 == 1 and (ua == 3 or ua == 5):
            e += 1
        return -1 if e % 2 == 1 else 1
    s = 1
    if alpha % 2 == 1 and beta % 2 == 1 and p % 4 == 3:
        s = -s
    if beta % 2 == 1:
        s *= _legendre(a, p)
    if alpha % 2 == 1:
        s *= _legendre(b, p)
    return s


@njit(**_OPTS)
def _sieve(M):
    is_p = np.ones(M + 1, dtype=np.bool_)
    is_p[0] = False
    if M >= 1:
        is_p[1] = False
    i = 2
    while i * i <= M:
        if is_p[i]:
            for j in range(i * i, M + 1, i):
                is_p[j] = False
        i += 1
    return is_p


@njit(**_OPTS)
def inert_parity_table(M, d):
    """t[n] = number of primes p not dividing 2d with (d|p) = -1 and v_p(n) odd."""
    t = np.zeros(M + 1, dtype=np.int8)
    is_p = _sieve(M)
    for p in range(3, M + 1, 2):
        if not is_p[p] or d % p == 0:
            continue
        if _legendre(d, p) != -1:
            continue
        pe = p
        sign = 1
        while pe <= M:
            for k in range(pe, M + 1, pe):
                t[k] += sign
            sign = -sign
            if pe > M // p:
                break
            pe *= p
    return t


@njit(**_OPTS)
def _is_norm(m, d, table, ram_primes):
    if table[abs(m)] != 0:
        return False
    if d < 0 and m < 0:
        return False
    for p in ram_primes:
        if hilbert_i64(d, m, p) != 1:
            return False
    return True


@njit(**_OPTS)
def count_binary_norm_chunk(a_lo, a_hi, T, c20, c11, c02, discs, tables, ram_primes, ram_count):
    """Per-height counts for the quadratic norm-form family on P^1.

    Points (x0 : x1) with x0 > 0 (or the point (0 : 1)), outer loop a = |x1|
    over [a_lo, a_hi).  The norm value is c20 x0^2 + c11 x0 x1 + c02 x1^2;
    a point is counted when that value is a norm from every Q(sqrt d).
    Returns (counted, baseline) indexed by naive height.
    """
    hits = np.zeros(T + 1, dtype=np.int64)
    base = np.zeros(T + 1, dtype=np.int64)
    ntw = discs.shape[0]
    for a in range(a_lo, a_hi):
        if a == 0:
            xs0 = 1
            xs1 = 1
        else:
            xs0 = 1
            xs1 = T
        for x0 in range(xs0, xs1 + 1):
            if a > 0 and _gcd(x0, a) != 1:
                continue
            h = x0 if x0 > a else a
            for sgn in (1, -1):
                if a == 0 and sgn == -1:
                    continue
                x1 = sgn * a
                m = c20 * x0 * x0 + c11 * x0 * x1 + c02 * x1 * x1
                if m == 0:
                    continue
                base[h] += 1
                ok = True
                for i in range(ntw):
                    if not _is_norm(m, discs[i], tables[i], ram_primes[i, : ram_count[i]]):
                        ok = False
                        break
                if ok:
                    hits[h] += 1
        if a == 1:
            # the point (0 : 1)
            m = c02
            if m != 0:
                base[1] += 1
                ok = True
                for i in range(ntw):
                    if not _is_norm(m, discs[i], tables[i], ram_primes[i, : ram_count[i]]):
                        ok = False
                        break
                if ok:
                    hits[1] += 1
    return hits, base


@njit(**_OPTS)
def landau_counts(x, checkpoints, small_primes, seg_size):
    """#{n <= B : n is a sum of two squares} for each B in checkpoints (sorted, max = x).

    n qualifies iff every prime = 3 mod 4 divides it to even order.  Primes
    up to sqrt(x) are divided out per segment; the cofactor left is 1 or a
    single prime.
    """
    out = np.zeros(checkpoints.shape[0], dtype=np.int64)
    rem = np.empty(seg_size, dtype=np.int64)
    bad = np.empty(seg_size, dtype=np.bool_)
    total = 0
    ci = 0
    lo = 1
    while lo <= x:
        hi = min(lo + seg_size, x + 1)
        n = hi - lo
        for i in range(n):
            rem[i] = lo + i
            bad[i] = False
        for p in small_primes:
            start = ((lo + p - 1) // p) * p
            for k in range(start, hi, p):
                i = k - lo
                e = 0
                r = rem[i]
                while r % p == 0:
                    r //= p
                    e += 1
                rem[i] = r
                if p % 4 == 3 and e % 2 == 1:
                    bad[i] = True
        for i in range(n):
            if not bad[i] and rem[i] % 4 != 3:
                total += 1
            v = lo + i
            while ci < checkpoints.shape[0] and checkpoints[ci] == v:
                out[ci] = total
                ci += 1
        lo = hi
    return out
