"""Prime sieves shared by the arithmetic, analytic and counting modules.

All tables are built once per process and cached; callers must treat the
returned arrays as read-only.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

SPF_LIMIT = 10**6


def prime_mask(n: int) -> np.ndarray:
    """Boolean array ``m`` of length n+1 with ``m[k]`` true iff k is prime."""
    n = int(n)
    mask = np.ones(max(n + 1, 2), dtype=bool)
    mask[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask[: n + 1]


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (cached)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    arr = np.flatnonzero(prime_mask(n)).astype(np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=1)
def spf_table() -> np.ndarray:
    """Smallest-prime-factor table for 0 <= k < SPF_LIMIT."""
    spf = np.zeros(SPF_LIMIT, dtype=np.int32)
    for p in primes_up_to(int(SPF_LIMIT**0.5) + 1):
        p = int(p)
        block = spf[p * p :: p]
        block[block == 0] = p
    idx = np.arange(SPF_LIMIT, dtype=np.int32)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf.setflags(write=False)
    return spf
