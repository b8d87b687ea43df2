"""Projective points over Q, their heights, and bounded-height enumeration."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class ProjPoint:
    """Canonical representative: coprime integers, first nonzero entry positive."""

    coords: tuple

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def normalize(raw: Sequence[int]) -> ProjPoint:
    coords = [int(c) for c in raw]
    g = reduce(math.gcd, coords, 0)
    if g == 0:
        raise InputError("the zero vector is not a projective point")
    first = next(c for c in coords if c)
    if first < 0:
        g = -g
    return ProjPoint(tuple(c // g for c in coords))


def naive_height(P: ProjPoint) -> int:
    # primitive integer coordinates: every finite place contributes 1
    return max(abs(c) for c in P.coords)


@dataclass(frozen=True)
class HeightSpec:
    """``ambient_dim is None`` selects the naive height; otherwise the
    anticanonical height on P^n, i.e. the (n+1)-th power of the naive one."""

    ambient_dim: int | None = None

    @classmethod
    def naive(cls) -> "HeightSpec":
        return cls(None)

    @classmethod
    def anticanonical(cls, n: int) -> "HeightSpec":
        if n < 1:
            raise InputError("ambient dimension must be >= 1")
        return cls(n)

    @property
    def is_naive(self) -> bool:
        return self.ambient_dim is None

    @property
    def exponent(self) -> int:
        return 1 if self.ambient_dim is None else self.ambient_dim + 1

    def naive_bound(self, B: int) -> int:
        """Largest naive height T with T**exponent <= B."""
        if B < 1:
            return 0
        T = int(round(B ** (1.0 / self.exponent)))
        while T**self.exponent > B:
            T -= 1
        while (T + 1) ** self.exponent <= B:
            T += 1
        return T

    def __str__(self):
        return "naive" if self.is_naive else f"anticanonical(P^{self.ambient_dim})"


def height(P: ProjPoint, spec: HeightSpec) -> int:
    if not spec.is_naive and spec.ambient_dim != P.dim:
        raise InputError(f"height spec is for P^{spec.ambient_dim}, point lies in P^{P.dim}")
    return naive_height(P) ** spec.exponent


# --------------------------------------------------------------------------
# enumeration


def _prefix_block(n: int, T: int) -> np.ndarray:
    """All v in [-T, T]^n whose first nonzero entry is positive (zero excluded)."""
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rng = np.arange(-T, T + 1, dtype=np.int64)
    grids = np.meshgrid(*([rng] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    nz = pts != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = pts[np.arange(len(pts)), first]
    return pts[has & (lead > 0)]


def _row_gcd(block: np.ndarray) -> np.ndarray:
    if block.shape[1] == 0:
        return np.zeros(len(block), dtype=np.int64)
    return np.gcd.reduce(np.abs(block), axis=1)


def outer_domain(T: int) -> range:
    """Values of |x_n| visited by the outer loop of :func:`enumerate_points`."""
    return range(0, T + 1)


def iter_batches(n: int, T: int, outer: Iterable[int] | None = None) -> Iterator[np.ndarray]:
    """Canonical points of P^n with naive height <= T, as integer arrays.

    The outer loop runs over a = |x_n|; ``outer`` restricts it to a subset of
    ``outer_domain(T)`` so disjoint ranges can be processed independently.
    Each yielded array has shape (k, n+1).
    """
    if n < 1:
        raise InputError("dimension must be >= 1")
    if T < 1:
        return
    outer = outer_domain(T) if outer is None else outer
    prefix = None
    for a in outer:
        if a < 0 or a > T:
            raise InputError(f"outer index {a} outside [0, {T}]")
        if a == 0:
            # points with x_n = 0 are the points of P^{n-1}
            if n == 1:
                yield np.array([[1, 0]], dtype=np.int64)
            else:
                for sub in iter_batches(n - 1, T):
                    yield np.hstack([sub, np.zeros((len(sub), 1), dtype=np.int64)])
            continue
        if prefix is None:
            prefix = _prefix_block(n, T)
            prefix_gcd = _row_gcd(prefix)
        keep = np.gcd(prefix_gcd, a) == 1
        body = prefix[keep]
        k = len(body)
        out = np.empty((2 * k, n + 1), dtype=np.int64)
        out[:k, :n] = body
        out[:k, n] = a
        out[k:, :n] = body
        out[k:, n] = -a
        if a == 1:
            unit = np.zeros((1, n + 1), dtype=np.int64)
            unit[0, n] = 1
            out = np.vstack([unit, out])
        yield out


def enumerate_points(
    n: int,
    T: int,
    visitor: Callable[[ProjPoint], None],
    outer: Iterable[int] | None = None,
) -> None:
    """Call ``visitor`` once for every point of P^n(Q) with naive height <= T."""
    for batch in iter_batches(n, T, outer):
        for row in batch.tolist():
            visitor(ProjPoint(tuple(row)))


def count_p1(T: int) -> int:
    """#P^1(Q) with naive height <= T, via 4 * sum_{k<=T} phi(k)."""
    if T < 1:
        return 0
    phi = np.arange(T + 1, dtype=np.int64)
    for p in range(2, T + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return int(4 * phi[1:].sum())
