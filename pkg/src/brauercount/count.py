"""Counting engine: N(B) over checkpoints, the Landau counter and log-power fits."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .arith import factor
from .errors import InputError, UndefinedAtPoint
from .heights import HeightSpec, iter_batches, ProjPoint
from .model import FamilySpec, NormFormFamily, fiber_has_point, in_open_locus
from .sieve import primes_up_to

log = logging.getLogger(__name__)

# at most ~2e10 candidate points, i.e. naive height 1e5 on P^1
MAX_POINTS = 2 * 10**10
LANDAU_MAX = 10**9


@dataclass(frozen=True)
class CountJob:
    family: FamilySpec
    checkpoints: tuple
    height: HeightSpec | None = None
    workers: int = 1

    def __post_init__(self):
        cps = tuple(int(b) for b in self.checkpoints)
        object.__setattr__(self, "checkpoints", cps)
        if self.height is None:
            object.__setattr__(self, "height", HeightSpec.anticanonical(self.family.base_dim))
        if not cps:
            raise InputError("at least one checkpoint is required")
        if any(b < 1 for b in cps) or any(x >= y for x, y in zip(cps, cps[1:])):
            raise InputError("checkpoints must be positive and strictly increasing")
        if self.workers < 1:
            raise InputError("workers must be positive")
        h = self.height
        if not h.is_naive and h.ambient_dim != self.family.base_dim:
            raise InputError(
                f"anticanonical height on P^{h.ambient_dim} does not match base P^{self.family.base_dim}"
            )
        n = self.family.base_dim
        T = self.naive_bound
        if (2 * T + 1) ** (n + 1) // 2 > MAX_POINTS:
            raise InputError(f"checkpoint {cps[-1]} needs naive height {T} on P^{n}: infeasible")

    @property
    def naive_bound(self) -> int:
        return self.height.naive_bound(self.checkpoints[-1])


@dataclass(frozen=True)
class CountRow:
    B: int
    N: int
    baseline: int


@dataclass
class CountSeries:
    rows: list
    height: str = "anticanonical"

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    @classmethod
    def from_arrays(cls, B, N, baseline, height="") -> "CountSeries":
        return cls([CountRow(int(b), int(n), int(c)) for b, n, c in zip(B, N, baseline)], height)


@dataclass
class FitResult:
    c: float
    theta: float
    residual: float
    local_exponents: list = field(default_factory=list)
    excluded: int = 0


# --------------------------------------------------------------------------
# run_count


def _chunks(T: int, pieces: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, T + 1, pieces + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges, edges[1:]) if b > a]


def _generic_chunk(family, n: int, T: int, lo: int, hi: int):
    hits = np.zeros(T + 1, dtype=np.int64)
    base = np.zeros(T + 1, dtype=np.int64)
    for batch in iter_batches(n, T, range(lo, hi)):
        heights = np.abs(batch).max(axis=1)
        for row, h in zip(batch.tolist(), heights.tolist()):
            P = ProjPoint(tuple(row))
            if not in_open_locus(family, P):
                continue
            base[h] += 1
            if fiber_has_point(family, P):
                hits[h] += 1
    return hits, base


def _kernel_eligible(family) -> bool:
    return (
        isinstance(family, NormFormFamily)
        and family.E.degree == 2
        and family.evaluable
    )


def _binary_form_bound(c20: int, c11: int, c02: int, T: int) -> int:
    x = np.arange(-T, T + 1, dtype=object)
    edge1 = c20 * T * T + c11 * T * x + c02 * x * x
    edge2 = c20 * x * x + c11 * x * T + c02 * T * T
    return int(max(abs(v) for v in list(edge1) + list(edge2)))


def _kernel_inputs(family: NormFormFamily, T: int):
    form = family.E.homogeneous_form
    c20, c11, c02 = form.get((2, 0), 0), form.get((1, 1), 0), form.get((0, 2), 0)
    M = _binary_form_bound(c20, c11, c02, T)
    if M >= 2**62 // 4:
        raise InputError("norm values exceed the int64 kernel range")
    discs = np.array([tw.disc for tw in family.twists], dtype=np.int64)
    tables = [kernels.inert_parity_table(M, int(d)) for d in discs]
    tables = np.stack(tables) if tables else np.zeros((0, M + 1), dtype=np.int8)
    ram = [[2] + [p for p in factor(int(d)).primes() if p != 2] for d in discs]
    width = max((len(r) for r in ram), default=1)
    ram_primes = np.zeros((len(ram), width), dtype=np.int64)
    ram_count = np.zeros(len(ram), dtype=np.int64)
    for i, r in enumerate(ram):
        ram_primes[i, : len(r)] = r
        ram_count[i] = len(r)
    return (c20, c11, c02, discs, tables, ram_primes, ram_count)


def per_height_counts(family: FamilySpec, T: int, workers: int = 1, use_kernel: bool | None = None):
    """(hits, baseline) arrays indexed by naive height 0..T."""
    n = family.base_dim
    if use_kernel is None:
        use_kernel = _kernel_eligible(family)
    pieces = max(4 * workers, 1)
    chunks = _chunks(T, pieces)
    if use_kernel:
        if not _kernel_eligible(family):
            raise InputError("the compiled kernel handles quadratic norm-form families only")
        args = _kernel_inputs(family, T)

        def run(ch):
            return kernels.count_binary_norm_chunk(ch[0], ch[1], T, *args)

        if workers == 1:
            parts = [run(ch) for ch in chunks]
        else:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(run, chunks))
    elif workers == 1:
        parts = [_generic_chunk(family, n, T, lo, hi) for lo, hi in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_generic_chunk, family, n, T, lo, hi) for lo, hi in chunks]
            parts = [f.result() for f in futs]
    hits = np.zeros(T + 1, dtype=np.int64)
    base = np.zeros(T + 1, dtype=np.int64)
    for h, b in parts:
        hits += h
        base += b
    return hits, base


def run_count(job: CountJob, use_kernel: bool | None = None) -> CountSeries:
    T = job.naive_bound
    hits, base = per_height_counts(job.family, T, job.workers, use_kernel)
    ch, cb = np.cumsum(hits), np.cumsum(base)
    rows = []
    for B in job.checkpoints:
        t = job.height.naive_bound(B)
        rows.append(CountRow(B, int(ch[t]), int(cb[t])))
    return CountSeries(rows, str(job.height))


# --------------------------------------------------------------------------
# Landau


def landau_counts(checkpoints: Sequence[int]) -> list[int]:
    cps = np.array(sorted(int(x) for x in checkpoints), dtype=np.int64)
    if len(cps) == 0:
        return []
    x = int(cps[-1])
    if cps[0] < 1:
        raise InputError("x must be >= 1")
    if x > LANDAU_MAX:
        raise InputError(f"x = {x} exceeds the supported bound {LANDAU_MAX}")
    small = primes_up_to(math.isqrt(x))
    seg = min(1 << 22, x)
    return [int(v) for v in kernels.landau_counts(x, cps, small, seg)]


def landau_count(x: int) -> int:
    """#{1 <= n <= x : n = a^2 + b^2}."""
    return landau_counts([x])[0]


def landau_series(checkpoints: Sequence[int]) -> CountSeries:
    cps = sorted(int(x) for x in checkpoints)
    return CountSeries.from_arrays(cps, landau_counts(cps), cps, "integers")


# --------------------------------------------------------------------------
# fitting


def fit_log_power(series: CountSeries | Sequence) -> FitResult:
    """Least squares for log(N/B) = log c + theta * log log B."""
    rows = [(r.B, r.N) if isinstance(r, CountRow) else (r[0], r[1]) for r in series]
    if rows and all(n == 0 for _, n in rows):
        raise InputError("all counts are zero")
    good = [(b, n) for b, n in rows if n > 0 and b >= 3]
    excluded = len(rows) - len(good)
    if excluded:
        log.warning("fit_log_power: excluded %d rows with N = 0 or B < 3", excluded)
    if len(good) < 3:
        raise InputError("need at least 3 rows with N > 0 and B >= 3")
    x = np.array([math.log(math.log(b)) for b, _ in good])
    y = np.array([math.log(n / b) for b, n in good])
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    local = [
        (good[i + 1][0], float((y[i + 1] - y[i]) / (x[i + 1] - x[i])))
        for i in range(len(good) - 1)
    ]
    return FitResult(
        c=float(math.exp(coef[0])),
        theta=float(coef[1]),
        residual=float(math.sqrt(np.mean(resid**2))),
        local_exponents=local,
        excluded=excluded,
    )
