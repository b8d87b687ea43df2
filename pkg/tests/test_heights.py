import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from brauercount import oracles
from brauercount.errors import InputError
from brauercount.heights import (
    HeightSpec,
    ProjPoint,
    count_p1,
    enumerate_points,
    height,
    iter_batches,
    naive_height,
    normalize,
)


def _points(n, T, outer=None):
    return np.concatenate(list(iter_batches(n, T, outer)))


def test_normalize_examples():
    assert normalize((4, 6)).coords == (2, 3)
    assert normalize((-1, 2)).coords == (1, -2)
    assert normalize((0, -5, 10)).coords == (0, 1, -2)


def test_normalize_rejects_zero():
    with pytest.raises(InputError):
        normalize((0, 0, 0))


def test_naive_height_examples():
    assert naive_height(normalize((1, 2, 3))) == 3
    assert naive_height(normalize((1, 0))) == 1
    assert naive_height(normalize((7, -12))) == 12


def test_height_examples():
    assert height(normalize((1, 2, 3)), HeightSpec.anticanonical(2)) == 27
    assert height(normalize((1, 0)), HeightSpec.naive()) == 1
    assert height(normalize((2, 3)), HeightSpec.anticanonical(1)) == 9


def test_naive_bound_inverts_exponent():
    h = HeightSpec.anticanonical(1)
    assert h.naive_bound(8) == 2
    assert h.naive_bound(9) == 3
    assert h.naive_bound(64 * 10**6) == 8000
    assert HeightSpec.anticanonical(2).naive_bound(26) == 2
    assert HeightSpec.naive().naive_bound(17) == 17


def test_enumerate_examples():
    seen = []
    enumerate_points(1, 1, seen.append)
    assert sorted(p.coords for p in seen) == [(0, 1), (1, -1), (1, 0), (1, 1)]
    seen = []
    enumerate_points(1, 2, seen.append)
    assert len(seen) == 8
    assert {(1, 2), (1, -2), (2, 1), (2, -1)} <= {p.coords for p in seen}
    seen = []
    enumerate_points(2, 1, seen.append)
    assert len(seen) == (3**3 - 1) // 2 == 13


def test_enumeration_matches_brute_force_small():
    for n, Tmax in ((1, 40), (2, 12)):
        for T in range(1, Tmax + 1):
            pts = _points(n, T)
            keys = oracles.encode_points(pts, T)
            assert len(np.unique(keys)) == len(keys)
            assert np.array_equal(np.sort(keys), oracles.brute_force_points(n, T))


def test_enumerated_points_are_canonical():
    pts = _points(2, 15)
    for row in pts.tolist():
        assert normalize(row).coords == tuple(row)


def test_monotone_in_T():
    for n in (1, 2):
        prev = None
        for T in range(1, 12):
            cur = {tuple(r) for r in _points(n, T).tolist()}
            if prev is not None:
                assert prev <= cur
            prev = cur


def test_partition_independent():
    T = 30
    whole = _points(2, T)
    parts = np.concatenate([_points(2, T, range(0, 7)), _points(2, T, range(7, 19)), _points(2, T, range(19, T + 1))])
    assert sorted(map(tuple, whole.tolist())) == sorted(map(tuple, parts.tolist()))


def test_count_p1_matches_enumeration():
    for T in (1, 2, 5, 17, 60):
        assert count_p1(T) == len(_points(1, T))


def test_count_p1_asymptotic():
    T = 10**4
    assert count_p1(T) / (12 / math.pi**2 * T * T) == pytest.approx(1, rel=0.05)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=2, max_size=4).filter(any), st.integers(-50, 50).filter(bool))
def test_height_scaling_invariant(raw, k):
    P = normalize(raw)
    assert normalize([k * x for x in raw]) == P
    for spec in (HeightSpec.naive(), HeightSpec.anticanonical(len(raw) - 1)):
        assert height(normalize([k * x for x in raw]), spec) == height(P, spec)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=5).filter(any))
def test_normalize_idempotent(raw):
    P = normalize(raw)
    assert normalize(P.coords) == P
