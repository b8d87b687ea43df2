import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from brauercount import oracles
from brauercount.arith import (
    INF,
    NormFormSpec,
    Place,
    factor,
    hilbert_symbol,
    is_prime,
    kronecker,
    norm_form_value,
    ramified_places,
    squarefree_kernel,
)
from brauercount.errors import InputError

PLACES = [0, 2, 3, 5, 7, 11, 13]
nonzero = st.integers(-10**6, 10**6).filter(bool)
small_nonzero = st.integers(-300, 300).filter(bool)


def test_factor_examples():
    f = factor(12)
    assert (f.sign, f.factors) == (1, ((2, 2), (3, 1)))
    f = factor(-1)
    assert (f.sign, f.factors) == (-1, ())
    assert factor(1000000007).factors == ((1000000007, 1),)


def test_factor_1e9_plus_7_is_prime_by_trial_division():
    n = 1000000007
    d = 2
    while d * d <= n:
        assert n % d
        d += 1


def test_factor_large():
    n = 2**64 + 1
    f = factor(n)
    assert f.value() == n
    assert f.factors == ((274177, 1), (67280421310721, 1))
    p, q = 2**61 - 1, 2**31 - 1
    assert factor(p * q * q).factors == ((q, 2), (p, 1))


def test_factor_rejects():
    with pytest.raises(InputError):
        factor(0)
    with pytest.raises(InputError):
        factor(2**127)


def test_factor_round_trip_random_64bit():
    rng = random.Random(20240601)
    for _ in range(10**5):
        n = rng.getrandbits(64) or 1
        f = factor(n)
        assert f.value() == n
        assert all(is_prime(p) for p, _ in f.factors)


def test_factor_deterministic():
    n = 600851475143 * 97
    assert factor(n) == factor(n)


def test_is_prime_against_sieve():
    from brauercount.sieve import prime_mask

    mask = prime_mask(20000)
    for n in range(20001):
        assert is_prime(n) == bool(mask[n])
    # strong pseudoprimes to several bases
    assert not is_prime(3215031751)
    assert not is_prime(3825123056546413051)
    assert is_prime(2**89 - 1)


def test_kronecker_examples():
    assert kronecker(2, 7) == 1
    assert 3 * 3 % 7 == 2
    for a in (-5, 0, 1, 2, 17):
        assert kronecker(a, 1) == 1
    assert kronecker(-1, 5) == 1


def test_kronecker_matches_euler_criterion():
    for p in (3, 5, 7, 11, 13, 101):
        sq = oracles.squares_mod(p)
        for a in range(-30, 31):
            expected = 0 if a % p == 0 else (1 if a % p in sq else -1)
            assert kronecker(a, p) == expected


def test_hilbert_examples():
    assert hilbert_symbol(-1, -1, INF) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert not oracles.local_solubility(-1, -1, 2)
    for b in (-7, -1, 2, 3, 10, Fraction(5, 3)):
        for v in PLACES:
            assert hilbert_symbol(1, b, v) == 1


def test_hilbert_small_table_against_oracle():
    # the full |a|, |b| <= 50 sweep lives in the acceptance suite
    for v in PLACES:
        for a in range(-12, 13):
            for b in range(-12, 13):
                if a and b:
                    assert (hilbert_symbol(a, b, v) == 1) == oracles.local_solubility(a, b, v), (a, b, v)


def test_hilbert_rationals_reduce_to_square_class():
    for v in PLACES:
        assert hilbert_symbol(Fraction(1, 6), 10, v) == hilbert_symbol(6, 10, v)
        assert hilbert_symbol(Fraction(-9, 4), 3, v) == hilbert_symbol(-1, 3, v)


def test_ramified_places_examples():
    assert ramified_places(-1, -1) == {INF, Place(2)}
    assert ramified_places(3, 5) == {INF, Place(2), Place(3), Place(5)}
    assert ramified_places(Fraction(1, 6), 10) == {INF, Place(2), Place(3), Place(5)}


def test_squarefree_kernel_examples():
    assert squarefree_kernel(18) == 2
    assert squarefree_kernel(-4) == -1
    assert squarefree_kernel(360) == 10


def test_norm_form_value_examples():
    sqrt2 = NormFormSpec((-2, 0, 1))
    assert norm_form_value(sqrt2, [0]) == 1
    assert norm_form_value(sqrt2, [3]) == -17
    assert norm_form_value(NormFormSpec((1, 0, 1)), [2]) == 5


def test_norm_form_value_quadratic_closed_form():
    for d in (-5, -1, 2, 3, 7):
        spec = NormFormSpec((-d, 0, 1))
        for t in (Fraction(0), Fraction(1, 3), Fraction(-7, 2), Fraction(11)):
            assert norm_form_value(spec, [t]) == 1 - d * t * t


def test_norm_form_value_cubic():
    # Q(2^(1/3)): N(1 + t w) = 1 + 2 t^3
    spec = NormFormSpec((-2, 0, 0, 1))
    for t in range(-5, 6):
        assert norm_form_value(spec, [t, 0]) == 1 + 2 * t**3
    # N(1 + w^2 s) = 1 + 4 s^3
    for s in range(-5, 6):
        assert norm_form_value(spec, [0, s]) == 1 + 4 * s**3


def test_norm_form_spec_rejects():
    with pytest.raises(InputError):
        NormFormSpec((-1, 0, 1))  # reducible
    with pytest.raises(InputError):
        NormFormSpec((1, 2))  # degree 1
    with pytest.raises(InputError):
        NormFormSpec((1, 0, 2))  # not monic


@settings(max_examples=300, deadline=None)
@given(nonzero, nonzero, st.sampled_from(PLACES))
def test_hilbert_symmetric(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


@settings(max_examples=300, deadline=None)
@given(small_nonzero, small_nonzero, small_nonzero, st.sampled_from(PLACES))
def test_hilbert_bilinear(a, b1, b2, v):
    assert hilbert_symbol(a, b1 * b2, v) == hilbert_symbol(a, b1, v) * hilbert_symbol(a, b2, v)


@settings(max_examples=300, deadline=None)
@given(nonzero, st.sampled_from(PLACES))
def test_hilbert_steinberg(a, v):
    assert hilbert_symbol(a, -a, v) == 1
    if a != 1:
        assert hilbert_symbol(a, 1 - a, v) == 1


@settings(max_examples=300, deadline=None)
@given(nonzero, nonzero, st.integers(1, 50), st.integers(1, 50))
def test_product_formula(a, b, da, db):
    a, b = Fraction(a, da), Fraction(b, db)
    prod = 1
    for v in ramified_places(a, b):
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1


def test_unramified_places_are_trivial():
    rng = random.Random(3)
    for _ in range(200):
        a, b = rng.randint(1, 10**4), -rng.randint(1, 10**4)
        ram = ramified_places(a, b)
        for p in (3, 5, 7, 11, 13, 17, 19, 23):
            if Place(p) not in ram:
                assert hilbert_symbol(a, b, p) == 1
