from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3kit import local
from k3kit.local import REAL, hilbert_symbol, is_isotropic, represents_locally

PRIMES = [2, 3, 5, 7, 11, 13]
nonzero = st.integers(-60, 60).filter(lambda x: x != 0)
small_nonzero = st.integers(1, 12).flatmap(lambda x: st.sampled_from((x, -x)))


def test_known_hilbert_symbols():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, REAL) == -1
    assert hilbert_symbol(-1, -1, 3) == 1
    assert hilbert_symbol(2, 3, 3) == -1  # 2 is a non-residue mod 3
    assert hilbert_symbol(5, 7, 2) == 1
    assert hilbert_symbol(3, 3, 2) == -1


@given(nonzero, nonzero, st.sampled_from(PRIMES + [REAL]))
def test_hilbert_symmetric_and_square_invariant(a, b, p):
    assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)
    assert hilbert_symbol(a, b, p) == hilbert_symbol(a * 49, b * 4, p)
    assert hilbert_symbol(a, -a, p) == 1


@given(nonzero, nonzero, nonzero, st.sampled_from(PRIMES))
def test_hilbert_bimultiplicative(a, b, c, p):
    assert hilbert_symbol(a, b * c, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a, c, p)


@given(nonzero, nonzero)
def test_hilbert_product_formula(a, b):
    primes = {2} | set(local.relevant_places(a * b, 1)[1:])
    total = hilbert_symbol(a, b, REAL)
    for p in primes:
        total *= hilbert_symbol(a, b, p)
    assert total == 1


def _has_small_zero(diag, bound=6):
    for x in product(range(-bound, bound + 1), repeat=len(diag)):
        if any(x) and sum(a * t * t for a, t in zip(diag, x)) == 0:
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(st.lists(small_nonzero, min_size=2, max_size=4))
def test_rational_zero_implies_local_isotropy(diag):
    if _has_small_zero(diag, 5):
        for p in [REAL] + PRIMES:
            assert is_isotropic(diag, p)


@settings(max_examples=60, deadline=None)
@given(st.lists(small_nonzero, min_size=2, max_size=3))
def test_local_isotropy_everywhere_implies_rational_zero(diag):
    # Hasse-Minkowski for ternary/binary forms: a zero exists, and it is small here
    det = 1
    for a in diag:
        det *= a
    places = local.relevant_places(0, det)
    if all(is_isotropic(diag, p) for p in places):
        assert _has_small_zero(diag, 24)


def test_classical_forms():
    assert not is_isotropic([1, 1, 1], REAL)
    assert not is_isotropic([1, 1, 1, 1], 2)  # sum of four squares is anisotropic at 2
    assert is_isotropic([1, 1, 1, 1, 1], 2)
    assert not is_isotropic([1, 1, 1], 2)
    assert is_isotropic([1, 1, -2], 2)
    assert not represents_locally([1, 1, 1], 7, 2)  # 7 is not a sum of three rational squares
    assert represents_locally([1, 1, 1], 6, 2)
    assert represents_locally([Fraction(1, 2), 3], 2, 3) == is_isotropic([Fraction(1, 2), 3, -2], 3)


def test_degenerate_form_rejected():
    with pytest.raises(ValueError):
        is_isotropic([1, 0], 3)


def test_squares():
    assert local.is_local_square(17, 2)
    assert not local.is_local_square(5, 2)
    assert local.is_local_square(Fraction(4, 9), 5)
    assert local.is_rational_square(Fraction(9, 16))
    assert not local.is_rational_square(-4)
