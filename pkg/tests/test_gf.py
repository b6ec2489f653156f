import pytest
from hypothesis import given, strategies as st
from sympy import primerange

from partial_steinhaus.core.gf import (
    NotInvertible,
    element,
    half,
    inverse,
    mod_inv,
    residue,
    square_roots,
    sqrt_mod,
)
from partial_steinhaus.models.field import FieldError, FpElement, InvalidPrime, Prime

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 97]


@pytest.mark.parametrize("value", [2, 4, 9, 15, 1, 0, -3])
def test_prime_rejects_non_odd_primes(value):
    with pytest.raises(InvalidPrime):
        Prime(value)


def test_prime_accepts_odd_primes():
    assert [Prime(p).value for p in (3, 5, 101)] == [3, 5, 101]


def test_mod_inv_examples():
    assert mod_inv(element(2, 3)) == element(2, 3)
    assert mod_inv(element(3, 7)) == element(5, 7)
    with pytest.raises(NotInvertible):
        mod_inv(element(0, 5))
    with pytest.raises(NotInvertible):
        inverse(10, 5)


@given(st.sampled_from(SMALL_PRIMES), st.integers())
def test_mod_inv_is_an_involution(p, a):
    if a % p == 0:
        return
    x = element(a, p)
    assert (x * mod_inv(x)).value == 1
    assert mod_inv(mod_inv(x)) == x


@given(st.integers(), st.sampled_from(SMALL_PRIMES))
def test_residue_is_canonical(value, p):
    r = residue(value, p)
    assert 0 <= r < p
    assert (value - r) % p == 0
    assert element(value, p).value == r


def test_half():
    assert half(3).value == 2
    assert half(5).value == 3
    assert (half(13) * 2).value == 1


def test_sqrt_mod_examples():
    assert [r.value for r in sqrt_mod(element(4, 7))] == [2, 5]
    assert sqrt_mod(element(3, 5)) == ()
    assert [r.value for r in sqrt_mod(element(0, 11))] == [0]


@pytest.mark.parametrize("p", list(primerange(3, 100)))
def test_square_roots_exhaustive(p):
    with_roots = 0
    for a in range(p):
        roots = square_roots(a, p)
        for r in roots:
            assert r * r % p == a
        if roots:
            with_roots += 1
            assert list(roots) == sorted(roots)
            if a:
                assert len(roots) == 2 and roots[0] + roots[1] == p
    assert with_roots == (p + 1) // 2


def test_element_arithmetic():
    a, b = element(2, 5), element(4, 5)
    assert a + b == element(1, 5)
    assert a - b == element(3, 5)
    assert a * b == element(3, 5)
    assert -a == element(3, 5)
    assert 1 - a == element(4, 5)


def test_mixed_moduli_rejected():
    with pytest.raises(FieldError):
        element(1, 3) + element(1, 5)


def test_element_requires_canonical_value():
    with pytest.raises(ValueError):
        FpElement(7, Prime(5))
