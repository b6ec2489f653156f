from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from partial_steinhaus.core.descent import (
    DescentError,
    Dimension,
    NotOnSphere,
    NotRepresentable,
    SphereRationalPoint,
    descend,
    descent_path,
    is_squared_lattice_distance,
    lattice_witness,
    random_sphere_rational,
)
from partial_steinhaus.models.geometry import IntVec3, RationalPoint


def _excluded(n):
    while n and n % 4 == 0:
        n //= 4
    return n % 8 == 7


def test_three_square_examples():
    assert not is_squared_lattice_distance(7, 3)
    assert is_squared_lattice_distance(6, 3)
    assert lattice_witness(6, 3) == (1, 1, 2)
    assert not is_squared_lattice_distance(28, "3")
    assert lattice_witness(28, Dimension.THREE) is None
    assert is_squared_lattice_distance(0, 3)


def test_two_square_examples():
    assert is_squared_lattice_distance(5, 2)
    assert lattice_witness(5, 2) == (1, 2)
    assert not is_squared_lattice_distance(3, 2)
    assert is_squared_lattice_distance(9, 2)
    assert not is_squared_lattice_distance(21, 2)


def test_four_or_more_squares():
    assert all(is_squared_lattice_distance(n, 4) for n in range(200))
    assert is_squared_lattice_distance(7, "4plus")
    assert not is_squared_lattice_distance(-1, 4)
    with pytest.raises(DescentError):
        lattice_witness(7, 4)


@pytest.mark.parametrize("n", range(0, 300))
def test_predicates_match_witness_search(n):
    assert is_squared_lattice_distance(n, 3) == (lattice_witness(n, 3) is not None)
    assert is_squared_lattice_distance(n, 3) == (not _excluded(n))
    assert is_squared_lattice_distance(n, 2) == (lattice_witness(n, 2) is not None)
    witness = lattice_witness(n, 3)
    if witness is not None:
        assert sum(c * c for c in witness) == n


def test_descent_from_explicit_point():
    # (1/3, 2/3, 7/3) lies on the sphere of squared radius 6
    start = SphereRationalPoint(RationalPoint(IntVec3(1, 2, 7), 3), 6)
    assert start.on_sphere
    steps, vector = descent_path(start)
    assert vector.norm_sq() == 6
    assert [s.denominator for s in steps][0] == 3


def test_descent_rejects_points_off_the_sphere():
    with pytest.raises(NotOnSphere):
        descend(SphereRationalPoint(RationalPoint(IntVec3(1, 1, 4), 3), 6))


def test_integral_start_is_returned_unchanged():
    start = SphereRationalPoint(RationalPoint.integral((1, 1, 2)), 6)
    steps, vector = descent_path(start)
    assert steps == []
    assert vector == IntVec3(1, 1, 2)


def test_random_start_requires_representable_n():
    with pytest.raises(NotRepresentable):
        random_sphere_rational(7)
    origin = random_sphere_rational(0)
    assert origin.point.den == 1 and origin.n_value == 0


def assert_descent_sound(n, seed):
    start = random_sphere_rational(n, seed=seed)
    assert start.on_sphere and start.point.reduced().den > 1
    steps, vector = descent_path(start)
    assert vector.norm_sq() == n
    denominators = [s.denominator for s in steps]
    assert denominators == sorted(denominators, reverse=True)
    assert len(set(denominators)) == len(denominators)
    for step in steps:
        assert 0 < step.distance_sq <= Fraction(3, 4)


def test_descent_for_every_representable_n():
    for n in range(1, 1001):
        if _excluded(n):
            continue
        for seed in range(10):
            assert_descent_sound(n, seed)


@pytest.mark.slow
def test_descent_up_to_ten_thousand():
    for n in range(1001, 10001):
        if _excluded(n):
            continue
        for seed in range(3):
            assert_descent_sound(n, seed)


def test_descent_sampled_up_to_ten_thousand():
    for n in range(1001, 10001, 97):
        if _excluded(n):
            continue
        for seed in range(5):
            assert_descent_sound(n, seed)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10000), st.integers(0, 2**32))
def test_descent_round_trip(n, seed):
    if _excluded(n):
        return
    start = random_sphere_rational(n, seed=seed)
    assert descend(start).norm_sq() == n
