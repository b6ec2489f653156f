import pytest
from hypothesis import given, strategies as st
from sympy import primerange

from partial_steinhaus.core.lattice import (
    InvalidModulus,
    LatticeError,
    brute_force_conic,
    brute_force_lambda,
    build_w,
    complement_plane,
    conic_base_point,
    conic_points,
    decompose,
    enumerate_lambda,
    iso_vector,
    line_cells,
    scale_iso,
)
from partial_steinhaus.models.geometry import CubePoint, IntVec3, cube_points

PRIMES_TO_31 = list(primerange(3, 32))


def test_decompose_examples():
    d = decompose((7, -2, 3), 3)
    assert d.y.as_tuple() == (1, 1, 0)
    assert d.eps.as_tuple() == (2, -1, 1)
    d = decompose((0, 0, 0), 5)
    assert d.y.as_tuple() == (0, 0, 0) and d.eps.as_tuple() == (0, 0, 0)
    d = decompose((4, 4, 2), 3)
    assert d.y.as_tuple() == (1, 1, 2) and d.eps.as_tuple() == (1, 1, 0)


@pytest.mark.parametrize("m", [1, 0, -4])
def test_decompose_rejects_small_modulus(m):
    with pytest.raises(InvalidModulus):
        decompose((1, 2, 3), m)


@given(
    st.tuples(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6)),
    st.integers(2, 50),
)
def test_decompose_is_a_bijection(v, m):
    d = decompose(v, m)
    assert d.reconstruct() == IntVec3.of(v)
    again = decompose(d.y.as_vector() + d.eps.scale(m), m)
    assert again == d


def test_lambda_p3():
    vectors = [iso.as_tuple() for iso in enumerate_lambda(3)]
    expected = [(a, b, c) for a in (1, 2) for b in (1, 2) for c in (1, 2)]
    assert vectors == expected
    assert (1, 1, 0) not in vectors


@pytest.mark.parametrize("p", PRIMES_TO_31)
def test_counting_against_brute_force(p):
    lam = enumerate_lambda(p)
    conic = conic_points(p)
    assert len(lam) == p * p - 1
    assert len(conic) == p + 1
    assert lam == brute_force_lambda(p)
    assert conic == brute_force_conic(p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_iso_vector_invariants(p):
    for iso in enumerate_lambda(p):
        norm = iso.vector.as_vector().norm_sq()
        assert norm % p == 0
        assert (norm - iso.d.value * p) % (p * p) == 0


def test_conic_examples():
    assert [pt.as_tuple() for pt in conic_points(3)] == [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2)]
    assert sorted(pt.as_tuple() for pt in conic_points(5)) == sorted(
        [(1, 2, 0), (1, 3, 0), (1, 0, 2), (1, 0, 3), (0, 1, 2), (0, 1, 3)]
    )
    assert len(conic_points(7)) == 8


def test_conic_base_point():
    assert conic_base_point(3) == (1, 1, 1)
    # -(1 + 0) = 4 is a square mod 5 with smaller root 2
    assert conic_base_point(5) == (1, 0, 2)


def test_w_p3():
    w = {iso.as_tuple(): iso.d.value for iso in build_w(3)}
    assert len(w) == 4
    assert w[(1, 1, 1)] == 1
    assert w[(1, 2, 2)] == 0


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_w_partitions_lambda(p):
    w = build_w(p)
    assert len(w) == p + 1
    multiples = [scale_iso(iso, alpha) for iso in w for alpha in range(1, p)]
    assert sorted(multiples) == enumerate_lambda(p)


def test_iso_vector_rejects_non_isotropic():
    with pytest.raises(LatticeError):
        iso_vector((1, 1, 0), 3)
    with pytest.raises(LatticeError):
        iso_vector((0, 0, 0), 3)


def test_complement_plane_examples():
    plane = complement_plane(iso_vector((1, 1, 1), 3))
    assert [b.as_tuple() for b in plane.basis] == [(0, 1, 0), (0, 0, 1)]
    assert [pt.as_tuple() for pt in plane.points] == [(0, b, c) for b in range(3) for c in range(3)]

    plane = complement_plane(iso_vector((0, 1, 2), 5))
    assert [b.as_tuple() for b in plane.basis] == [(1, 0, 0), (0, 0, 1)]
    assert len(plane.points) == 25


@pytest.mark.parametrize("p", [3, 5, 7])
def test_complement_plane_tiles_the_cube(p):
    for iso in build_w(p):
        plane = complement_plane(iso)
        assert len(set(plane.points)) == p * p
        covered = []
        for c in plane.points:
            covered.extend(y for y, _ in line_cells(c.as_tuple(), iso.as_tuple(), p))
        assert sorted(covered) == [x.as_tuple() for x in cube_points(p)]


def test_line_cells():
    cells = line_cells((0, 0, 0), (2, 2, 1), 3)
    assert cells == [((0, 0, 0), (0, 0, 0)), ((2, 2, 1), (0, 0, 0)), ((1, 1, 2), (1, 1, 0))]


def test_cube_point_bounds():
    with pytest.raises(ValueError):
        CubePoint(3, 0, 0, 3)
    assert CubePoint.from_index(CubePoint(2, 0, 1, 3).index, 3) == CubePoint(2, 0, 1, 3)
