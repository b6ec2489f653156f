"""
Geometry of X_m and Z^3.

Covers the decomposition v = y(v) + m*eps(v), the set Lambda of isotropic
vectors of X_p, the projective conic x^2 + y^2 + z^2 = 0 over GF(p), the
representative set W and the complement planes C_lambda.
"""

from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from ..models.field import FpElement, PrimeLike, as_prime
from ..models.geometry import (
    ComplementPlane,
    CubePoint,
    Decomposition,
    IntVec3,
    IsoVector,
    ProjectivePoint,
    Triple,
)
from ..utils.logger import get_logger
from .gf import inverse, square_roots

logger = get_logger(__name__)


class LatticeError(Exception):
    """Lattice and conic related errors."""
    pass


class InvalidModulus(LatticeError, ValueError):
    """Cube size m must exceed 1."""
    pass


class ConicMismatchError(LatticeError):
    """The conic parametrization disagrees with brute-force enumeration."""
    pass


def decompose(v: Iterable[int], m: int) -> Decomposition:
    """Write v = y + m*eps with y in X_m (floor quotient, non-negative remainder)."""
    if m <= 1:
        raise InvalidModulus(f"m must be greater than 1, got {m}")
    quotients = []
    remainders = []
    for coord in v:
        q, r = divmod(int(coord), m)
        quotients.append(q)
        remainders.append(r)
    return Decomposition(y=CubePoint.of(remainders, m), eps=IntVec3.of(quotients), m=m)


def split(v: Sequence[int], m: int) -> Tuple[Triple, Triple]:
    """Tuple-level decompose for inner loops: (y, eps)."""
    qa, ra = divmod(v[0], m)
    qb, rb = divmod(v[1], m)
    qc, rc = divmod(v[2], m)
    return (ra, rb, rc), (qa, qb, qc)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def iso_vector(vector: Iterable[int], p: PrimeLike) -> IsoVector:
    """
    Attach d(lambda) to an element of Lambda.

    Raises:
        LatticeError: if vector is zero, outside X_p or not isotropic mod p
    """
    prime = as_prime(p)
    q = prime.value
    point = CubePoint.of(vector, q)
    norm = point.as_vector().norm_sq()
    if norm == 0:
        raise LatticeError("the zero vector is not in Lambda")
    if norm % q:
        raise LatticeError(f"{point} has squared norm {norm}, not divisible by {q}")
    return IsoVector(point, FpElement((norm % (q * q)) // q, prime))


def scale_iso(iso: IsoVector, alpha: int) -> IsoVector:
    """alpha*lambda reduced into X_p (alpha nonzero mod p)."""
    p = iso.p
    return iso_vector(((alpha * c) % p for c in iso.as_tuple()), iso.d.modulus)


def brute_force_lambda(p: PrimeLike) -> List[IsoVector]:
    """Lambda by direct scan over X_p."""
    q = as_prime(p).value
    found = []
    for index in range(1, q ** 3):
        point = CubePoint.from_index(index, q)
        if point.as_vector().norm_sq() % q == 0:
            found.append(iso_vector(point, p))
    return found


def normalize_projective(coords: Iterable[int], p: PrimeLike) -> ProjectivePoint:
    """Scale a nonzero triple so its first nonzero coordinate is 1."""
    prime = as_prime(p)
    q = prime.value
    values = [c % q for c in coords]
    leading = next((v for v in values if v), None)
    if leading is None:
        raise LatticeError("the zero triple is not a projective point")
    inv = inverse(leading, q)
    a, b, c = (FpElement(v * inv % q, prime) for v in values)
    return ProjectivePoint((a, b, c))


def brute_force_conic(p: PrimeLike) -> List[ProjectivePoint]:
    """Projective solutions of x^2 + y^2 + z^2 = 0 by scanning all of P^2(GF(p))."""
    q = as_prime(p).value
    found = set()
    for index in range(1, q ** 3):
        a, b, c = CubePoint.from_index(index, q)
        if (a * a + b * b + c * c) % q == 0:
            found.add(normalize_projective((a, b, c), p))
    return sorted(found)


def conic_base_point(p: PrimeLike) -> Triple:
    """
    First point (1, beta, gamma) on the conic.

    beta runs 0, 1, 2, ... and the first beta with -(1 + beta^2) a square is
    taken; gamma is its smaller square root.
    """
    q = as_prime(p).value
    for beta in range(q):
        roots = square_roots(-(1 + beta * beta), q)
        if roots:
            return (1, beta, roots[0])
    raise LatticeError(f"no base point found for p={q}")


@lru_cache(maxsize=None)
def _conic_points(q: int) -> Tuple[ProjectivePoint, ...]:
    alpha, beta, gamma = conic_base_point(q)
    candidates = [(alpha, -beta, gamma)]
    for t in range(q):
        candidates.append((
            alpha * t * t - 2 * beta * t - alpha,
            -beta * t * t - 2 * alpha * t + beta,
            gamma * (1 + t * t),
        ))
    swept = set()
    for triple in candidates:
        if any(c % q for c in triple):
            swept.add(normalize_projective(triple, q))
    points = tuple(sorted(swept))
    expected = tuple(brute_force_conic(q))
    if points != expected:
        logger.error(f"Conic sweep for p={q} gave {len(points)} points, expected {len(expected)}")
        raise ConicMismatchError(
            f"line sweep from base point {(alpha, beta, gamma)} disagrees with "
            f"brute force for p={q}"
        )
    logger.debug(f"Conic for p={q}: base point {(alpha, beta, gamma)}, {len(points)} points")
    return points


def conic_points(p: PrimeLike) -> List[ProjectivePoint]:
    """The p + 1 projective points of the conic, sorted and duplicate-free."""
    return list(_conic_points(as_prime(p).value))


@lru_cache(maxsize=None)
def _build_w(q: int) -> Tuple[IsoVector, ...]:
    return tuple(iso_vector(pt.as_tuple(), q) for pt in _conic_points(q))


def build_w(p: PrimeLike) -> List[IsoVector]:
    """One representative in Lambda per conic point (the normalized triple itself)."""
    return list(_build_w(as_prime(p).value))


@lru_cache(maxsize=None)
def _enumerate_lambda(q: int) -> Tuple[IsoVector, ...]:
    members = set()
    for w in _build_w(q):
        for alpha in range(1, q):
            members.add(scale_iso(w, alpha))
    return tuple(sorted(members))


def enumerate_lambda(p: PrimeLike) -> List[IsoVector]:
    """Lambda as the nonzero multiples of W, sorted lexicographically."""
    return list(_enumerate_lambda(as_prime(p).value))


def complement_plane(iso: IsoVector) -> ComplementPlane:
    """
    Canonical complement C_lambda.

    With i the first index where lambda is nonzero, C_lambda is spanned by
    the two standard unit vectors of the other indices.
    """
    p = iso.p
    lead = next(i for i, c in enumerate(iso.as_tuple()) if c % p)
    units = [IntVec3.of(1 if j == i else 0 for j in range(3)) for i in range(3)]
    basis = tuple(units[j] for j in range(3) if j != lead)
    points = []
    for u in range(p):
        for v in range(p):
            vec = basis[0].scale(u) + basis[1].scale(v)
            points.append(CubePoint.of((c % p for c in vec), p))
    return ComplementPlane(iso=iso, basis=(basis[0], basis[1]), points=tuple(sorted(points)))


def line_cells(x: Sequence[int], vector: Sequence[int], p: int) -> List[Tuple[Triple, Triple]]:
    """(y_t, eps_t) for the points x + t*lambda, t = 0..p-1."""
    return [
        split((x[0] + t * vector[0], x[1] + t * vector[1], x[2] + t * vector[2]), p)
        for t in range(p)
    ]
