"""
Sums of squares and the rational-to-integral descent on the sphere.

If an integer N is a sum of three rational squares it is a sum of three
integer squares: from a rational point P on the sphere ||v||^2 = N, the line
through P and its nearest lattice point Z meets the sphere again in a point
with a strictly smaller denominator. All arithmetic here is exact.
"""

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import ceil, isqrt
from typing import Any, Dict, List, Optional, Tuple, Union

from sympy import factorint

from ..models.geometry import IntVec3, RationalPoint
from ..utils.logger import get_logger

logger = get_logger(__name__)

FracTriple = Tuple[Fraction, Fraction, Fraction]

NEAREST_POINT_BOUND = Fraction(3, 4)


class DescentError(Exception):
    """Sum-of-squares descent related errors."""
    pass


class NotOnSphere(DescentError, ValueError):
    """||num||^2 != N * den^2."""
    pass


class NotRepresentable(DescentError, ValueError):
    """N is not a sum of three integer squares."""
    pass


class DescentInvariantError(DescentError):
    """A descent step broke an invariant that the argument guarantees."""
    pass


class Dimension(Enum):
    """Ambient dimension for squared lattice distances."""
    TWO = "2"
    THREE = "3"
    FOUR_PLUS = "4plus"

    @classmethod
    def parse(cls, value: Union['Dimension', str, int]) -> 'Dimension':
        if isinstance(value, Dimension):
            return value
        if isinstance(value, int) and value >= 4:
            return cls.FOUR_PLUS
        return cls(str(value))


@dataclass(frozen=True)
class SphereRationalPoint:
    """A rational point P with ||P||^2 = n_value."""
    point: RationalPoint
    n_value: int

    @property
    def on_sphere(self) -> bool:
        return self.point.num.norm_sq() == self.n_value * self.point.den ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n_value, **self.point.to_dict()}


@dataclass(frozen=True)
class DescentStep:
    """One iteration: the current point, its nearest lattice point and their squared distance."""
    point: RationalPoint
    denominator: int
    nearest: IntVec3
    distance_sq: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            'point': str(self.point),
            'denominator': self.denominator,
            'nearest': list(self.nearest.as_tuple()),
            'distance_sq': str(self.distance_sq),
        }


def _excluded_three_squares(n: int) -> bool:
    """n of the form 4^a (8b + 7)."""
    while n and n % 4 == 0:
        n //= 4
    return n % 8 == 7


def is_squared_lattice_distance(n_value: int, dimension: Union[Dimension, str, int]) -> bool:
    """
    Whether N = ||v||^2 for some v in Z^n.

    n >= 4 always holds (four squares); n = 3 excludes 4^a(8b+7); n = 2 needs
    every prime 3 mod 4 to divide N to an even power.
    """
    dim = Dimension.parse(dimension)
    if n_value < 0:
        return False
    if dim is Dimension.FOUR_PLUS:
        return True
    if dim is Dimension.THREE:
        return not _excluded_three_squares(n_value)
    if n_value == 0:
        return True
    return all(e % 2 == 0 for q, e in factorint(n_value).items() if q % 4 == 3)


def lattice_witness(n_value: int, dimension: Union[Dimension, str, int]) -> Optional[Tuple[int, ...]]:
    """Explicit v with ||v||^2 = N by bounded search, sorted ascending; None if absent."""
    dim = Dimension.parse(dimension)
    if n_value < 0:
        return None
    if dim is Dimension.FOUR_PLUS:
        raise DescentError("witnesses are only searched in dimensions 2 and 3")
    if dim is Dimension.TWO:
        for a in range(isqrt(n_value // 2) + 1):
            b = isqrt(n_value - a * a)
            if a * a + b * b == n_value:
                return (a, b)
        return None
    for a in range(isqrt(n_value // 3) + 1):
        rest = n_value - a * a
        for b in range(a, isqrt(rest // 2) + 1):
            c = isqrt(rest - b * b)
            if b * b + c * c == rest:
                return (a, b, c)
    return None


def _coords(point: RationalPoint) -> FracTriple:
    return point.coords


def _nearest_integer(value: Fraction) -> int:
    """Nearest integer, halves rounded toward -infinity."""
    return ceil(value - Fraction(1, 2))


def _common_denominator(coords: FracTriple) -> int:
    return RationalPoint.from_fractions(coords).den


def descent_path(start: SphereRationalPoint) -> Tuple[List[DescentStep], IntVec3]:
    """
    Run the descent and keep every intermediate step.

    Raises:
        NotOnSphere: if the start point does not lie on its sphere
        DescentInvariantError: if a step fails to shrink the denominator
    """
    if start.n_value < 0 or not start.on_sphere:
        raise NotOnSphere(
            f"||{start.point.num.as_tuple()}||^2 = {start.point.num.norm_sq()} "
            f"!= {start.n_value} * {start.point.den}^2"
        )
    n_value = start.n_value
    coords = _coords(start.point)
    den = _common_denominator(coords)
    steps: List[DescentStep] = []

    while den > 1:
        nearest = tuple(_nearest_integer(c) for c in coords)
        direction = tuple(nearest[i] - coords[i] for i in range(3))
        distance_sq = sum(c * c for c in direction)
        if not 0 < distance_sq <= NEAREST_POINT_BOUND:
            raise DescentInvariantError(f"nearest lattice point at squared distance {distance_sq}")
        steps.append(DescentStep(
            point=RationalPoint.from_fractions(coords),
            denominator=den,
            nearest=IntVec3.of(nearest),
            distance_sq=distance_sq,
        ))
        if sum(z * z for z in nearest) == n_value:
            logger.debug(f"Descent for N={n_value} hit lattice point {nearest}")
            return steps, IntVec3.of(nearest)

        # Second intersection of P + s(Z - P) with the sphere.
        projection = sum(coords[i] * direction[i] for i in range(3))
        if projection == 0:
            raise DescentInvariantError(f"line through {coords} and {nearest} is tangent")
        s = -2 * projection / distance_sq
        coords = (
            coords[0] + s * direction[0],
            coords[1] + s * direction[1],
            coords[2] + s * direction[2],
        )
        if sum(c * c for c in coords) != n_value:
            raise DescentInvariantError(f"descent left the sphere of radius^2 {n_value}")
        next_den = _common_denominator(coords)
        if not 0 < next_den < den:
            logger.error(f"Denominator went from {den} to {next_den} for N={n_value}")
            raise DescentInvariantError(f"denominator did not decrease: {den} -> {next_den}")
        den = next_den

    return steps, IntVec3.of(int(c) for c in coords)


def descend(start: SphereRationalPoint) -> IntVec3:
    """Integer vector v with ||v||^2 = N reached from a rational point of the sphere."""
    _, vector = descent_path(start)
    return vector


def random_sphere_rational(n_value: int, seed: Optional[int] = None, max_attempts: int = 1000) -> SphereRationalPoint:
    """
    A rational point of the sphere ||v||^2 = N with denominator > 1.

    Starts from an integer witness v and takes the second intersection of a
    random line through v; N = 0 only admits the origin.

    Raises:
        NotRepresentable: if N is not a sum of three squares
    """
    if n_value < 0 or not is_squared_lattice_distance(n_value, Dimension.THREE):
        raise NotRepresentable(f"{n_value} is not a sum of three squares")
    if n_value == 0:
        return SphereRationalPoint(RationalPoint.integral((0, 0, 0)), 0)

    witness = lattice_witness(n_value, Dimension.THREE)
    assert witness is not None
    rng = random.Random(seed)
    base = IntVec3.of(witness)
    bound = max(3, 2 * isqrt(n_value) + 3)
    for _ in range(max_attempts):
        signs = IntVec3.of(rng.choice((-1, 1)) for _ in range(3))
        v = IntVec3.of(c * s for c, s in zip(base, signs))
        u = IntVec3.of(rng.randint(-bound, bound) for _ in range(3))
        norm_u = u.norm_sq()
        if norm_u == 0 or v.dot(u) == 0:
            continue
        s = Fraction(-2 * v.dot(u), norm_u)
        point = RationalPoint.from_fractions(tuple(Fraction(v_i) + s * u_i for v_i, u_i in zip(v, u)))
        if not point.is_integral:
            return SphereRationalPoint(point, n_value)
    raise DescentError(f"no rational point with denominator > 1 found for N={n_value}")
