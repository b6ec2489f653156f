"""
Geometry data models for the cube X_m, the lattice Z^3 and the mod-p conic.

Vectors are small frozen dataclasses so they can key dictionaries and be
sorted lexicographically, which fixes every scan order in the package.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Iterable, Iterator, Sequence, Tuple

from .field import FpElement

Triple = Tuple[int, int, int]


@dataclass(frozen=True, order=True)
class IntVec3:
    """A vector of Z^3."""
    x: int
    y: int
    z: int

    @classmethod
    def of(cls, values: Iterable[int]) -> 'IntVec3':
        a, b, c = values
        return cls(int(a), int(b), int(c))

    @classmethod
    def zero(cls) -> 'IntVec3':
        return cls(0, 0, 0)

    def __iter__(self) -> Iterator[int]:
        return iter((self.x, self.y, self.z))

    def as_tuple(self) -> Triple:
        return (self.x, self.y, self.z)

    def __add__(self, other: Iterable[int]) -> 'IntVec3':
        a, b, c = other
        return IntVec3(self.x + a, self.y + b, self.z + c)

    def __sub__(self, other: Iterable[int]) -> 'IntVec3':
        a, b, c = other
        return IntVec3(self.x - a, self.y - b, self.z - c)

    def __neg__(self) -> 'IntVec3':
        return IntVec3(-self.x, -self.y, -self.z)

    def scale(self, k: int) -> 'IntVec3':
        return IntVec3(k * self.x, k * self.y, k * self.z)

    def dot(self, other: Iterable[int]) -> int:
        a, b, c = other
        return self.x * a + self.y * b + self.z * c

    def norm_sq(self) -> int:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def to_dict(self) -> Dict[str, Any]:
        return {'vector': list(self.as_tuple())}


@dataclass(frozen=True, order=True)
class CubePoint:
    """A point of X_m = {(a, b, c) : 0 <= a, b, c < m}."""
    x: int
    y: int
    z: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"cube size must be positive, got {self.m}")
        for coord in (self.x, self.y, self.z):
            if not 0 <= coord < self.m:
                raise ValueError(f"{self.as_tuple()} is not in X_{self.m}")

    @classmethod
    def of(cls, values: Iterable[int], m: int) -> 'CubePoint':
        a, b, c = values
        return cls(int(a), int(b), int(c), m)

    @classmethod
    def from_index(cls, index: int, m: int) -> 'CubePoint':
        a, rest = divmod(index, m * m)
        b, c = divmod(rest, m)
        return cls(a, b, c, m)

    @property
    def index(self) -> int:
        """Position a*m^2 + b*m + c in lexicographic order."""
        return (self.x * self.m + self.y) * self.m + self.z

    def __iter__(self) -> Iterator[int]:
        return iter((self.x, self.y, self.z))

    def as_tuple(self) -> Triple:
        return (self.x, self.y, self.z)

    def as_vector(self) -> IntVec3:
        return IntVec3(self.x, self.y, self.z)

    def __str__(self) -> str:
        return f"({self.x},{self.y},{self.z})"


def cube_points(m: int) -> Iterator[CubePoint]:
    """All points of X_m in lexicographic order."""
    for index in range(m ** 3):
        yield CubePoint.from_index(index, m)


@dataclass(frozen=True)
class Decomposition:
    """v = y + m*eps with y in X_m."""
    y: CubePoint
    eps: IntVec3
    m: int

    def reconstruct(self) -> IntVec3:
        return self.y.as_vector() + self.eps.scale(self.m)


@dataclass(frozen=True, eq=False)
class RationalPoint:
    """A point of Q^3 written num/den; equality is tested cross-multiplied."""
    num: IntVec3
    den: int

    def __post_init__(self) -> None:
        if self.den <= 0:
            raise ValueError(f"denominator must be positive, got {self.den}")

    @classmethod
    def from_fractions(cls, coords: Sequence[Fraction]) -> 'RationalPoint':
        fracs = [Fraction(c) for c in coords]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        return cls(IntVec3.of(int(f * den) for f in fracs), den)

    @classmethod
    def integral(cls, vector: Iterable[int]) -> 'RationalPoint':
        return cls(IntVec3.of(vector), 1)

    @property
    def coords(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (
            Fraction(self.num.x, self.den),
            Fraction(self.num.y, self.den),
            Fraction(self.num.z, self.den),
        )

    def reduced(self) -> 'RationalPoint':
        """Same point over the least common denominator."""
        return RationalPoint.from_fractions(self.coords)

    @property
    def is_integral(self) -> bool:
        return self.reduced().den == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalPoint):
            return NotImplemented
        return self.num.scale(other.den) == other.num.scale(self.den)

    def __hash__(self) -> int:
        reduced = self.reduced()
        return hash((reduced.num, reduced.den))

    def __sub__(self, other: 'RationalPoint') -> 'RationalPoint':
        return RationalPoint(
            self.num.scale(other.den) - other.num.scale(self.den),
            self.den * other.den,
        )

    def norm_sq(self) -> Fraction:
        return Fraction(self.num.norm_sq(), self.den * self.den)

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.coords)

    def to_dict(self) -> Dict[str, Any]:
        return {'num': list(self.num.as_tuple()), 'den': self.den}


@dataclass(frozen=True, order=True)
class IsoVector:
    """An element lambda of Lambda with its invariant d(lambda)."""
    vector: CubePoint
    d: FpElement

    @property
    def p(self) -> int:
        return self.vector.m

    def as_tuple(self) -> Triple:
        return self.vector.as_tuple()

    def __str__(self) -> str:
        return f"{self.vector} d={self.d}"

    def to_dict(self) -> Dict[str, Any]:
        return {'lambda': list(self.as_tuple()), 'd': self.d.value}


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """A point of P^2(GF(p)), first nonzero coordinate equal to 1."""
    coords: Tuple[FpElement, FpElement, FpElement]

    def __post_init__(self) -> None:
        values = [c.value for c in self.coords]
        leading = next((v for v in values if v != 0), None)
        if leading != 1:
            raise ValueError(f"{values} is not a normalized projective point")

    @property
    def p(self) -> int:
        return self.coords[0].p

    def as_tuple(self) -> Triple:
        a, b, c = (e.value for e in self.coords)
        return (a, b, c)

    def __str__(self) -> str:
        return "({},{},{})".format(*self.as_tuple())

    def to_dict(self) -> Dict[str, Any]:
        return {'point': list(self.as_tuple())}


@dataclass(frozen=True)
class ComplementPlane:
    """A GF(p)-plane C_lambda complementary to the line through lambda."""
    iso: IsoVector
    basis: Tuple[IntVec3, IntVec3]
    points: Tuple[CubePoint, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': list(self.iso.as_tuple()),
            'basis': [list(b.as_tuple()) for b in self.basis],
            'points': [list(pt.as_tuple()) for pt in self.points],
        }
