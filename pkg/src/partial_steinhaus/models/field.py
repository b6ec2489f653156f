"""
Prime field data models.

GF(p) is identified with {0, ..., p-1}; every constructor keeps values in
that canonical range.
"""

from dataclasses import dataclass
from typing import Any, Dict, Union

from sympy import isprime


class FieldError(Exception):
    """GF(p) arithmetic related errors."""
    pass


class InvalidPrime(FieldError, ValueError):
    """The modulus is not an odd prime."""
    pass


@dataclass(frozen=True, order=True)
class Prime:
    """An odd prime modulus p >= 3."""
    value: int

    def __post_init__(self) -> None:
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise InvalidPrime(f"p must be an integer, got {self.value!r}")
        if self.value == 2:
            raise InvalidPrime("p must be an odd prime, got 2")
        if self.value < 3 or not isprime(self.value):
            raise InvalidPrime(f"p must be an odd prime, got {self.value}")

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


PrimeLike = Union[Prime, int]


def as_prime(p: PrimeLike) -> Prime:
    """Coerce an int or Prime to a validated Prime."""
    return p if isinstance(p, Prime) else Prime(p)


@dataclass(frozen=True, order=True)
class FpElement:
    """An element of GF(p), stored as its representative in [0, p)."""
    value: int
    modulus: Prime

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.modulus.value:
            raise ValueError(
                f"{self.value} is not a canonical representative modulo {self.modulus}"
            )

    @classmethod
    def of(cls, value: int, p: PrimeLike) -> 'FpElement':
        """Reduce any integer into GF(p)."""
        prime = as_prime(p)
        return cls(value % prime.value, prime)

    @property
    def p(self) -> int:
        return self.modulus.value

    def _coerce(self, other: Union['FpElement', int]) -> int:
        if isinstance(other, FpElement):
            if other.modulus != self.modulus:
                raise FieldError(f"mixed moduli {self.modulus} and {other.modulus}")
            return other.value
        return other

    def __add__(self, other: Union['FpElement', int]) -> 'FpElement':
        return FpElement((self.value + self._coerce(other)) % self.p, self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Union['FpElement', int]) -> 'FpElement':
        return FpElement((self.value - self._coerce(other)) % self.p, self.modulus)

    def __rsub__(self, other: Union['FpElement', int]) -> 'FpElement':
        return FpElement((self._coerce(other) - self.value) % self.p, self.modulus)

    def __mul__(self, other: Union['FpElement', int]) -> 'FpElement':
        return FpElement((self.value * self._coerce(other)) % self.p, self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> 'FpElement':
        return FpElement((-self.value) % self.p, self.modulus)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)

    def to_dict(self) -> Dict[str, Any]:
        return {'value': self.value, 'p': self.p}
