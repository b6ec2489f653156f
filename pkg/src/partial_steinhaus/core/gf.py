"""
Exact modular arithmetic over GF(p) for odd primes p.

Square roots are found by exhaustive scan, which is exact and deterministic
for the tiny primes this package works with.
"""

from functools import lru_cache
from typing import Dict, List, Tuple

from ..models.field import FieldError, FpElement, InvalidPrime, PrimeLike
from ..utils.logger import get_logger

logger = get_logger(__name__)

SQRT_SCAN_LIMIT = 10_000

__all__ = [
    "FieldError", "InvalidPrime", "NotInvertible", "SQRT_SCAN_LIMIT",
    "element", "half", "inverse", "mod_inv", "residue",
    "square_roots", "sqrt_mod",
]


class NotInvertible(FieldError):
    """Zero has no multiplicative inverse."""
    pass


def element(value: int, p: PrimeLike) -> FpElement:
    """The canonical element of GF(p) congruent to value."""
    return FpElement.of(value, p)


def residue(value: int, p: int) -> int:
    """Canonical representative in [0, p), also for negative integers."""
    return value % p


def inverse(value: int, p: int) -> int:
    """Integer-level inverse used on hot paths."""
    if value % p == 0:
        raise NotInvertible(f"0 has no inverse modulo {p}")
    return pow(value, -1, p)


def mod_inv(a: FpElement) -> FpElement:
    """Multiplicative inverse of a nonzero element."""
    return FpElement(inverse(a.value, a.p), a.modulus)


def half(p: PrimeLike) -> FpElement:
    """The element 1/2 of GF(p)."""
    return mod_inv(element(2, p))


@lru_cache(maxsize=None)
def _root_table(p: int) -> Dict[int, Tuple[int, ...]]:
    if p > SQRT_SCAN_LIMIT:
        raise FieldError(f"square-root scan is limited to p <= {SQRT_SCAN_LIMIT}, got {p}")
    table: Dict[int, List[int]] = {}
    for r in range(p):
        table.setdefault(r * r % p, []).append(r)
    logger.debug(f"Built square-root table for p={p}: {len(table)} squares")
    return {a: tuple(roots) for a, roots in table.items()}


def square_roots(a: int, p: int) -> Tuple[int, ...]:
    """Integer-level roots of a modulo p, smaller root first."""
    return _root_table(p).get(a % p, ())


def sqrt_mod(a: FpElement) -> Tuple[FpElement, ...]:
    """
    Square roots of a in GF(p).

    Returns:
        (r, p - r) with r < p - r for a nonzero square, (0,) for zero and an
        empty tuple for a non-residue.
    """
    return tuple(FpElement(r, a.modulus) for r in square_roots(a.value, a.p))
