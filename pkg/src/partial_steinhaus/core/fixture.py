"""
The known 27-point 3-partial Steinhaus set shipped with the package.

Rows are the numerator triples over the common denominator 3, in the order
they were published; the fractional part of each point identifies its
coset and the integer part gives L.
"""

from typing import List, Tuple

from ..models.geometry import IntVec3, RationalPoint, Triple
from ..models.maps import PartialMap
from .steinhaus import map_from_points

FIXTURE_M = 3
FIXTURE_DENOMINATOR = 3

FIXTURE_ROWS: Tuple[Triple, ...] = (
    (3, 6, 6), (6, 6, 1), (3, 6, 5),
    (6, 1, 6), (0, 1, 1), (6, 1, 5),
    (3, 5, 6), (6, 5, 1), (3, 5, 5),
    (1, 6, 6), (7, 6, 1), (1, 6, 5),
    (7, 1, 6), (4, 1, 1), (7, 1, 5),
    (1, 5, 6), (7, 5, 1), (1, 5, 5),
    (2, 0, 0), (2, 0, 1), (2, 0, 2),
    (2, 1, 0), (2, 1, 1), (2, 1, 2),
    (2, 2, 0), (2, 2, 1), (2, 2, 2),
)


def fixture_points() -> List[RationalPoint]:
    return [RationalPoint(IntVec3.of(row), FIXTURE_DENOMINATOR) for row in FIXTURE_ROWS]


def fixture_map() -> PartialMap:
    """The fixture as a complete map L : X_3 -> X_3."""
    return map_from_points(fixture_points(), FIXTURE_M)
