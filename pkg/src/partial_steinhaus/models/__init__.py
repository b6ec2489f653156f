"""Data models for partial_steinhaus."""

from .field import FieldError, FpElement, InvalidPrime, Prime, as_prime
from .geometry import (
    ComplementPlane,
    CubePoint,
    Decomposition,
    IntVec3,
    IsoVector,
    ProjectivePoint,
    RationalPoint,
    cube_points,
)
from .maps import (
    CollisionWitness,
    PairWitness,
    PartialMap,
    PiTable,
    PointPairWitness,
    Verdict,
)

__all__ = [
    "FieldError", "FpElement", "InvalidPrime", "Prime", "as_prime",
    "ComplementPlane", "CubePoint", "Decomposition", "IntVec3", "IsoVector",
    "ProjectivePoint", "RationalPoint", "cube_points",
    "CollisionWitness", "PairWitness", "PartialMap", "PiTable",
    "PointPairWitness", "Verdict",
]
