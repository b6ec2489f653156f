"""
Partial Steinhaus map data models.

A PartialMap stores L : X_m -> X_m as a flat list indexed by
a*m^2 + b*m + c; unassigned cells hold None while a search is running.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .field import FpElement
from .geometry import CubePoint, IsoVector, RationalPoint, Triple, cube_points

CellKey = Union[CubePoint, Triple]


def first_collision(values: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Lexicographically first pair t < s with values[t] == values[s]."""
    first_seen: Dict[int, int] = {}
    best: Optional[Tuple[int, int]] = None
    for s, value in enumerate(values):
        if value in first_seen:
            pair = (first_seen[value], s)
            if best is None or pair < best:
                best = pair
        else:
            first_seen[value] = s
    return best


@dataclass
class PartialMap:
    """The function L : X_m -> X_m, possibly partially assigned."""
    m: int
    entries: List[Optional[CubePoint]]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"cube size must be positive, got {self.m}")
        if len(self.entries) != self.m ** 3:
            raise ValueError(
                f"expected {self.m ** 3} entries for m={self.m}, got {len(self.entries)}"
            )
        for entry in self.entries:
            if entry is not None and entry.m != self.m:
                raise ValueError(f"entry {entry} does not lie in X_{self.m}")

    @classmethod
    def empty(cls, m: int) -> 'PartialMap':
        return cls(m, [None] * m ** 3)

    @classmethod
    def constant(cls, m: int, value: Triple = (0, 0, 0)) -> 'PartialMap':
        point = CubePoint.of(value, m)
        return cls(m, [point] * m ** 3)

    @classmethod
    def from_triples(cls, m: int, triples: Sequence[Optional[Sequence[int]]]) -> 'PartialMap':
        return cls(m, [None if t is None else CubePoint.of(t, m) for t in triples])

    def _index(self, x: CellKey) -> int:
        if isinstance(x, CubePoint):
            if x.m != self.m:
                raise ValueError(f"{x} does not lie in X_{self.m}")
            return x.index
        return CubePoint.of(x, self.m).index

    def get(self, x: CellKey) -> Optional[CubePoint]:
        return self.entries[self._index(x)]

    def __getitem__(self, x: CellKey) -> Optional[CubePoint]:
        return self.get(x)

    def with_entry(self, x: CellKey, value: Optional[Sequence[int]]) -> 'PartialMap':
        """Copy of the map with one cell (re)assigned or cleared."""
        entries = list(self.entries)
        entries[self._index(x)] = None if value is None else CubePoint.of(value, self.m)
        return PartialMap(self.m, entries)

    def cells(self) -> Iterator[CubePoint]:
        return cube_points(self.m)

    @property
    def is_complete(self) -> bool:
        return all(entry is not None for entry in self.entries)

    def assigned_cells(self) -> List[CubePoint]:
        return [x for x in self.cells() if self.entries[x.index] is not None]

    def missing_cells(self) -> List[CubePoint]:
        return [x for x in self.cells() if self.entries[x.index] is None]

    def point(self, x: CubePoint) -> RationalPoint:
        """F(x) = x/m + L(x)."""
        value = self.entries[x.index]
        if value is None:
            raise ValueError(f"cell {x} is unassigned")
        return RationalPoint(x.as_vector() + value.as_vector().scale(self.m), self.m)

    def triples(self) -> List[Optional[List[int]]]:
        return [None if e is None else list(e.as_tuple()) for e in self.entries]

    def to_dict(self) -> Dict[str, Any]:
        return {'m': self.m, 'entries': self.triples()}


@dataclass(frozen=True)
class PiTable:
    """The value table of one map pi^lambda_x : GF(p) -> GF(p)."""
    iso: IsoVector
    x: CubePoint
    values: Tuple[FpElement, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.iso.p:
            raise ValueError(f"a table over GF({self.iso.p}) needs {self.iso.p} values")

    def as_ints(self) -> List[int]:
        return [v.value for v in self.values]

    @property
    def is_permutation(self) -> bool:
        return sorted(self.as_ints()) == list(range(self.iso.p))

    def collision(self) -> Optional[Tuple[int, int]]:
        """First pair t < s with equal values, in lexicographic order."""
        return first_collision(self.as_ints())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': list(self.iso.as_tuple()),
            'd': self.iso.d.value,
            'x': list(self.x.as_tuple()),
            'values': self.as_ints(),
            'permutation': self.is_permutation,
        }


@dataclass(frozen=True)
class PairWitness:
    """Two distinct cells whose points are an integral squared distance apart."""
    x: CubePoint
    z: CubePoint
    squared_distance: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': 'pair',
            'x': list(self.x.as_tuple()),
            'z': list(self.z.as_tuple()),
            'squared_distance': str(self.squared_distance),
        }


@dataclass(frozen=True)
class PointPairWitness:
    """Two points of a point set an integral squared distance apart."""
    first: RationalPoint
    second: RationalPoint
    squared_distance: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': 'points',
            'first': str(self.first),
            'second': str(self.second),
            'squared_distance': str(self.squared_distance),
        }


@dataclass(frozen=True)
class CollisionWitness:
    """A pi-table that is not a permutation: pi(t) == pi(s) with t < s."""
    iso: IsoVector
    x: CubePoint
    t: int
    s: int
    value: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': 'collision',
            'lambda': list(self.iso.as_tuple()),
            'd': self.iso.d.value,
            'x': list(self.x.as_tuple()),
            't': self.t,
            's': self.s,
            'value': self.value,
        }


Witness = Union[PairWitness, PointPairWitness, CollisionWitness]


@dataclass
class Verdict:
    """Outcome of a verifier; Invalid verdicts carry the first witness found."""
    valid: bool
    method: str
    checks: int
    witness: Optional[Witness] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.valid

    @property
    def label(self) -> str:
        return "Valid" if self.valid else "Invalid"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'valid': self.valid,
            'method': self.method,
            'checks': self.checks,
            'witness': self.witness.to_dict() if self.witness else None,
            'details': self.details,
        }
