"""
Linear construction of p-partial Steinhaus functions.

Requiring every table pi^lambda_x (lambda in W, x in C_lambda) to be affine,
t -> pi(0) + c*t with c != 0, turns the permutation conditions into linear
equations over GF(p) in the 3p^3 unknowns L(x)_i. Any solution is a
p-partial Steinhaus function; slope 1 everywhere reproduces the p = 3
even-permutation construction.
"""

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models.field import Prime, PrimeLike, as_prime
from ..models.geometry import CubePoint, Triple, cube_points
from ..models.maps import PartialMap
from ..utils.logger import get_logger
from .lattice import build_w, complement_plane, line_cells
from .steinhaus import half_d

logger = get_logger(__name__)

SLOPE_MODES = ("unit", "random")


class LinearSystemError(Exception):
    """Linear system construction or assembly errors."""
    pass


@dataclass
class AffineAnsatz:
    """A nonzero slope c for every constraint (lambda in W, x in C_lambda)."""
    p: int
    slopes: Dict[Tuple[Triple, Triple], int] = field(default_factory=dict)
    default: int = 1

    def __post_init__(self) -> None:
        for key, slope in list(self.slopes.items()) + [(None, self.default)]:
            if slope % self.p == 0:
                raise LinearSystemError(f"slope for {key} must be nonzero mod {self.p}")

    @classmethod
    def unit(cls, p: PrimeLike) -> 'AffineAnsatz':
        return cls(as_prime(p).value)

    @classmethod
    def random(cls, p: PrimeLike, seed: Optional[int] = None) -> 'AffineAnsatz':
        """Independent uniform nonzero slopes, reproducible from the seed."""
        q = as_prime(p).value
        rng = random.Random(seed)
        slopes = {}
        for iso in build_w(q):
            for x in complement_plane(iso).points:
                slopes[(iso.as_tuple(), x.as_tuple())] = rng.randrange(1, q)
        return cls(q, slopes)

    @classmethod
    def from_mode(cls, p: PrimeLike, mode: str, seed: Optional[int] = None) -> 'AffineAnsatz':
        if mode == "unit":
            return cls.unit(p)
        if mode == "random":
            return cls.random(p, seed)
        raise LinearSystemError(f"unknown slope mode {mode!r}, expected one of {SLOPE_MODES}")

    def slope(self, vector: Triple, x: Triple) -> int:
        return self.slopes.get((vector, x), self.default) % self.p


@dataclass(frozen=True)
class RowTag:
    """Where a row comes from: pi^lambda_x(t+1) - pi^lambda_x(t) = slope."""
    vector: Triple
    x: Triple
    t: int

    def to_dict(self) -> Dict[str, Any]:
        return {'lambda': list(self.vector), 'x': list(self.x), 't': self.t}


@dataclass
class GFpLinearSystem:
    """Rows coeffs . v = constant over GF(p), one unknown per coordinate of each L(x)."""
    p: Prime
    num_vars: int
    coefficients: np.ndarray
    constants: np.ndarray
    provenance: List[Optional[RowTag]]

    def __post_init__(self) -> None:
        rows = len(self.provenance)
        if self.coefficients.shape != (rows, self.num_vars) or self.constants.shape != (rows,):
            raise LinearSystemError(
                f"coefficient matrix {self.coefficients.shape} and constants "
                f"{self.constants.shape} do not match {rows} rows of {self.num_vars} variables"
            )

    @classmethod
    def from_rows(
        cls,
        p: PrimeLike,
        rows: Sequence[Tuple[Sequence[int], int]],
        num_vars: Optional[int] = None,
    ) -> 'GFpLinearSystem':
        """Small systems written out by hand."""
        prime = as_prime(p)
        width = num_vars if num_vars is not None else len(rows[0][0])
        coefficients = np.array([list(r[0]) for r in rows], dtype=np.int64).reshape(len(rows), width)
        constants = np.array([r[1] for r in rows], dtype=np.int64)
        return cls(prime, width, coefficients % prime.value, constants % prime.value, [None] * len(rows))

    @property
    def num_rows(self) -> int:
        return len(self.provenance)

    def row_support(self, index: int) -> List[int]:
        return [int(i) for i in np.nonzero(self.coefficients[index])[0]]

    def is_satisfied_by(self, assignment: Sequence[int]) -> bool:
        vector = np.asarray(assignment, dtype=np.int64) % self.p.value
        residual = (self.coefficients @ vector - self.constants) % self.p.value
        return not residual.any()


@dataclass
class SolutionSpace:
    """particular + span(kernel) over GF(p); particular is None when inconsistent."""
    p: int
    num_vars: int
    rank: int
    particular: Optional[np.ndarray]
    kernel: np.ndarray

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def kernel_dimension(self) -> int:
        return int(self.kernel.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p': self.p,
            'variables': self.num_vars,
            'rank': self.rank,
            'kernel_dimension': self.kernel_dimension,
            'consistent': self.consistent,
        }


def variable_index(x: CubePoint, coordinate: int) -> int:
    """Unknown L(x)_coordinate."""
    return 3 * x.index + coordinate


def build_system(p: PrimeLike, ansatz: AffineAnsatz) -> GFpLinearSystem:
    """
    Rows pi(t+1) - pi(t) = c for every constraint (lambda in W, x in C_lambda), t < p-1.

    With pi(t) = const(t) + lambda . L(y_t), each row reads
    lambda . L(y_{t+1}) - lambda . L(y_t) = c - const(t+1) + const(t).
    """
    prime = as_prime(p)
    q = prime.value
    if ansatz.p != q:
        raise LinearSystemError(f"ansatz is for p={ansatz.p}, system for p={q}")
    num_vars = 3 * q ** 3
    coefficient_rows: List[np.ndarray] = []
    constants: List[int] = []
    provenance: List[Optional[RowTag]] = []
    for iso in build_w(q):
        vector = iso.as_tuple()
        d_half = half_d(iso)
        for x in complement_plane(iso).points:
            cells = line_cells(x.as_tuple(), vector, q)
            offsets = [
                (t * d_half - sum(vector[i] * eps[i] for i in range(3))) % q
                for t, (_, eps) in enumerate(cells)
            ]
            slope = ansatz.slope(vector, x.as_tuple())
            for t in range(q - 1):
                row = np.zeros(num_vars, dtype=np.int64)
                after = CubePoint.of(cells[t + 1][0], q)
                before = CubePoint.of(cells[t][0], q)
                for i in range(3):
                    row[variable_index(after, i)] += vector[i]
                    row[variable_index(before, i)] -= vector[i]
                coefficient_rows.append(row % q)
                constants.append((slope - offsets[t + 1] + offsets[t]) % q)
                provenance.append(RowTag(vector, x.as_tuple(), t))
    logger.info(f"Built linear system for p={q}: {len(provenance)} rows, {num_vars} variables")
    return GFpLinearSystem(
        prime,
        num_vars,
        np.array(coefficient_rows, dtype=np.int64).reshape(len(provenance), num_vars),
        np.array(constants, dtype=np.int64),
        provenance,
    )


def solve_system(system: GFpLinearSystem) -> SolutionSpace:
    """Reduced row echelon form over GF(p) by Gaussian elimination."""
    q = system.p.value
    n = system.num_vars
    augmented = np.concatenate([system.coefficients, system.constants[:, None]], axis=1) % q
    pivots: List[int] = []
    row = 0
    for col in range(n):
        if row == augmented.shape[0]:
            break
        candidates = np.nonzero(augmented[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            augmented[[row, pivot]] = augmented[[pivot, row]]
        augmented[row] = augmented[row] * pow(int(augmented[row, col]), -1, q) % q
        factors = augmented[:, col].copy()
        factors[row] = 0
        augmented = (augmented - np.outer(factors, augmented[row])) % q
        pivots.append(col)
        row += 1

    rank = len(pivots)
    if augmented[rank:, n].any():
        logger.info(f"System over GF({q}) is inconsistent (rank {rank})")
        return SolutionSpace(q, n, rank, None, np.zeros((0, n), dtype=np.int64))

    particular = np.zeros(n, dtype=np.int64)
    for r, col in enumerate(pivots):
        particular[col] = augmented[r, n]
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    kernel = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        kernel[k, f] = 1
        for r, col in enumerate(pivots):
            kernel[k, col] = (-augmented[r, f]) % q
    logger.info(f"Solved system over GF({q}): rank {rank}, kernel dimension {len(free)}")
    return SolutionSpace(q, n, rank, particular, kernel)


def sample_assignments(space: SolutionSpace, max_samples: int, seed: Optional[int] = None) -> List[np.ndarray]:
    """
    Up to max_samples distinct solutions.

    The whole space is listed when it has at most max_samples elements;
    otherwise the particular solution comes first, followed by seeded random
    kernel combinations.
    """
    if not space.consistent or max_samples <= 0:
        return []
    assert space.particular is not None
    q = space.p
    k = space.kernel_dimension
    if q ** k <= max_samples:
        combos: List[Sequence[int]] = list(itertools.product(range(q), repeat=k))
    else:
        rng = random.Random(seed)
        combos = [[0] * k]
        seen = {tuple(combos[0])}
        while len(combos) < max_samples:
            combo = tuple(rng.randrange(q) for _ in range(k))
            if combo not in seen:
                seen.add(combo)
                combos.append(combo)
    solutions = []
    for combo in combos:
        coefficients = np.asarray(combo, dtype=np.int64)
        solutions.append((space.particular + coefficients @ space.kernel) % q if k else space.particular.copy())
    return solutions


def assignment_to_map(assignment: Sequence[int], p: PrimeLike) -> PartialMap:
    """Assemble L(x) = (v[3i], v[3i+1], v[3i+2]) for the cell of index i."""
    q = as_prime(p).value
    if len(assignment) != 3 * q ** 3:
        raise LinearSystemError(f"expected {3 * q ** 3} values, got {len(assignment)}")
    values = [int(v) % q for v in assignment]
    return PartialMap.from_triples(q, [values[3 * i:3 * i + 3] for i in range(q ** 3)])


def map_to_assignment(L: PartialMap) -> List[int]:
    """The GF(p) unknowns of a complete map."""
    out: List[int] = []
    for x in cube_points(L.m):
        entry = L.get(x)
        if entry is None:
            raise LinearSystemError(f"cell {x} is unassigned")
        out.extend(entry.as_tuple())
    return out


def solve_and_sample(system: GFpLinearSystem, max_samples: int, seed: Optional[int] = None) -> List[PartialMap]:
    """Eliminate, then assemble up to max_samples solutions into complete maps."""
    space = solve_system(system)
    return [assignment_to_map(v, system.p) for v in sample_assignments(space, max_samples, seed)]
