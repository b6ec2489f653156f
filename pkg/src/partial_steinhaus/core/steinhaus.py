"""
Partial Steinhaus maps and their verifiers.

Three equivalent tests decide whether L : X_m -> X_m is an m-partial
Steinhaus function:

- verify_bruteforce: condition (+) on every pair of cells, with the
  denominator cleared so that only integer arithmetic is involved.
- verify_all_lines / verify_line_pairs: the same condition organised along
  the lines x + GF(p)*lambda, lambda in Lambda.
- verify_perms: the (p+1)p^2 tables pi^lambda_x for lambda in W and
  x in C_lambda are permutations of GF(p).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime

from ..models.field import FpElement
from ..models.geometry import CubePoint, IntVec3, IsoVector, RationalPoint, Triple, cube_points
from ..models.maps import (
    CollisionWitness,
    PairWitness,
    PartialMap,
    PiTable,
    PointPairWitness,
    Verdict,
    first_collision,
)
from ..utils.logger import get_logger
from .gf import inverse
from .lattice import (
    InvalidModulus,
    build_w,
    complement_plane,
    decompose,
    dot,
    enumerate_lambda,
    scale_iso,
    split,
)

logger = get_logger(__name__)

RawMap = Union[Callable[[CubePoint], Iterable[int]], Sequence[Iterable[int]], Mapping[Triple, Iterable[int]]]
ElementLike = Union[FpElement, int]


class SteinhausError(Exception):
    """Partial Steinhaus map related errors."""
    pass


class IncompleteMap(SteinhausError):
    """A required cell of the map is unassigned."""
    pass


class UnsupportedModulus(SteinhausError, ValueError):
    """The permutation route needs m to be an odd prime."""
    pass


class InvalidDivisor(SteinhausError, ValueError):
    """restrict_map needs a positive divisor of m."""
    pass


class CosetCoverageError(SteinhausError):
    """A point set does not meet every coset (1/m)x + Z^3 exactly once."""

    def __init__(
        self,
        message: str,
        missing: Sequence[CubePoint] = (),
        duplicated: Sequence[CubePoint] = (),
        stray: Sequence[RationalPoint] = (),
    ):
        super().__init__(message)
        self.missing = list(missing)
        self.duplicated = list(duplicated)
        self.stray = list(stray)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'missing': [list(x.as_tuple()) for x in self.missing],
            'duplicated': [list(x.as_tuple()) for x in self.duplicated],
            'stray': [str(pt) for pt in self.stray],
        }


def _require_complete(L: PartialMap) -> None:
    missing = L.missing_cells()
    if missing:
        raise IncompleteMap(f"{len(missing)} cells unassigned, first {missing[0]}")


def _require_odd_prime(m: int) -> int:
    if m < 3 or not isprime(m):
        raise UnsupportedModulus(f"the permutation test needs an odd prime m, got {m}")
    return m


def _value(L: PartialMap, y: Triple) -> Triple:
    m = L.m
    entry = L.entries[(y[0] * m + y[1]) * m + y[2]]
    if entry is None:
        raise IncompleteMap(f"cell {y} is unassigned")
    return entry.as_tuple()


def pi_value(L: PartialMap, vector: Triple, d_half: int, x: Sequence[int], t: int) -> int:
    """
    pi^lambda_x(t) = t*d/2 + lambda . [L(y(x + t*lambda)) - eps(x + t*lambda)] mod p.

    x may be any integer triple; for x in X_p this is the table entry.
    """
    p = L.m
    y, eps = split((x[0] + t * vector[0], x[1] + t * vector[1], x[2] + t * vector[2]), p)
    value = _value(L, y)
    shifted = (value[0] - eps[0], value[1] - eps[1], value[2] - eps[2])
    return (t * d_half + dot(vector, shifted)) % p


def half_d(iso: IsoVector) -> int:
    """d(lambda)/2 as an integer in [0, p)."""
    p = iso.p
    return iso.d.value * inverse(2, p) % p


def _pi_ints(L: PartialMap, iso: IsoVector, x: Sequence[int]) -> List[int]:
    vector = iso.as_tuple()
    d_half = half_d(iso)
    return [pi_value(L, vector, d_half, x, t) for t in range(iso.p)]


def pi_table(L: PartialMap, iso: IsoVector, x: CubePoint) -> PiTable:
    """The table of pi^lambda_x."""
    p = _require_odd_prime(L.m)
    if iso.p != p or x.m != p:
        raise SteinhausError(f"lambda and x must live in X_{p}")
    values = tuple(FpElement(v, iso.d.modulus) for v in _pi_ints(L, iso, x.as_tuple()))
    return PiTable(iso=iso, x=x, values=values)


def permutation_parity(values: Sequence[int]) -> int:
    """0 for an even permutation of range(len(values)), 1 for an odd one."""
    n = len(values)
    if sorted(values) != list(range(n)):
        raise ValueError(f"{list(values)} is not a permutation")
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if not seen[start]:
            cycles += 1
            k = start
            while not seen[k]:
                seen[k] = True
                k = values[k]
    return (n - cycles) % 2


def _permutation_verdict(
    L: PartialMap,
    family: Iterable[Tuple[IsoVector, Iterable[CubePoint]]],
    method: str,
) -> Verdict:
    tables = 0
    even = 0
    for iso, anchors in family:
        for x in anchors:
            values = _pi_ints(L, iso, x.as_tuple())
            tables += 1
            collision = first_collision(values)
            if collision is not None:
                t, s = collision
                logger.debug(f"{method}: pi^{iso.vector}_{x} collides at t={t}, s={s}")
                return Verdict(
                    valid=False,
                    method=method,
                    checks=tables,
                    witness=CollisionWitness(iso=iso, x=x, t=t, s=s, value=values[t]),
                    details={'tables': tables, 'even': even},
                )
            if permutation_parity(values) == 0:
                even += 1
    return Verdict(valid=True, method=method, checks=tables, details={'tables': tables, 'even': even})


def verify_perms(L: PartialMap) -> Verdict:
    """Permutation test over lambda in W and x in C_lambda: (p+1)p^2 tables."""
    p = _require_odd_prime(L.m)
    _require_complete(L)
    family = ((iso, complement_plane(iso).points) for iso in build_w(p))
    verdict = _permutation_verdict(L, family, "perms")
    logger.info(f"verify_perms p={p}: {verdict.label} after {verdict.checks} tables")
    return verdict


def verify_all_lines(L: PartialMap) -> Verdict:
    """Permutation test over every lambda in Lambda and every x in X_p."""
    p = _require_odd_prime(L.m)
    _require_complete(L)
    family = ((iso, cube_points(p)) for iso in enumerate_lambda(p))
    return _permutation_verdict(L, family, "all_lines")


def verify_bruteforce(L: PartialMap) -> Verdict:
    """
    Condition (+) on all pairs x != z of X_m.

    ||(z - x) + m(L(z) - L(x))||^2 must never be divisible by m^2; the first
    failing pair in lexicographic order is returned as witness.
    """
    _require_complete(L)
    m = L.m
    m_sq = m * m
    cells = [x.as_tuple() for x in L.cells()]
    values = [entry.as_tuple() for entry in L.entries]  # type: ignore[union-attr]
    checks = 0
    for i in range(len(cells)):
        x, lx = cells[i], values[i]
        for j in range(i + 1, len(cells)):
            z, lz = cells[j], values[j]
            checks += 1
            diff = (
                z[0] - x[0] + m * (lz[0] - lx[0]),
                z[1] - x[1] + m * (lz[1] - lx[1]),
                z[2] - x[2] + m * (lz[2] - lx[2]),
            )
            norm = dot(diff, diff)
            if norm % m_sq == 0:
                witness = PairWitness(
                    x=CubePoint.of(x, m),
                    z=CubePoint.of(z, m),
                    squared_distance=Fraction(norm, m_sq),
                )
                logger.debug(f"verify_bruteforce m={m}: integral distance between {x} and {z}")
                return Verdict(valid=False, method="bruteforce", checks=checks, witness=witness)
    logger.info(f"verify_bruteforce m={m}: Valid after {checks} pairs")
    return Verdict(valid=True, method="bruteforce", checks=checks)


def verify_line_pairs(L: PartialMap) -> Verdict:
    """Pairwise condition along each line x + GF(p)*lambda, lambda in Lambda, x in X_p."""
    p = _require_odd_prime(L.m)
    _require_complete(L)
    p_sq = p * p
    checks = 0
    for iso in enumerate_lambda(p):
        vector = iso.as_tuple()
        for x in cube_points(p):
            line = []
            for t in range(p):
                y, _ = split(
                    (x.x + t * vector[0], x.y + t * vector[1], x.z + t * vector[2]), p
                )
                line.append(y)
            for y_t, y_s in combinations(line, 2):
                checks += 1
                lt, ls = _value(L, y_t), _value(L, y_s)
                diff = tuple(y_s[i] - y_t[i] + p * (ls[i] - lt[i]) for i in range(3))
                norm = dot(diff, diff)
                if norm % p_sq == 0:
                    witness = PairWitness(
                        x=CubePoint.of(y_t, p),
                        z=CubePoint.of(y_s, p),
                        squared_distance=Fraction(norm, p_sq),
                    )
                    return Verdict(valid=False, method="line_pairs", checks=checks, witness=witness)
    return Verdict(valid=True, method="line_pairs", checks=checks)


def _cosets(points: Sequence[RationalPoint], m: int) -> Tuple[Dict[int, List[RationalPoint]], List[RationalPoint]]:
    by_coset: Dict[int, List[RationalPoint]] = {}
    stray = []
    for point in points:
        scaled = [m * c for c in point.num]
        if any(s % point.den for s in scaled):
            stray.append(point)
            continue
        x = CubePoint.of(((s // point.den) % m for s in scaled), m)
        by_coset.setdefault(x.index, []).append(point)
    return by_coset, stray


def _coverage(points: Sequence[RationalPoint], m: int) -> Dict[int, RationalPoint]:
    """Map each coset index to its unique point, or raise CosetCoverageError."""
    by_coset, stray = _cosets(points, m)
    missing = [x for x in cube_points(m) if x.index not in by_coset]
    duplicated = [CubePoint.from_index(i, m) for i, pts in sorted(by_coset.items()) if len(pts) > 1]
    if len(points) != m ** 3 or missing or duplicated or stray:
        parts = [f"{len(points)} points for {m ** 3} cosets"]
        if missing:
            parts.append(f"missing cosets {', '.join(str(x) for x in missing[:5])}")
        if duplicated:
            parts.append(f"duplicated cosets {', '.join(str(x) for x in duplicated[:5])}")
        if stray:
            parts.append(f"{len(stray)} points outside every coset")
        raise CosetCoverageError("; ".join(parts), missing, duplicated, stray)
    return {index: pts[0] for index, pts in by_coset.items()}


def verify_point_set(points: Sequence[RationalPoint], m: int) -> Verdict:
    """
    Check an explicit point set against the definition of an m-partial Steinhaus set.

    Raises:
        InvalidModulus: if m <= 1
        CosetCoverageError: if some coset (1/m)x + Z^3 is missed or hit twice
    """
    if m <= 1:
        raise InvalidModulus(f"m must be greater than 1, got {m}")
    representatives = _coverage(points, m)
    ordered = [representatives[i] for i in range(m ** 3)]
    checks = 0
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            checks += 1
            distance = (ordered[j] - ordered[i]).norm_sq()
            if distance.denominator == 1:
                witness = PointPairWitness(first=ordered[i], second=ordered[j], squared_distance=distance)
                return Verdict(valid=False, method="point_set", checks=checks, witness=witness)
    return Verdict(valid=True, method="point_set", checks=checks)


def map_from_points(points: Sequence[RationalPoint], m: int) -> PartialMap:
    """The map L with F(x) = x/m + y(L(x)) for a point set covering every coset once."""
    representatives = _coverage(points, m)
    entries = []
    for x in cube_points(m):
        point = representatives[x.index]
        offset = [n * m - c * point.den for n, c in zip(point.num, x)]
        integral = IntVec3.of(c // (m * point.den) for c in offset)
        entries.append(decompose(integral, m).y)
    return PartialMap(m, entries)


def points_from_map(L: PartialMap) -> List[RationalPoint]:
    """F(x) = x/m + L(x) for every cell, in index order."""
    _require_complete(L)
    return [L.point(x) for x in L.cells()]


def _raw_values(raw: RawMap, m: int) -> List[IntVec3]:
    cells = list(cube_points(m))
    if callable(raw):
        return [IntVec3.of(raw(x)) for x in cells]
    if isinstance(raw, Mapping):
        return [IntVec3.of(raw[x.as_tuple()]) for x in cells]
    if len(raw) != m ** 3:
        raise SteinhausError(f"expected {m ** 3} raw values, got {len(raw)}")
    return [IntVec3.of(v) for v in raw]


def raw_points(raw: RawMap, m: int) -> List[RationalPoint]:
    """The point set {x/m + L_raw(x)} of a map into Z^3."""
    values = _raw_values(raw, m)
    return [
        RationalPoint(x.as_vector() + values[x.index].scale(m), m) for x in cube_points(m)
    ]


def normalize_map(raw: RawMap, m: int) -> PartialMap:
    """Replace every value L_raw(x) by y(L_raw(x)) in X_m."""
    return PartialMap(m, [decompose(v, m).y for v in _raw_values(raw, m)])


def gauge_shift(L: PartialMap, g: RawMap) -> List[IntVec3]:
    """Raw values x -> L(x) + m*g(x)."""
    _require_complete(L)
    shifts = _raw_values(g, L.m)
    return [
        entry.as_vector() + shifts[i].scale(L.m)  # type: ignore[union-attr]
        for i, entry in enumerate(L.entries)
    ]


def restrict_map(L: PartialMap, m_prime: int) -> PartialMap:
    """
    Pass from an m-partial function to an m'-partial one for m' | m.

    The cell x' of X_{m'} takes the point of cell x = x'*(m/m'), which lies in
    the coset (1/m')x' + Z^3, and renormalizes its integer part modulo m'.
    """
    if m_prime <= 0 or L.m % m_prime:
        raise InvalidDivisor(f"{m_prime} does not divide m={L.m}")
    _require_complete(L)
    k = L.m // m_prime
    entries = []
    for x in cube_points(m_prime):
        value = _value(L, (x.x * k, x.y * k, x.z * k))
        if m_prime > 1:
            entries.append(decompose(value, m_prime).y)
        else:
            entries.append(CubePoint(0, 0, 0, 1))
    return PartialMap(m_prime, entries)


@dataclass(frozen=True)
class IdentityRow:
    """One t of an identity: left side, right side as stated, corrected right side."""
    t: int
    lhs: int
    stated: int
    corrected: int

    @property
    def holds_as_stated(self) -> bool:
        return self.lhs == self.stated

    @property
    def holds_corrected(self) -> bool:
        return self.lhs == self.corrected

    def to_dict(self) -> Dict[str, Any]:
        return {'t': self.t, 'lhs': self.lhs, 'stated': self.stated, 'corrected': self.corrected}


@dataclass
class IdentityReport:
    """
    Evaluation of the translation and scaling identities of the pi-tables.

    translation: pi_x(t + a) = a*d/2 + pi_{x + a*lambda}(t); as stated the
    subscript is reduced through y(.), corrected it is kept in Z^3.
    scaling: pi_x(alpha*t) = pi^{alpha*lambda}_x(t) as stated; corrected
    pi^{alpha*lambda}_x(t) = alpha * pi_x(alpha*t).
    """
    iso: IsoVector
    x: CubePoint
    a: int
    alpha: int
    translation: List[IdentityRow] = field(default_factory=list)
    scaling: Optional[List[IdentityRow]] = None

    @property
    def translation_holds(self) -> bool:
        return all(row.holds_as_stated for row in self.translation)

    @property
    def translation_corrected_holds(self) -> bool:
        return all(row.holds_corrected for row in self.translation)

    @property
    def scaling_holds(self) -> bool:
        return self.scaling is not None and all(row.holds_as_stated for row in self.scaling)

    @property
    def scaling_corrected_holds(self) -> bool:
        return self.scaling is not None and all(row.holds_corrected for row in self.scaling)

    def discrepancies(self) -> List[str]:
        """Every t where an identity fails as stated, with both sides."""
        lines = []
        context = f"lambda={self.iso.vector} d={self.iso.d} x={self.x}"
        for row in self.translation:
            if not row.holds_as_stated:
                lines.append(
                    f"translation a={self.a} {context} t={row.t}: "
                    f"lhs={row.lhs} rhs={row.stated}"
                )
        for row in self.scaling or []:
            if not row.holds_as_stated:
                lines.append(
                    f"scaling alpha={self.alpha} {context} t={row.t}: "
                    f"lhs={row.lhs} rhs={row.stated}"
                )
        return lines

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': list(self.iso.as_tuple()),
            'd': self.iso.d.value,
            'x': list(self.x.as_tuple()),
            'a': self.a,
            'alpha': self.alpha,
            'translation': [row.to_dict() for row in self.translation],
            'scaling': None if self.scaling is None else [row.to_dict() for row in self.scaling],
            'translation_holds': self.translation_holds,
            'translation_corrected_holds': self.translation_corrected_holds,
            'scaling_holds': self.scaling_holds,
            'scaling_corrected_holds': self.scaling_corrected_holds,
        }


def lemma36_check(
    L: PartialMap,
    iso: IsoVector,
    x: CubePoint,
    a: ElementLike,
    alpha: ElementLike,
) -> IdentityReport:
    """Evaluate the translation (shift a) and scaling (factor alpha) identities for all t."""
    p = _require_odd_prime(L.m)
    _require_complete(L)
    a_value = int(a) % p
    alpha_value = int(alpha) % p
    vector = iso.as_tuple()
    d_half = half_d(iso)
    base = x.as_tuple()
    report = IdentityReport(iso=iso, x=x, a=a_value, alpha=alpha_value)

    shifted = tuple(base[i] + a_value * vector[i] for i in range(3))
    reduced, _ = split(shifted, p)
    for t in range(p):
        lhs = pi_value(L, vector, d_half, base, (t + a_value) % p)
        stated = (a_value * d_half + pi_value(L, vector, d_half, reduced, t)) % p
        corrected = (a_value * d_half + pi_value(L, vector, d_half, shifted, t)) % p
        report.translation.append(IdentityRow(t=t, lhs=lhs, stated=stated, corrected=corrected))

    if alpha_value:
        scaled = scale_iso(iso, alpha_value)
        scaled_vector = scaled.as_tuple()
        scaled_half = half_d(scaled)
        alpha_inv = inverse(alpha_value, p)
        report.scaling = []
        for t in range(p):
            lhs = pi_value(L, vector, d_half, base, alpha_value * t % p)
            stated = pi_value(L, scaled_vector, scaled_half, base, t)
            report.scaling.append(
                IdentityRow(t=t, lhs=lhs, stated=stated, corrected=alpha_inv * stated % p)
            )
    return report
