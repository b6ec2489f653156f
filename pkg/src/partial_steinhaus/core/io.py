"""
Reading and writing map files and point-set files.

Map file: one JSON object {"m": m, "entries": [[a, b, c], ...]} with the m^3
entries in index order a*m^2 + b*m + c; null marks an unassigned cell and is
only accepted when a partial map is requested.

Point-set file: one point per line, three rationals "a/b" separated by
spaces; blank lines and '#' comments are ignored.
"""

import json
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Union

from ..models.geometry import CubePoint, RationalPoint
from ..models.maps import PartialMap
from ..utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


class FileFormatError(Exception):
    """Malformed input file; `field` names the offending part."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def _int_field(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FileFormatError(field, f"expected an integer, got {value!r}")
    return value


def parse_map_document(data: Any, allow_partial: bool = False) -> PartialMap:
    """Validate a decoded map document and build the PartialMap."""
    if not isinstance(data, dict):
        raise FileFormatError("map", "expected a JSON object with 'm' and 'entries'")
    if "m" not in data:
        raise FileFormatError("m", "missing")
    m = _int_field(data["m"], "m")
    if m < 1:
        raise FileFormatError("m", f"must be at least 1, got {m}")
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise FileFormatError("entries", "missing or not a list")
    if len(entries) != m ** 3:
        raise FileFormatError("entries", f"expected {m ** 3} entries for m={m}, got {len(entries)}")

    values: List[Optional[CubePoint]] = []
    for index, entry in enumerate(entries):
        field = f"entries[{index}]"
        if entry is None:
            if not allow_partial:
                raise FileFormatError(field, "unassigned entry in a map that must be complete")
            values.append(None)
            continue
        if not isinstance(entry, list) or len(entry) != 3:
            raise FileFormatError(field, f"expected a triple, got {entry!r}")
        coords = [_int_field(c, field) for c in entry]
        if any(not 0 <= c < m for c in coords):
            raise FileFormatError(field, f"{coords} is outside [0, {m})")
        values.append(CubePoint.of(coords, m))
    return PartialMap(m, values)


def read_map_file(path: PathLike, allow_partial: bool = False) -> PartialMap:
    """
    Load a map file.

    Raises:
        FileFormatError: on unreadable files, invalid JSON or bad fields
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise FileFormatError(str(path), f"cannot read file: {e.strerror or e}")
    except json.JSONDecodeError as e:
        raise FileFormatError(str(path), f"invalid JSON at line {e.lineno}: {e.msg}")
    L = parse_map_document(data, allow_partial)
    logger.debug(f"Loaded map with m={L.m} from {path} ({len(L.assigned_cells())} cells assigned)")
    return L


def format_map(L: PartialMap) -> str:
    return json.dumps(L.to_dict(), separators=(",", ":")) + "\n"


def write_map_file(path: PathLike, L: PartialMap) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_map(L))
    logger.info(f"Map with m={L.m} written to {path}")


def _parse_rational(token: str, field: str) -> Fraction:
    numerator, slash, denominator = token.partition("/")
    try:
        num = int(numerator)
        den = int(denominator) if slash else 1
    except ValueError:
        raise FileFormatError(field, f"{token!r} is not a rational a/b")
    if den <= 0:
        raise FileFormatError(field, f"denominator of {token!r} must be positive")
    return Fraction(num, den)


def parse_points(lines: Iterable[str], source: str = "points") -> List[RationalPoint]:
    points = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        field = f"{source}:{lineno}"
        tokens = line.split()
        if len(tokens) != 3:
            raise FileFormatError(field, f"expected 3 coordinates, got {len(tokens)}")
        points.append(RationalPoint.from_fractions([_parse_rational(t, field) for t in tokens]))
    return points


def read_point_file(path: PathLike) -> List[RationalPoint]:
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            points = parse_points(f, str(path))
    except OSError as e:
        raise FileFormatError(str(path), f"cannot read file: {e.strerror or e}")
    logger.debug(f"Loaded {len(points)} points from {path}")
    return points


def format_points(points: Sequence[RationalPoint]) -> str:
    """One line per point, every coordinate over the common denominator of the set."""
    reduced = [p.reduced() for p in points]
    den = lcm(*(p.den for p in reduced)) if reduced else 1
    lines = []
    for point in reduced:
        k = den // point.den
        lines.append(" ".join(f"{c * k}/{den}" for c in point.num))
    return "\n".join(lines) + ("\n" if lines else "")


def write_point_file(path: PathLike, points: Sequence[RationalPoint]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_points(points))
    logger.info(f"{len(points)} points written to {path}")
