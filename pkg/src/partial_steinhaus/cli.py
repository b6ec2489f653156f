"""
Command-line interface for partial_steinhaus.

Every subcommand prints a human-readable report, or with --json a single
JSON document carrying `schema_version`, `command` and `status`.
Exit codes: 0 valid/found/success, 1 invalid/not found/infeasible,
2 usage or input error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from sympy import primerange

from .core.config import Config, ConfigurationError
from .core.csp import SearchBudget, SearchError, SearchStatus, search
from .core.descent import (
    DescentError,
    NotRepresentable,
    SphereRationalPoint,
    descent_path,
    random_sphere_rational,
)
from .core.fixture import FIXTURE_M, fixture_map, fixture_points
from .core.heuristic import exact_m_p, heuristic_table, stirling_residual
from .core.io import (
    FileFormatError,
    format_map,
    format_points,
    read_map_file,
    read_point_file,
    write_map_file,
    write_point_file,
)
from .core.lattice import InvalidModulus, LatticeError, build_w, complement_plane, conic_points, enumerate_lambda, iso_vector
from .core.linear import (
    AffineAnsatz,
    LinearSystemError,
    assignment_to_map,
    build_system,
    sample_assignments,
    solve_system,
)
from .core.steinhaus import (
    CosetCoverageError,
    SteinhausError,
    UnsupportedModulus,
    lemma36_check,
    pi_table,
    restrict_map,
    verify_all_lines,
    verify_bruteforce,
    verify_line_pairs,
    verify_perms,
    verify_point_set,
)
from .models.field import FieldError, InvalidPrime, as_prime
from .models.geometry import CubePoint, IntVec3, RationalPoint
from .models.maps import CollisionWitness, PairWitness, PointPairWitness, Verdict, Witness
from .utils.logger import get_logger, setup_root_logger

logger = get_logger(__name__)

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

VERIFY_METHODS = ("all", "bruteforce", "perms", "all-lines", "line-pairs")

PACKAGE_ERRORS = (
    FieldError,
    LatticeError,
    SteinhausError,
    DescentError,
    LinearSystemError,
    SearchError,
    ConfigurationError,
    FileFormatError,
    ValueError,
)

# errors that always concern the modulus of the input map
MODULUS_ERRORS = (InvalidModulus, UnsupportedModulus)


class InputError(Exception):
    """Invalid command-line value; `field` names the flag."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def setup_argument_parser() -> argparse.ArgumentParser:
    """Setup and configure command-line argument parser."""
    parser = argparse.ArgumentParser(
        prog="partial-steinhaus",
        description="Verify, construct and search m-partial Steinhaus functions in dimension 3",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  partial-steinhaus fixture --emit fixture.pts --map-output fixture.json
  partial-steinhaus verify-set fixture.pts --m 3
  partial-steinhaus verify-map fixture.json --method perms
  partial-steinhaus pi --map fixture.json --lambda 2 2 1 --x 0 0 0
  partial-steinhaus search-linear --p 3 --samples 4 --output linear.json
  partial-steinhaus search-csp --p 3 --max-seconds 60 --output found.json
  partial-steinhaus heuristic --range 3 13
  partial-steinhaus descent 6 --point 1 2 7 3
  partial-steinhaus --json w --p 5
        """
    )

    # Global options
    parser.add_argument(
        "--config-dir",
        type=Path,
        default=Path("data"),
        help="Configuration directory (default: data)"
    )
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable verbose logging"
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="Emit one machine-readable JSON document"
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    verify_map_parser = subparsers.add_parser("verify-map", help="Verify a map file")
    verify_map_parser.add_argument("map_file", type=Path, help="Map file")
    verify_map_parser.add_argument(
        "--method",
        choices=VERIFY_METHODS,
        default="all",
        help="Verifier to run (default: all, i.e. bruteforce and, for odd prime m, perms)"
    )

    verify_set_parser = subparsers.add_parser("verify-set", help="Verify a point-set file")
    verify_set_parser.add_argument("points_file", type=Path, help="Point-set file")
    verify_set_parser.add_argument("--m", type=int, required=True, help="Cube size m")

    pi_parser = subparsers.add_parser("pi", help="Print one table pi^lambda_x")
    pi_parser.add_argument("--map", dest="map_file", type=Path, required=True, help="Map file")
    pi_parser.add_argument("--lambda", dest="vector", type=int, nargs=3, required=True, metavar="N")
    pi_parser.add_argument("--x", dest="x", type=int, nargs=3, required=True, metavar="N")

    for name, text in (
        ("lambda", "List Lambda, the isotropic vectors mod p, with d(lambda)"),
        ("conic", "List the projective solutions of x^2 + y^2 + z^2 = 0 mod p"),
        ("w", "List W with the complement planes C_lambda"),
    ):
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("--p", type=int, required=True, help="Odd prime")

    linear_parser = subparsers.add_parser("search-linear", help="Solve the affine linear system")
    linear_parser.add_argument("--p", type=int, required=True, help="Odd prime")
    linear_parser.add_argument("--slopes", choices=["unit", "random"], help="Slope mode")
    linear_parser.add_argument("--seed", type=int, help="Seed for random slopes and sampling")
    linear_parser.add_argument("--samples", type=int, help="Maximum number of solutions")
    linear_parser.add_argument("--output", type=Path, help="Write the first solution as a map file")

    csp_parser = subparsers.add_parser("search-csp", help="Backtracking search")
    csp_parser.add_argument("--p", type=int, required=True, help="Odd prime")
    csp_parser.add_argument("--initial", type=Path, help="Partial map file to extend")
    csp_parser.add_argument("--max-nodes", type=int, help="Node budget")
    csp_parser.add_argument("--max-seconds", type=float, help="Wall-clock budget")
    csp_parser.add_argument("--seed", type=int, help="Value-order seed")
    csp_parser.add_argument("--threads", type=int, help="Parallel workers (default: 1)")
    csp_parser.add_argument("--restart-after", type=int, help="Nodes before the first restart")
    csp_parser.add_argument("--fix-origin", action="store_true", default=None, help="Fix L(0,0,0) = (0,0,0)")
    csp_parser.add_argument("--output", type=Path, help="Write a found map here")

    heuristic_parser = subparsers.add_parser("heuristic", help="Table of the heuristic count M_p")
    target = heuristic_parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--p", type=int, help="Single prime")
    target.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), help="All primes in [LO, HI]")
    heuristic_parser.add_argument("--dps", type=int, help="Working precision in decimal digits")
    heuristic_parser.add_argument("--digits", type=int, help="Significant mantissa digits")
    heuristic_parser.add_argument("--stirling", action="store_true", help="Also print ln M_p - (-p^4 + 3.5 p^3 ln p)")
    heuristic_parser.add_argument("--exact", action="store_true", help="Also print M_p as an exact rational")

    descent_parser = subparsers.add_parser("descent", help="Integer representation of N as a sum of three squares")
    descent_parser.add_argument("n", type=int, help="N")
    descent_parser.add_argument("--point", type=int, nargs=4, metavar=("A", "B", "C", "M"),
                                help="Start at (A/M, B/M, C/M) instead of a random rational point")
    descent_parser.add_argument("--seed", type=int, default=0, help="Seed of the first random starting point")
    descent_parser.add_argument("--seeds", type=int, help="Number of random starting points (default: from config)")
    descent_parser.add_argument("--path", action="store_true", help="Print every descent step")

    restrict_parser = subparsers.add_parser("restrict", help="Restrict a map to a divisor m'")
    restrict_parser.add_argument("map_file", type=Path, help="Map file")
    restrict_parser.add_argument("--m-prime", type=int, required=True, help="Divisor of m")
    restrict_parser.add_argument("--output", type=Path, help="Write the restricted map here")

    fixture_parser = subparsers.add_parser("fixture", help="The shipped 27-point set for m = 3")
    fixture_parser.add_argument("--emit", type=Path, help="Write the point-set file")
    fixture_parser.add_argument("--map-output", type=Path, help="Write the fixture as a map file")

    identities_parser = subparsers.add_parser("identities", help="Translation and scaling identities of pi")
    identities_parser.add_argument("--map", dest="map_file", type=Path, required=True, help="Map file")
    identities_parser.add_argument("--lambda", dest="vector", type=int, nargs=3, required=True, metavar="N")
    identities_parser.add_argument("--x", dest="x", type=int, nargs=3, required=True, metavar="N")
    identities_parser.add_argument("--a", dest="a", type=int, default=1, help="Shift a (default: 1)")
    identities_parser.add_argument("--alpha", type=int, default=2, help="Scale alpha (default: 2)")

    config_parser = subparsers.add_parser("config", help="Configuration management and validation")
    config_parser.add_argument("--validate", action="store_true", help="Validate current configuration")
    config_parser.add_argument("--show", action="store_true", help="Show current configuration")

    return parser


def _emit(args: argparse.Namespace, status: str, payload: Dict[str, Any], lines: Sequence[str]) -> None:
    if args.json:
        document = {'schema_version': SCHEMA_VERSION, 'command': args.command, 'status': status}
        document.update(payload)
        print(json.dumps(document, indent=2))
    else:
        for line in lines:
            print(line)


def _prime(value: int, field: str = "p") -> int:
    try:
        return as_prime(value).value
    except InvalidPrime as e:
        raise InputError(field, str(e))


def _describe_witness(witness: Optional[Witness]) -> List[str]:
    if isinstance(witness, PairWitness):
        return [f"  witness x={witness.x} z={witness.z} squared distance {witness.squared_distance}"]
    if isinstance(witness, PointPairWitness):
        return [
            f"  witness {witness.first} | {witness.second} "
            f"squared distance {witness.squared_distance}"
        ]
    if isinstance(witness, CollisionWitness):
        return [
            f"  witness lambda={witness.iso.vector} d={witness.iso.d} x={witness.x}: "
            f"pi({witness.t}) = pi({witness.s}) = {witness.value}"
        ]
    return []


def _verdict_lines(verdict: Verdict) -> List[str]:
    lines = [f"{verdict.method}: {verdict.label} ({verdict.checks} checks)"]
    if 'tables' in verdict.details:
        lines.append(f"  permutation tables: {verdict.details['tables']}, even: {verdict.details.get('even')}")
    return lines + _describe_witness(verdict.witness)


def _is_odd_prime(m: int) -> bool:
    try:
        as_prime(m)
        return True
    except InvalidPrime:
        return False


def handle_verify_map_command(args: argparse.Namespace, config: Config) -> int:
    """Run the requested verifiers on a map file."""
    L = read_map_file(args.map_file)
    runners = {
        "bruteforce": verify_bruteforce,
        "perms": verify_perms,
        "all-lines": verify_all_lines,
        "line-pairs": verify_line_pairs,
    }
    if args.method == "all":
        methods = ["bruteforce"] + (["perms"] if _is_odd_prime(L.m) else [])
    else:
        methods = [args.method]
    verdicts = [runners[name](L) for name in methods]
    valid = all(v.valid for v in verdicts)
    if len({v.valid for v in verdicts}) > 1:
        logger.error(f"Verifiers disagree on {args.map_file}: {[v.label for v in verdicts]}")

    lines = ["Valid" if valid else "Invalid"]
    for verdict in verdicts:
        lines.extend(_verdict_lines(verdict))
    _emit(args, "valid" if valid else "invalid",
          {'m': L.m, 'verdicts': [v.to_dict() for v in verdicts]}, lines)
    return EXIT_OK if valid else EXIT_NEGATIVE


def handle_verify_set_command(args: argparse.Namespace, config: Config) -> int:
    """Check coset coverage and pairwise distances of a point set."""
    points = read_point_file(args.points_file)
    try:
        verdict = verify_point_set(points, args.m)
    except CosetCoverageError as e:
        _emit(args, "invalid", {'m': args.m, 'coverage': e.to_dict()}, ["Invalid", f"  {e}"])
        return EXIT_NEGATIVE
    _emit(args, "valid" if verdict.valid else "invalid",
          {'m': args.m, 'verdict': verdict.to_dict()}, [verdict.label] + _verdict_lines(verdict)[1:])
    return EXIT_OK if verdict.valid else EXIT_NEGATIVE


def handle_pi_command(args: argparse.Namespace, config: Config) -> int:
    """Print pi^lambda_x(t) for t = 0..p-1."""
    L = read_map_file(args.map_file)
    p = _prime(L.m, "m")
    iso = iso_vector(args.vector, p)
    table = pi_table(L, iso, CubePoint.of(args.x, p))
    values = table.as_ints()
    collision = table.collision()
    lines = [
        f"lambda={iso.vector} d={iso.d} x={table.x}",
        "t:  " + " ".join(str(t) for t in range(p)),
        "pi: " + " ".join(str(v) for v in values),
        "permutation" if collision is None else f"not a permutation: pi({collision[0]}) = pi({collision[1]})",
    ]
    _emit(args, "success", {'table': table.to_dict()}, lines)
    return EXIT_OK


def handle_lambda_command(args: argparse.Namespace, config: Config) -> int:
    """List Lambda with d(lambda)."""
    p = _prime(args.p)
    isos = enumerate_lambda(p)
    lines = [f"|Lambda| = {len(isos)} for p={p}"] + [f"{iso.vector} d={iso.d}" for iso in isos]
    _emit(args, "success", {'p': p, 'count': len(isos), 'lambda': [iso.to_dict() for iso in isos]}, lines)
    return EXIT_OK


def handle_conic_command(args: argparse.Namespace, config: Config) -> int:
    """List the projective conic points."""
    p = _prime(args.p)
    points = conic_points(p)
    lines = [f"{len(points)} points on x^2 + y^2 + z^2 = 0 over GF({p})"] + [str(pt) for pt in points]
    _emit(args, "success", {'p': p, 'count': len(points), 'points': [list(pt.as_tuple()) for pt in points]}, lines)
    return EXIT_OK


def handle_w_command(args: argparse.Namespace, config: Config) -> int:
    """List W and the basis of every complement plane."""
    p = _prime(args.p)
    w = build_w(p)
    planes = [complement_plane(iso) for iso in w]
    lines = [f"|W| = {len(w)} for p={p}"]
    for plane in planes:
        basis = ", ".join(str(b.as_tuple()) for b in plane.basis)
        lines.append(f"{plane.iso.vector} d={plane.iso.d}  C spanned by {basis}")
    payload = {
        'p': p,
        'w': [dict(iso.to_dict(), basis=[list(b.as_tuple()) for b in plane.basis]) for iso, plane in zip(w, planes)],
    }
    _emit(args, "success", payload, lines)
    return EXIT_OK


def handle_search_linear_command(args: argparse.Namespace, config: Config) -> int:
    """Build and solve the affine system, then verify every sampled solution."""
    settings = config.linear
    p = _prime(args.p)
    mode = args.slopes or settings.slopes
    seed = args.seed if args.seed is not None else settings.seed
    samples = args.samples if args.samples is not None else settings.samples
    if samples < 1:
        raise InputError("samples", f"must be at least 1, got {samples}")

    system = build_system(p, AffineAnsatz.from_mode(p, mode, seed))
    space = solve_system(system)
    maps = [assignment_to_map(v, p) for v in sample_assignments(space, samples, seed)]
    verdicts = [verify_perms(L) for L in maps]
    found = bool(maps) and all(v.valid for v in verdicts)

    lines = [
        f"system: {system.num_rows} rows, {system.num_vars} variables, slopes={mode}",
        f"rank {space.rank}, kernel dimension {space.kernel_dimension}, "
        f"{'consistent' if space.consistent else 'inconsistent'}",
        f"{len(maps)} solutions sampled, {sum(v.valid for v in verdicts)} verified",
    ]
    if maps and args.output:
        write_map_file(args.output, maps[0])
        lines.append(f"first solution written to {args.output}")
    elif maps and not args.json:
        lines.append(format_map(maps[0]).rstrip())
    payload = {
        'system': {'rows': system.num_rows, 'variables': system.num_vars, 'slopes': mode},
        'space': space.to_dict(),
        'solutions': [L.to_dict() for L in maps],
        'verified': [v.valid for v in verdicts],
    }
    _emit(args, "found" if found else "not_found", payload, lines)
    return EXIT_OK if found else EXIT_NEGATIVE


def handle_search_csp_command(args: argparse.Namespace, config: Config) -> int:
    """Run the backtracking search with flags overriding configured defaults."""
    settings = config.search
    p = _prime(args.p)
    initial = read_map_file(args.initial, allow_partial=True) if args.initial else None
    if initial is not None and initial.m != p:
        raise InputError("initial", f"map is on X_{initial.m}, expected m={p}")
    threads = args.threads if args.threads is not None else settings.threads
    if threads < 1:
        raise InputError("threads", f"must be at least 1, got {threads}")
    budget = SearchBudget(
        max_nodes=args.max_nodes if args.max_nodes is not None else settings.max_nodes,
        max_seconds=args.max_seconds if args.max_seconds is not None else settings.max_seconds,
    )
    outcome = search(
        p,
        initial=initial,
        budget=budget,
        seed=args.seed if args.seed is not None else settings.seed,
        threads=threads,
        fix_origin=args.fix_origin if args.fix_origin is not None else settings.fix_origin,
        restart_after=args.restart_after if args.restart_after is not None else settings.restart_after,
    )

    stats = outcome.stats
    lines = [
        outcome.status.value,
        f"nodes {stats.nodes}, backtracks {stats.backtracks}, prunings {stats.prunings}, "
        f"restarts {stats.restarts}, wall time {stats.wall_time:.3f}s",
    ]
    lines.extend(_describe_witness(outcome.witness))
    if outcome.solution is not None:
        if args.output:
            write_map_file(args.output, outcome.solution)
            lines.append(f"map written to {args.output}")
        elif not args.json:
            lines.append(format_map(outcome.solution).rstrip())
    _emit(args, outcome.status.value, outcome.to_dict(), lines)
    return EXIT_OK if outcome.status is SearchStatus.FOUND else EXIT_NEGATIVE


def handle_heuristic_command(args: argparse.Namespace, config: Config) -> int:
    """Print rows 'p mantissaEexponent'."""
    settings = config.heuristic
    dps = args.dps if args.dps is not None else settings.dps
    digits = args.digits if args.digits is not None else settings.digits
    if digits < 1:
        raise InputError("digits", f"must be at least 1, got {digits}")
    if args.p is not None:
        primes = [_prime(args.p)]
    else:
        lo, hi = args.range
        primes = [q for q in primerange(max(lo, 3), hi + 1)]
        if not primes:
            raise InputError("range", f"no odd prime in [{lo}, {hi}]")

    rows = []
    lines = []
    for q, magnitude in heuristic_table(primes, dps):
        row: Dict[str, Any] = {'p': q, **magnitude.to_dict()}
        row['display'] = magnitude.display(digits)
        line = f"{q} {row['display']}"
        if args.stirling:
            residual = stirling_residual(q, dps)
            row['stirling_residual'] = str(residual)
            line += f"  stirling residual {float(residual):.6g}"
        if args.exact:
            row['exact'] = str(exact_m_p(q))
            line += f"  exact {row['exact']}"
        rows.append(row)
        lines.append(line)
    _emit(args, "success", {'dps': dps, 'rows': rows}, lines)
    return EXIT_OK


def handle_descent_command(args: argparse.Namespace, config: Config) -> int:
    """Descend from one or more rational points of the sphere to integer ones."""
    if args.point:
        a, b, c, m = args.point
        if m <= 0:
            raise InputError("point", f"denominator must be positive, got {m}")
        starts = [SphereRationalPoint(RationalPoint(IntVec3(a, b, c), m), args.n)]
    else:
        count = args.seeds if args.seeds is not None else config.descent.seeds
        if count < 1:
            raise InputError("seeds", f"must be at least 1, got {count}")
        try:
            starts = [random_sphere_rational(args.n, seed=args.seed + k) for k in range(count)]
        except NotRepresentable as e:
            _emit(args, "not_representable", {'n': args.n}, [str(e)])
            return EXIT_NEGATIVE

    runs = []
    lines = []
    for start in starts:
        steps, vector = descent_path(start)
        x, y, z = vector
        lines.append(f"{args.n} = ({x})^2 + ({y})^2 + ({z})^2  from {start.point}")
        if args.path:
            for step in steps:
                lines.append(
                    f"  {step.point}  den {step.denominator}  nearest {step.nearest.as_tuple()}  "
                    f"|P-Z|^2 {step.distance_sq}"
                )
        runs.append({
            'start': start.to_dict(),
            'vector': list(vector.as_tuple()),
            'denominators': [step.denominator for step in steps],
            'steps': [step.to_dict() for step in steps] if args.path else None,
        })
    _emit(args, "success", {'n': args.n, 'runs': runs}, lines)
    return EXIT_OK


def handle_restrict_command(args: argparse.Namespace, config: Config) -> int:
    """Restrict a map to X_{m'} and verify the result."""
    L = read_map_file(args.map_file)
    restricted = restrict_map(L, args.m_prime)
    verdict = verify_bruteforce(restricted) if restricted.m > 1 else None
    lines = [f"restricted from m={L.m} to m'={restricted.m}"]
    if verdict is not None:
        lines.extend(_verdict_lines(verdict))
    else:
        lines.append("single point: vacuously valid")
    if args.output:
        write_map_file(args.output, restricted)
        lines.append(f"map written to {args.output}")
    elif not args.json:
        lines.append(format_map(restricted).rstrip())
    payload = {'map': restricted.to_dict(), 'verdict': verdict.to_dict() if verdict else None}
    valid = verdict is None or verdict.valid
    _emit(args, "success" if valid else "invalid", payload, lines)
    return EXIT_OK if valid else EXIT_NEGATIVE


def handle_fixture_command(args: argparse.Namespace, config: Config) -> int:
    """Print, verify and optionally write the shipped fixture."""
    points = fixture_points()
    L = fixture_map()
    set_verdict = verify_point_set(points, FIXTURE_M)
    perms_verdict = verify_perms(L)
    valid = set_verdict.valid and perms_verdict.valid
    lines = format_points(points).splitlines()
    lines.append(f"point set: {set_verdict.label}; permutation tables: {perms_verdict.label} "
                 f"({perms_verdict.details.get('tables')} tables)")
    if args.emit:
        write_point_file(args.emit, points)
        lines.append(f"points written to {args.emit}")
    if args.map_output:
        write_map_file(args.map_output, L)
        lines.append(f"map written to {args.map_output}")
    payload = {
        'points': [p.to_dict() for p in points],
        'map': L.to_dict(),
        'verdicts': [set_verdict.to_dict(), perms_verdict.to_dict()],
    }
    _emit(args, "valid" if valid else "invalid", payload, lines)
    return EXIT_OK if valid else EXIT_NEGATIVE


def handle_identities_command(args: argparse.Namespace, config: Config) -> int:
    """Evaluate the translation and scaling identities for one (lambda, x, a, alpha)."""
    L = read_map_file(args.map_file)
    p = _prime(L.m, "m")
    if args.alpha % p == 0:
        raise InputError("alpha", f"must be nonzero mod {p}")
    iso = iso_vector(args.vector, p)
    report = lemma36_check(L, iso, CubePoint.of(args.x, p), args.a, args.alpha)
    corrected = report.translation_corrected_holds and report.scaling_corrected_holds
    lines = [
        f"lambda={iso.vector} d={iso.d} x={report.x} a={report.a} alpha={report.alpha}",
        f"translation: as stated {'holds' if report.translation_holds else 'fails'}, "
        f"unreduced subscript {'holds' if report.translation_corrected_holds else 'fails'}",
        f"scaling: as stated {'holds' if report.scaling_holds else 'fails'}, "
        f"alpha-weighted {'holds' if report.scaling_corrected_holds else 'fails'}",
    ]
    lines.extend(f"  {line}" for line in report.discrepancies())
    _emit(args, "success" if corrected else "failed", {'report': report.to_dict()}, lines)
    return EXIT_OK if corrected else EXIT_NEGATIVE


def handle_config_command(args: argparse.Namespace, config: Config) -> int:
    """Handle configuration management command."""
    if args.validate:
        issues = config.validate()
        lines = ["Configuration validation: passed"] if not issues else (
            ["Configuration validation issues:"] + [f"  - {issue}" for issue in issues]
        )
        _emit(args, "invalid" if issues else "valid", {'issues': issues}, lines)
        return EXIT_NEGATIVE if issues else EXIT_OK
    if args.show:
        _emit(args, "success", {'config': config.to_dict()}, [json.dumps(config.to_dict(), indent=2)])
        return EXIT_OK
    raise InputError("config", "no operation specified, use --validate or --show")


HANDLERS = {
    "verify-map": handle_verify_map_command,
    "verify-set": handle_verify_set_command,
    "pi": handle_pi_command,
    "lambda": handle_lambda_command,
    "conic": handle_conic_command,
    "w": handle_w_command,
    "search-linear": handle_search_linear_command,
    "search-csp": handle_search_csp_command,
    "heuristic": handle_heuristic_command,
    "descent": handle_descent_command,
    "restrict": handle_restrict_command,
    "fixture": handle_fixture_command,
    "identities": handle_identities_command,
    "config": handle_config_command,
}


def _report_error(args: argparse.Namespace, field: str, message: str) -> int:
    print(f"Error: {field}: {message}", file=sys.stderr)
    if args.json:
        _emit(args, "error", {'error': {'field': field, 'message': message}}, [])
    return EXIT_ERROR


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch the subcommand and return its exit code."""
    parser = setup_argument_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_ERROR

    setup_root_logger(logging.DEBUG if args.verbose else logging.WARNING)

    handler = HANDLERS.get(args.command)
    if handler is None:
        parser.print_help()
        return EXIT_ERROR

    try:
        config = Config(config_dir=args.config_dir)
        return handler(args, config)
    except (InputError, FileFormatError) as e:
        return _report_error(args, e.field, e.message)
    except MODULUS_ERRORS as e:
        return _report_error(args, "m", str(e))
    except PACKAGE_ERRORS as e:
        return _report_error(args, args.command, str(e))
    except Exception as e:
        logger.error(f"Unexpected error in {args.command} command: {e}")
        return _report_error(args, args.command, f"unexpected error: {e}")


def main() -> int:
    """Main CLI entry point."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
