"""
Backtracking search for p-partial Steinhaus functions.

Variables are the cells x of X_p with values L(x) in X_p. Every pair
(lambda in W, x in C_lambda) is an alldifferent constraint on the p values
pi^lambda_x(t) = const(t) + lambda . L(y_t) mod p. Each value depends on a
single cell through the functional v -> lambda . v, so forward checking
removes whole residue classes of that functional from sibling domains.
Domains are bitsets over the p^3 value indices.
"""

import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..models.field import PrimeLike, as_prime
from ..models.geometry import CubePoint, IsoVector, Triple
from ..models.maps import CollisionWitness, PartialMap
from ..utils.bitset import all_bits_mask, bitset_from_indices, bitset_to_indices, popcount
from ..utils.logger import get_logger
from .lattice import build_w, complement_plane, dot, line_cells
from .steinhaus import half_d, verify_bruteforce, verify_perms

logger = get_logger(__name__)

TIME_CHECK_INTERVAL = 256
RESTART_GROWTH = 1.5


class SearchError(Exception):
    """The search produced a result that fails verification."""
    pass


class SearchStatus(str, Enum):
    """Terminal states of a search."""
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET_EXCEEDED = "budget_exceeded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Constraint:
    """alldifferent over pi^lambda_x(t) = offsets[t] + lambda . L(cells[t])."""
    iso: IsoVector
    anchor: CubePoint
    cells: Tuple[int, ...]
    offsets: Tuple[int, ...]

    @property
    def vector(self) -> Triple:
        return self.iso.as_tuple()


@dataclass
class ConstraintIndex:
    """All (p+1)p^2 constraints plus per-cell and per-direction lookup tables."""
    p: int
    constraints: List[Constraint]
    memberships: List[List[Tuple[int, int]]]
    projections: Dict[Triple, List[int]]
    level_masks: Dict[Triple, List[int]]

    @property
    def num_cells(self) -> int:
        return self.p ** 3

    def cell_point(self, index: int) -> CubePoint:
        return CubePoint.from_index(index, self.p)


@lru_cache(maxsize=None)
def _build_constraints(q: int) -> ConstraintIndex:
    constraints: List[Constraint] = []
    memberships: List[List[Tuple[int, int]]] = [[] for _ in range(q ** 3)]
    projections: Dict[Triple, List[int]] = {}
    level_masks: Dict[Triple, List[int]] = {}
    for iso in build_w(q):
        vector = iso.as_tuple()
        d_half = half_d(iso)
        projection = [dot(vector, CubePoint.from_index(v, q).as_tuple()) % q for v in range(q ** 3)]
        projections[vector] = projection
        level_masks[vector] = [
            bitset_from_indices(v for v in range(q ** 3) if projection[v] == r) for r in range(q)
        ]
        for x in complement_plane(iso).points:
            cells = []
            offsets = []
            for t, (y, eps) in enumerate(line_cells(x.as_tuple(), vector, q)):
                cells.append(CubePoint.of(y, q).index)
                offsets.append((t * d_half - dot(vector, eps)) % q)
            cid = len(constraints)
            for position, cell in enumerate(cells):
                memberships[cell].append((cid, position))
            constraints.append(Constraint(iso, x, tuple(cells), tuple(offsets)))
    logger.debug(f"Built {len(constraints)} constraints for p={q}")
    return ConstraintIndex(q, constraints, memberships, projections, level_masks)


def build_constraints(p: PrimeLike) -> ConstraintIndex:
    """Precompute cells y_t and offsets t*d/2 - lambda . eps_t for every constraint."""
    return _build_constraints(as_prime(p).value)


@dataclass
class SearchBudget:
    """Node and wall-clock limits; None means unlimited."""
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None


@dataclass
class SearchStats:
    """Counters reported for every search."""
    nodes: int = 0
    backtracks: int = 0
    prunings: int = 0
    restarts: int = 0
    wall_time: float = 0.0

    def merge(self, other: 'SearchStats') -> None:
        self.nodes += other.nodes
        self.backtracks += other.backtracks
        self.prunings += other.prunings
        self.restarts += other.restarts

    def to_dict(self) -> Dict[str, Any]:
        return {
            'nodes': self.nodes,
            'backtracks': self.backtracks,
            'prunings': self.prunings,
            'restarts': self.restarts,
            'wall_time': round(self.wall_time, 6),
        }


@dataclass
class SearchOutcome:
    """Result of search(); solution is set only for FOUND."""
    status: SearchStatus
    stats: SearchStats = field(default_factory=SearchStats)
    solution: Optional[PartialMap] = None
    witness: Optional[CollisionWitness] = None

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND

    def to_dict(self) -> Dict[str, Any]:
        return {
            'status': self.status.value,
            'stats': self.stats.to_dict(),
            'solution': self.solution.to_dict() if self.solution else None,
            'witness': self.witness.to_dict() if self.witness else None,
        }


class _Stop(Exception):
    """Unwinds the recursion when a limit is reached."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class _Solver:
    """Depth-first search with forward checking and minimum-remaining-values ordering."""

    def __init__(
        self,
        index: ConstraintIndex,
        domains: List[int],
        assigned: List[Optional[int]],
        rng: random.Random,
        stats: SearchStats,
        node_limit: Optional[int] = None,
        deadline: Optional[float] = None,
        cancel: Optional[threading.Event] = None,
    ):
        self.index = index
        self.domains = domains
        self.assigned = assigned
        self.rng = rng
        self.stats = stats
        self.node_limit = node_limit
        self.deadline = deadline
        self.cancel = cancel
        self.trail: List[Tuple[int, int]] = []

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.node_limit is not None and self.stats.nodes > self.node_limit:
            self.stats.nodes -= 1
            raise _Stop("nodes")
        if self.stats.nodes % TIME_CHECK_INTERVAL == 0:
            if self.deadline is not None and time.perf_counter() > self.deadline:
                raise _Stop("time")
            if self.cancel is not None and self.cancel.is_set():
                raise _Stop("cancelled")

    def assign(self, cell: int, value: int) -> bool:
        """Set L(cell) = value and prune siblings; False on a conflict or wipeout."""
        index = self.index
        p = index.p
        self.assigned[cell] = value
        for cid, position in index.memberships[cell]:
            constraint = index.constraints[cid]
            vector = constraint.vector
            projection = index.projections[vector]
            masks = index.level_masks[vector]
            offsets = constraint.offsets
            level = (offsets[position] + projection[value]) % p
            for other_position, other in enumerate(constraint.cells):
                if other_position == position:
                    continue
                other_value = self.assigned[other]
                if other_value is not None:
                    if (offsets[other_position] + projection[other_value]) % p == level:
                        return False
                    continue
                domain = self.domains[other]
                removed = domain & masks[(level - offsets[other_position]) % p]
                if removed:
                    self.trail.append((other, domain))
                    self.stats.prunings += popcount(removed)
                    domain ^= removed
                    self.domains[other] = domain
                    if not domain:
                        return False
        return True

    def undo(self, cell: int, mark: int) -> None:
        while len(self.trail) > mark:
            other, domain = self.trail.pop()
            self.domains[other] = domain
        self.assigned[cell] = None

    def select(self) -> Optional[int]:
        """Unassigned cell with the smallest domain, lowest index on ties."""
        best = None
        best_size = None
        for cell, value in enumerate(self.assigned):
            if value is None:
                size = popcount(self.domains[cell])
                if best_size is None or size < best_size:
                    best, best_size = cell, size
                    if size <= 1:
                        break
        return best

    def ordered_values(self, cell: int) -> List[int]:
        values = bitset_to_indices(self.domains[cell])
        self.rng.shuffle(values)
        return values

    def try_values(self, cell: int, values: Sequence[int]) -> bool:
        for value in values:
            self._tick()
            mark = len(self.trail)
            if self.assign(cell, value) and self.solve():
                return True
            self.undo(cell, mark)
        self.stats.backtracks += 1
        return False

    def solve(self) -> bool:
        cell = self.select()
        if cell is None:
            return True
        return self.try_values(cell, self.ordered_values(cell))


def _initial_state(
    index: ConstraintIndex, initial: PartialMap
) -> Tuple[Optional[List[int]], List[Optional[int]], Optional[CollisionWitness]]:
    """
    Validate and propagate the initial assignment.

    Returns (domains, assigned, witness): witness is set when two assigned
    cells already collide; domains is None when propagation empties a domain.
    """
    p = index.p
    assigned: List[Optional[int]] = [None if e is None else e.index for e in initial.entries]
    for constraint in index.constraints:
        projection = index.projections[constraint.vector]
        levels: Dict[int, int] = {}
        for t, cell in enumerate(constraint.cells):
            value = assigned[cell]
            if value is None:
                continue
            level = (constraint.offsets[t] + projection[value]) % p
            if level in levels:
                witness = CollisionWitness(
                    iso=constraint.iso, x=constraint.anchor, t=levels[level], s=t, value=level
                )
                return None, assigned, witness
            levels[level] = t

    full = all_bits_mask(index.num_cells)
    domains = [full if value is None else (1 << value) for value in assigned]
    solver = _Solver(index, domains, [None] * index.num_cells, random.Random(0), SearchStats())
    for cell, value in enumerate(assigned):
        if value is not None and not solver.assign(cell, value):
            return None, assigned, None
    return solver.domains, assigned, None


def propagate(p: PrimeLike, initial: PartialMap) -> Optional[Dict[Triple, List[Triple]]]:
    """
    Forward-checked candidate values of every unassigned cell.

    Returns None when the initial assignment is inconsistent or leaves some
    cell without candidates.
    """
    index = build_constraints(p)
    domains, assigned, witness = _initial_state(index, initial)
    if domains is None or witness is not None:
        return None
    return {
        index.cell_point(cell).as_tuple(): [index.cell_point(v).as_tuple() for v in bitset_to_indices(domains[cell])]
        for cell, value in enumerate(assigned)
        if value is None
    }


def _solution_map(index: ConstraintIndex, assigned: Sequence[Optional[int]]) -> PartialMap:
    p = index.p
    return PartialMap(p, [CubePoint.from_index(v, p) for v in assigned])  # type: ignore[arg-type]


def _run_sequential(
    index: ConstraintIndex,
    domains: List[int],
    assigned: List[Optional[int]],
    seed: Optional[int],
    budget: SearchBudget,
    deadline: Optional[float],
    restart_after: Optional[int],
    stats: SearchStats,
) -> Tuple[SearchStatus, Optional[List[Optional[int]]]]:
    run_limit = float(restart_after) if restart_after else None
    attempt = 0
    while True:
        rng = random.Random(seed if attempt == 0 else f"{seed}:{attempt}")
        limit = budget.max_nodes
        if run_limit is not None:
            cap = stats.nodes + int(run_limit)
            limit = cap if limit is None else min(limit, cap)
        solver = _Solver(index, list(domains), list(assigned), rng, stats, limit, deadline)
        try:
            if solver.solve():
                return SearchStatus.FOUND, solver.assigned
            return SearchStatus.EXHAUSTED, None
        except _Stop as stop:
            global_nodes_spent = budget.max_nodes is not None and stats.nodes >= budget.max_nodes
            if stop.reason != "nodes" or global_nodes_spent or run_limit is None:
                return SearchStatus.BUDGET_EXCEEDED, None
        attempt += 1
        stats.restarts += 1
        run_limit *= RESTART_GROWTH
        logger.debug(f"Restart {attempt} after {stats.nodes} nodes")


def _run_parallel(
    index: ConstraintIndex,
    domains: List[int],
    assigned: List[Optional[int]],
    seed: Optional[int],
    budget: SearchBudget,
    deadline: Optional[float],
    threads: int,
    stats: SearchStats,
) -> Tuple[SearchStatus, Optional[List[Optional[int]]]]:
    root = _Solver(index, domains, assigned, random.Random(seed), SearchStats())
    cell = root.select()
    if cell is None:
        return SearchStatus.FOUND, assigned
    values = root.ordered_values(cell)
    chunks = [values[i::threads] for i in range(threads) if values[i::threads]]
    per_worker = None if budget.max_nodes is None else max(1, budget.max_nodes // len(chunks))
    cancel = threading.Event()

    def explore(worker: int, chunk: List[int]) -> Tuple[SearchStatus, Optional[List[Optional[int]]], SearchStats]:
        worker_stats = SearchStats()
        solver = _Solver(
            index, list(domains), list(assigned), random.Random(f"{seed}:worker{worker}"),
            worker_stats, per_worker, deadline, cancel,
        )
        try:
            if solver.try_values(cell, chunk):
                return SearchStatus.FOUND, solver.assigned, worker_stats
            return SearchStatus.EXHAUSTED, None, worker_stats
        except _Stop:
            return SearchStatus.BUDGET_EXCEEDED, None, worker_stats

    found: Optional[List[Optional[int]]] = None
    statuses = []
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(explore, worker, chunk) for worker, chunk in enumerate(chunks)]
        for future in as_completed(futures):
            status, solution, worker_stats = future.result()
            stats.merge(worker_stats)
            statuses.append(status)
            if status is SearchStatus.FOUND and found is None:
                found = solution
                cancel.set()
    if found is not None:
        return SearchStatus.FOUND, found
    if all(s is SearchStatus.EXHAUSTED for s in statuses):
        return SearchStatus.EXHAUSTED, None
    return SearchStatus.BUDGET_EXCEEDED, None


def search(
    p: PrimeLike,
    initial: Optional[PartialMap] = None,
    budget: Optional[SearchBudget] = None,
    seed: Optional[int] = 0,
    threads: int = 1,
    fix_origin: bool = False,
    restart_after: Optional[int] = None,
) -> SearchOutcome:
    """
    Look for a p-partial Steinhaus function extending `initial`.

    Args:
        p: Odd prime
        initial: Partial assignment to extend (default: empty)
        budget: Node and wall-clock limits
        seed: Seed of the value-order shuffle
        threads: Workers splitting the root branching; 1 is the deterministic default
        fix_origin: Assign L(0,0,0) = (0,0,0) first
        restart_after: Node count of the first run before a reshuffled restart

    Returns:
        SearchOutcome; every FOUND map has been re-verified
    """
    q = as_prime(p).value
    budget = budget or SearchBudget()
    started = time.perf_counter()
    deadline = None if budget.max_seconds is None else started + budget.max_seconds
    index = build_constraints(q)
    initial = initial if initial is not None else PartialMap.empty(q)
    if initial.m != q:
        raise SearchError(f"initial map is on X_{initial.m}, search is on X_{q}")
    if fix_origin and initial.entries[0] is None:
        if initial.assigned_cells():
            logger.warning("fix_origin with a non-empty initial map may exclude completions")
        initial = initial.with_entry((0, 0, 0), (0, 0, 0))

    stats = SearchStats()
    domains, assigned, witness = _initial_state(index, initial)
    if witness is not None:
        stats.wall_time = time.perf_counter() - started
        logger.info(f"Initial assignment violates pi^{witness.iso.vector}_{witness.x}")
        return SearchOutcome(SearchStatus.INFEASIBLE, stats, witness=witness)
    if domains is None:
        stats.wall_time = time.perf_counter() - started
        return SearchOutcome(SearchStatus.EXHAUSTED, stats)

    if threads > 1:
        status, solution = _run_parallel(index, domains, assigned, seed, budget, deadline, threads, stats)
    else:
        status, solution = _run_sequential(
            index, domains, assigned, seed, budget, deadline, restart_after, stats
        )
    stats.wall_time = time.perf_counter() - started
    logger.info(f"Search p={q} finished: {status.value}, {stats.nodes} nodes, {stats.backtracks} backtracks")

    if status is not SearchStatus.FOUND:
        return SearchOutcome(status, stats)
    assert solution is not None
    result = _solution_map(index, solution)
    if not verify_bruteforce(result).valid or not verify_perms(result).valid:
        logger.error("Search returned a map that fails verification")
        raise SearchError("search produced an invalid map")
    return SearchOutcome(status, stats, solution=result)
