"""Zero patterns, shatter functions, separated packings and forbidden-pattern searches."""

import itertools
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from pydantic import Field

from algramsey.algebra import MultiPoly
from algramsey.config import CamelModel
from algramsey.errors import ArityMismatch, BadParameters, BudgetExceeded, OverlappingParts
from algramsey.hypergraph import AlgebraicInstance, EdgeStore, as_store
from algramsey.utils import (
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_TUPLE_BUDGET,
    bits,
    binomial,
    mask_from_bools,
    mask_of,
    parse_fraction,
    popcount,
)

DEFAULT_SHATTER_BUDGET = 10**6
DEFAULT_MAX_Z = 4
SUBSET_BATCH = 4096


# ---------------------------------------------------------------------------
# zero patterns
# ---------------------------------------------------------------------------


class ZeroPatternReport(CamelModel):
    patterns: list[str] = Field(..., description='Realized patterns, "0" = vanishes, "*" = nonzero.')
    count: int = Field(..., description="Number of distinct realized patterns.")
    bound: int = Field(..., description="C(md + n, n).")
    holds: bool = Field(..., description="count <= bound.")
    points: int = Field(..., description="Domain size.")


def _total_degree(f: MultiPoly) -> int:
    return max((sum(exps) for _, exps in f.terms), default=0)


def _all_points(p: int, nvars: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    columns = [(codes // p ** (nvars - 1 - j)) % p for j in range(nvars)]
    return np.stack(columns, axis=1) if columns else np.zeros((len(codes), 0), dtype=np.int64)


def zero_patterns(
    polys: Sequence[MultiPoly], domain="all", budget: int = DEFAULT_TUPLE_BUDGET
) -> ZeroPatternReport:
    """
    Enumerate the zero patterns of f_1..f_m realized on a domain.

    Args:
        polys: Polynomials over one ring; all r*n variables count as the n of the bound.
        domain: "all" for the whole of F_p^(r*n), or an array of points.
        budget: Cap on the number of points evaluated.

    Returns:
        ZeroPatternReport: Patterns in sorted order with the C(md+n, n) ceiling.
    """
    if not polys:
        raise BadParameters("zero_patterns needs at least one polynomial")
    first = polys[0]
    for f in polys:
        if (f.field, f.nvars) != (first.field, first.nvars):
            raise ArityMismatch("zero_patterns needs polynomials over one ring")
    p, nvars, m = first.field.p, first.nvars, len(polys)
    d = max(_total_degree(f) for f in polys)

    if isinstance(domain, str):
        if domain != "all":
            raise BadParameters(f"unknown domain {domain!r}")
        total = p**nvars
        if total > budget:
            raise BudgetExceeded(f"F_{p}^{nvars} has {total} points", needed=total, budget=budget)
        chunks = (
            _all_points(p, nvars, start, min(start + (1 << 16), total)) for start in range(0, total, 1 << 16)
        )
    else:
        points = np.asarray(domain, dtype=np.int64).reshape(-1, nvars)
        total = len(points)
        if total > budget:
            raise BudgetExceeded(f"domain has {total} points", needed=total, budget=budget)
        chunks = iter([points])

    weights = np.array([1 << i for i in range(m)], dtype=np.int64) if m < 63 else None
    realized: set = set()
    for chunk in chunks:
        vanish = np.stack([f.evaluate_many(chunk) == 0 for f in polys], axis=1)
        if weights is not None:
            realized.update(np.unique(vanish.astype(np.int64) @ weights).tolist())
        else:
            realized.update(tuple(row) for row in vanish.tolist())

    def render(code) -> str:
        flags = [(code >> i) & 1 for i in range(m)] if isinstance(code, int) else list(code)
        return "".join("0" if flag else "*" for flag in flags)

    patterns = sorted(render(code) for code in realized)
    bound = binomial(m * d + nvars, nvars)
    return ZeroPatternReport(patterns=patterns, count=len(patterns), bound=bound, holds=len(patterns) <= bound, points=total)


# ---------------------------------------------------------------------------
# set families and shatter functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SetFamily:
    """Members as rows of a boolean incidence matrix over a base of `base_size` elements."""

    incidence: np.ndarray
    base_labels: tuple = ()

    @classmethod
    def from_sets(cls, base_size: int, members: Sequence[Sequence[int]]) -> "SetFamily":
        incidence = np.zeros((len(members), base_size), dtype=bool)
        for row, member in enumerate(members):
            incidence[row, list(member)] = True
        return cls(incidence)

    @classmethod
    def neighborhoods(cls, H: EdgeStore, budget: int = DEFAULT_TUPLE_BUDGET) -> "SetFamily":
        """
        {N(v)} over the base V (graphs) or the unordered (r-1)-subsets of V (hypergraphs).
        """
        if H.r == 2:
            return cls(np.array(H.table, dtype=bool).copy())
        base_size = binomial(H.N, H.r - 1)
        if base_size * H.N > budget:
            raise BudgetExceeded(
                f"neighborhood family needs {base_size} base sets per vertex", needed=base_size * H.N, budget=budget
            )
        base = list(itertools.combinations(range(H.N), H.r - 1))
        position = {s: i for i, s in enumerate(base)}
        incidence = np.zeros((H.N, base_size), dtype=bool)
        for edge in H.edges():
            for v in edge:
                rest = tuple(u for u in edge if u != v)
                incidence[v, position[rest]] = True
        return cls(incidence, tuple(base))

    @property
    def base_size(self) -> int:
        return self.incidence.shape[1]

    def __len__(self) -> int:
        return self.incidence.shape[0]

    def member(self, index: int) -> set[int]:
        return {int(u) for u in np.flatnonzero(self.incidence[index])}

    def masks(self) -> list[int]:
        return [mask_from_bools(row) for row in self.incidence]

    def subfamily(self, indices: Sequence[int]) -> "SetFamily":
        return SetFamily(self.incidence[list(indices)], self.base_labels)


def shatter_function(
    F: SetFamily, z: int, budget: int = DEFAULT_SHATTER_BUDGET, max_z: int = DEFAULT_MAX_Z
) -> int:
    """
    pi_F(z): the largest number of distinct traces of F on a z-subset of the base.

    Raises:
        BudgetExceeded: z above `max_z` or C(base, z) above the budget.
    """
    if not 0 <= z <= F.base_size:
        raise BadParameters(f"z = {z} outside [0, {F.base_size}]")
    if z > max_z:
        raise BudgetExceeded(f"shatter function capped at z <= {max_z}", needed=z, budget=max_z)
    subsets = binomial(F.base_size, z)
    if subsets > budget:
        raise BudgetExceeded(f"{subsets} subsets of size {z}", needed=subsets, budget=budget)
    if not len(F):
        return 0
    if z == 0:
        return 1
    weights = np.array([1 << i for i in range(z)], dtype=np.int64)
    best = 0
    combos = itertools.combinations(range(F.base_size), z)
    while True:
        batch = list(itertools.islice(combos, SUBSET_BATCH))
        if not batch:
            break
        columns = np.array(batch, dtype=np.int64)
        # (members, batch, z) -> trace codes (members, batch)
        codes = F.incidence[:, columns].astype(np.int64) @ weights
        codes.sort(axis=0)
        distinct = 1 + (np.diff(codes, axis=0) != 0).sum(axis=0)
        best = max(best, int(distinct.max()))
        if best == 1 << z:
            break
    return best


class WeakVCRow(CamelModel):
    z: int
    pi: int
    bound: int
    holds: bool


class WeakVCReport(CamelModel):
    instance: str = Field(..., description="Instance name.")
    base_size: int = Field(..., description="Size of the base set.")
    rows: list[WeakVCRow] = Field(default_factory=list, description="One row per z.")


def weak_vc_report(
    inst: AlgebraicInstance,
    z_max: int,
    H: EdgeStore | None = None,
    budget: int = DEFAULT_SHATTER_BUDGET,
) -> WeakVCReport:
    """Exact pi(z) of the neighborhood family against C(zmd + n, n) for z = 1..z_max."""
    H = as_store(inst) if H is None else H
    family = SetFamily.neighborhoods(H)
    rows = []
    for z in range(1, min(z_max, family.base_size) + 1):
        pi = shatter_function(family, z, budget=budget, max_z=max(z_max, DEFAULT_MAX_Z))
        bound = binomial(z * inst.m * inst.d + inst.n, inst.n)
        rows.append(WeakVCRow(z=z, pi=pi, bound=bound, holds=pi <= bound))
    return WeakVCReport(instance=inst.name, base_size=family.base_size, rows=rows)


def separated_packing(F: SetFamily, delta) -> list[int]:
    """
    Greedy maximal delta-separated subfamily, scanning members in index order.

    Returns:
        list[int]: Indices of the chosen members; every pair differs in >= delta * base elements.
    """
    delta = parse_fraction(delta)
    if not 0 < delta <= 1:
        raise BadParameters(f"delta must lie in (0, 1], got {delta}")
    threshold_num, threshold_den = delta.numerator * F.base_size, delta.denominator
    chosen: list[int] = []
    for index in range(len(F)):
        if chosen:
            differences = (F.incidence[chosen] != F.incidence[index]).sum(axis=1)
            if np.any(differences * threshold_den < threshold_num):
                continue
        chosen.append(index)
    return chosen


# ---------------------------------------------------------------------------
# forbidden patterns
# ---------------------------------------------------------------------------


Status = Literal["found", "exhausted", "budget"]


class MRow(CamelModel):
    u: list[int] = Field(..., description="The r-1 vertices off the apex coordinate, in position order.")
    z: int = Field(..., description="Apex vertex at coordinate k.")


class MWitness(CamelModel):
    """Staircase: X_{i,i} edges, X_{i,j} non-edges for i < j."""

    k: int = Field(..., description="Apex coordinate (0-based).")
    rows: list[MRow]

    def tuple_of(self, i: int, j: int) -> tuple[int, ...]:
        u = list(self.rows[i].u)
        u.insert(self.k, self.rows[j].z)
        return tuple(u)

    def violation(self, has: Callable[[Sequence[int]], bool]) -> tuple[int, ...] | None:
        """First tuple contradicting the staircase under `has`, or None."""
        for i in range(len(self.rows)):
            if not has(self.tuple_of(i, i)):
                return self.tuple_of(i, i)
        for i, j in itertools.combinations(range(len(self.rows)), 2):
            tup = self.tuple_of(i, j)
            if len(set(tup)) != len(tup) or has(tup):
                return tup
        return None


class NWitness(CamelModel):
    """s disjoint labeled edges whose distinct-row transversals are all non-edges."""

    edges: list[list[int]]

    def transversals(self) -> list[tuple[int, ...]]:
        r = len(self.edges[0]) if self.edges else 0
        return [
            tuple(self.edges[row][position] for position, row in enumerate(rows))
            for rows in itertools.permutations(range(len(self.edges)), r)
        ]

    def violation(self, has: Callable[[Sequence[int]], bool]) -> tuple[int, ...] | None:
        used = [v for edge in self.edges for v in edge]
        if len(set(used)) != len(used):
            return tuple(used)
        for edge in self.edges:
            if not has(edge):
                return tuple(edge)
        for tup in self.transversals():
            if has(tup):
                return tup
        return None


class FocusedWitness(CamelModel):
    """Staircase whose apexes share part `part` and whose rows are transversal across parts."""

    part: int
    rows: list[MRow]

    def as_m_witness(self) -> MWitness:
        k = len(self.rows[0].u) if self.rows else 0
        return MWitness(k=k, rows=self.rows)


class SearchOutcome(CamelModel):
    status: Status
    witness: MWitness | NWitness | FocusedWitness | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


class _Budget(Exception):
    pass


def _staircase(
    apexes: int,
    candidates: dict[int, list[tuple[tuple[int, ...], int, int]]],
    s: int,
    budget: int,
) -> tuple[Status, list[tuple[tuple[int, ...], int]] | None, int]:
    """
    Depth-first search for rows (U_i, z_i), i = 1..s.

    `candidates[z]` lists (U, edge mask of U, vertex mask of U) with (U, z) an edge. Choosing row i
    restricts later apexes to vertices outside U_i that do not complete U_i to an edge.
    """
    nodes = 0
    rows: list[tuple[tuple[int, ...], int]] = []

    def extend(allowed: int) -> bool:
        nonlocal nodes
        if len(rows) == s:
            return True
        if popcount(allowed) < s - len(rows):
            return False
        for z in bits(allowed):
            for u, edge_mask, vertex_mask in candidates.get(z, ()):
                nodes += 1
                if nodes > budget:
                    raise _Budget
                rows.append((u, z))
                if extend(allowed & ~edge_mask & ~vertex_mask & ~(1 << z)):
                    return True
                rows.pop()
        return False

    try:
        found = extend(apexes)
    except _Budget:
        return "budget", None, nodes
    return ("found", list(rows), nodes) if found else ("exhausted", None, nodes)


def _directed_candidates(store: EdgeStore, k: int) -> dict[int, list]:
    """Per apex z: ordered (r-1)-tuples U of distinct vertices with U + z at position k an edge."""
    r, N = store.r, store.N
    candidates: dict[int, list] = {}
    for u in itertools.permutations(range(N), r - 1):
        if store.table is not None:
            index = list(u)
            index.insert(k, slice(None))
            flags = np.array(store.table[tuple(index)], dtype=bool)
        else:
            flags = np.zeros(N, dtype=bool)
            for z in range(N):
                tup = list(u)
                tup.insert(k, z)
                flags[z] = store.has(tup)
        if not flags.any():
            continue
        edge_mask, vertex_mask = mask_from_bools(flags), mask_of(u)
        for z in bits(edge_mask & ~vertex_mask):
            candidates.setdefault(z, []).append((u, edge_mask, vertex_mask))
    return candidates


def find_M_member(diH, r: int, s: int, k: int, budget: int = DEFAULT_SEARCH_BUDGET) -> SearchOutcome:
    """
    Search a dihypergraph for a member of M(r, s, k).

    Args:
        diH: Directed EdgeStore or polynomial oracle.
        r: Uniformity.
        s: Number of rows.
        k: Apex coordinate, 0-based.
        budget: Cap on explored partial assignments.

    Returns:
        SearchOutcome: "found" with a verified MWitness, "exhausted", or "budget".
    """
    store = as_store(diH)
    if store.r != r:
        raise ArityMismatch(f"store is {store.r}-uniform, expected {r}")
    if not 0 <= k < r:
        raise BadParameters(f"k = {k} outside [0, {r - 1}]")
    if s < 1:
        raise BadParameters("s must be positive")
    candidates = _directed_candidates(store, k)
    status, rows, nodes = _staircase(mask_of(range(store.N)), candidates, s, budget)
    if status != "found":
        return SearchOutcome(status=status, nodes=nodes)
    witness = MWitness(k=k, rows=[MRow(u=list(u), z=z) for u, z in rows])
    if witness.violation(store.has) is not None:
        raise AssertionError(f"staircase search returned an invalid witness {witness}")
    return SearchOutcome(status="found", witness=witness, nodes=nodes)


def find_N_member(H, r: int, s: int, budget: int = DEFAULT_SEARCH_BUDGET) -> SearchOutcome:
    """
    Search an undirected hypergraph for a member of N_{r,s}.

    Rows are edges in increasing lexicographic order; the first row keeps its sorted labeling.
    """
    store = as_store(H)
    if store.directed:
        raise BadParameters("find_N_member expects an undirected store")
    if store.r != r:
        raise ArityMismatch(f"store is {store.r}-uniform, expected {r}")
    edges = store.edges()
    labelings = list(itertools.permutations(range(r)))
    rows: list[tuple[int, ...]] = []
    nodes = 0

    def consistent() -> bool:
        last = len(rows) - 1
        for chosen in itertools.permutations(range(len(rows)), r):
            if last not in chosen:
                continue
            if store.has(tuple(rows[row][position] for position, row in enumerate(chosen))):
                return False
        return True

    def extend(start: int, used: int) -> bool:
        nonlocal nodes
        if len(rows) == s:
            return True
        if len(edges) - start < s - len(rows):
            return False
        if store.N - popcount(used) < r * (s - len(rows)):
            return False
        for index in range(start, len(edges)):
            edge = edges[index]
            edge_mask = mask_of(edge)
            if edge_mask & used:
                continue
            for order in labelings if rows else labelings[:1]:
                nodes += 1
                if nodes > budget:
                    raise _Budget
                rows.append(tuple(edge[i] for i in order))
                if consistent() and extend(index + 1, used | edge_mask):
                    return True
                rows.pop()
        return False

    try:
        found = extend(0, 0)
    except _Budget:
        return SearchOutcome(status="budget", nodes=nodes)
    if not found:
        return SearchOutcome(status="exhausted", nodes=nodes)
    witness = NWitness(edges=[list(row) for row in rows])
    if witness.violation(store.has) is not None:
        raise AssertionError(f"N-pattern search returned an invalid witness {witness}")
    return SearchOutcome(status="found", witness=witness, nodes=nodes)


def find_focused_M(
    H, parts: Sequence[Sequence[int]], r: int, s: int, budget: int = DEFAULT_SEARCH_BUDGET
) -> SearchOutcome:
    """
    Search for a focused copy of a member of M(r, s) with respect to disjoint parts.

    Apexes z_1..z_s lie in one part; each U_i + z_i meets r distinct parts.
    """
    store = as_store(H)
    if store.directed:
        raise BadParameters("find_focused_M expects an undirected store")
    if store.r != r:
        raise ArityMismatch(f"store is {store.r}-uniform, expected {r}")
    part_of: dict[int, int] = {}
    for index, part in enumerate(parts):
        for v in part:
            if v in part_of:
                raise OverlappingParts(f"vertex {v} lies in parts {part_of[v]} and {index}")
            part_of[int(v)] = index
    nodes = 0
    for apex_part, apexes in enumerate(parts):
        others = [i for i in range(len(parts)) if i != apex_part]
        candidates: dict[int, list] = {}
        for chosen_parts in itertools.combinations(others, r - 1):
            for u in itertools.product(*(sorted(parts[i]) for i in chosen_parts)):
                u = tuple(sorted(u))
                flags = np.zeros(store.N, dtype=bool)
                for z in apexes:
                    flags[z] = store.has(u + (z,))
                if not flags.any():
                    continue
                edge_mask, vertex_mask = mask_from_bools(flags), mask_of(u)
                for z in bits(edge_mask):
                    candidates.setdefault(z, []).append((u, edge_mask, vertex_mask))
        for z in candidates:
            candidates[z].sort(key=lambda entry: entry[0])
        status, rows, used = _staircase(mask_of(apexes), candidates, s, budget - nodes)
        nodes += used
        if status == "budget":
            return SearchOutcome(status="budget", nodes=nodes)
        if status == "found":
            witness = FocusedWitness(part=apex_part, rows=[MRow(u=list(u), z=z) for u, z in rows])
            if witness.as_m_witness().violation(store.has) is not None:
                raise AssertionError(f"focused search returned an invalid witness {witness}")
            return SearchOutcome(status="found", witness=witness, nodes=nodes)
    return SearchOutcome(status="exhausted", nodes=nodes)


def packing_trend(families: Sequence[SetFamily], delta) -> list[tuple[int, int]]:
    """(base size, packing size) per family, for growth comparisons across instance sizes."""
    delta = parse_fraction(delta)
    return [(F.base_size, len(separated_packing(F, delta))) for F in families]
