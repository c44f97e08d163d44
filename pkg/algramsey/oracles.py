"""Exact ground truth: maximum cliques, independent sets and bi-cliques, and witness re-verification."""

import itertools
from fractions import Fraction
from typing import Literal, Sequence

from pydantic import Field

from algramsey.algebra import poly_eval
from algramsey.config import CamelModel, Rational
from algramsey.errors import ArityMismatch, BadParameters, BudgetExceeded, InternalInconsistency
from algramsey.hypergraph import AlgebraicInstance, EdgeStore, as_store, edge_query
from algramsey.patterns import FocusedWitness, MWitness, NWitness
from algramsey.utils import DEFAULT_SEARCH_BUDGET, bits, mask_of, popcount

GRAPH_CLIQUE_LIMIT = 64
HYPER_CLIQUE_LIMIT = 30
BICLIQUE_LIMIT = 36


class ExactClique(CamelModel):
    size: int = Field(..., description="Clique (or independence) number.")
    witness: list[int] = Field(..., description="Lexicographically first optimal vertex set.")
    nodes: int = Field(0, description="Search nodes used across both enumeration orders.")


class ExactBiclique(CamelModel):
    t: int = Field(..., description="Largest balanced bi-clique side.")
    a: list[int] = Field(default_factory=list, description="Side containing the smaller minimum.")
    b: list[int] = Field(default_factory=list, description="Opposite side.")
    nodes: int = 0


class _Exhausted(Exception):
    pass


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Exhausted


def _check_limit(N: int, limit: int, what: str) -> None:
    if N > limit:
        raise BudgetExceeded(f"{what} is exact only up to {limit} vertices, got {N}", needed=N, budget=limit)


def _color_bound(candidates: int, adjacency: Sequence[int]) -> int:
    """Number of greedy color classes covering `candidates`; bounds any clique inside it."""
    colors = 0
    uncolored = candidates
    while uncolored:
        colors += 1
        available = uncolored
        while available:
            v = (available & -available).bit_length() - 1
            available &= ~adjacency[v] & ~(1 << v)
            uncolored &= ~(1 << v)
    return colors


def _graph_clique(adjacency: Sequence[int], counter: _Counter) -> list[int]:
    best: list[int] = []

    def search(chosen: list[int], candidates: int):
        nonlocal best
        counter.tick()
        if len(chosen) > len(best):
            best = list(chosen)
        if not candidates or len(chosen) + popcount(candidates) <= len(best):
            return
        if len(chosen) + _color_bound(candidates, adjacency) <= len(best):
            return
        for v in bits(candidates):
            later = candidates & ~((1 << (v + 1)) - 1)
            search(chosen + [v], later & adjacency[v])
            if len(chosen) + popcount(later) <= len(best):
                break

    search([], mask_of(range(len(adjacency))))
    return best


def _hyper_clique(store: EdgeStore, counter: _Counter) -> list[int]:
    r = store.r
    best: list[int] = []

    def search(chosen: list[int], candidates: int):
        nonlocal best
        counter.tick()
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) + popcount(candidates) <= len(best):
            return
        for v in bits(candidates):
            later = candidates & ~((1 << (v + 1)) - 1)
            keep = 0
            for w in bits(later):
                if all(store.has(rest + (v, w)) for rest in itertools.combinations(chosen, r - 2)):
                    keep |= 1 << w
            search(chosen + [v], keep)
            if len(chosen) + popcount(later) <= len(best):
                break

    search([], mask_of(range(store.N)))
    return best


def _clique_in_order(store: EdgeStore, order: list[int], counter: _Counter) -> list[int]:
    """Maximum clique after relabeling vertex order[i] as i; result mapped back and sorted."""
    relabeled = store.induced(order)
    if store.r == 2:
        local = _graph_clique(relabeled.adjacency_masks(), counter)
    else:
        local = _hyper_clique(relabeled, counter)
    return sorted(order[i] for i in local)


def max_clique_exact(H, budget: int = DEFAULT_SEARCH_BUDGET, vertex_limit: int | None = None) -> ExactClique:
    """
    Exact maximum clique by branch and bound, cross-checked in a second vertex order.

    Graphs use bitset search with a greedy-coloring bound (up to 64 vertices); hypergraphs extend
    cliques one vertex at a time, keeping only candidates that complete every (r-1)-subset (up to
    30 vertices).

    Raises:
        BudgetExceeded: Too many vertices, or the node budget ran out.
        InternalInconsistency: The two enumeration orders disagree.
    """
    store = as_store(H)
    if store.directed:
        raise BadParameters("max_clique_exact expects an undirected store")
    if store.r == 1:
        witness = [v for v in range(store.N) if store.has((v,))]
        return ExactClique(size=len(witness), witness=witness)
    limit = vertex_limit or (GRAPH_CLIQUE_LIMIT if store.r == 2 else HYPER_CLIQUE_LIMIT)
    _check_limit(store.N, limit, "max_clique_exact")
    counter = _Counter(budget)
    try:
        ascending = _clique_in_order(store, list(range(store.N)), counter)
        descending = _clique_in_order(store, list(range(store.N - 1, -1, -1)), counter)
    except _Exhausted:
        raise BudgetExceeded(
            f"clique search exceeded {budget} nodes", needed=counter.nodes, budget=budget
        ) from None
    if len(ascending) != len(descending):
        raise InternalInconsistency(
            f"clique orders disagree: {len(ascending)} ascending vs {len(descending)} descending"
        )
    return ExactClique(size=len(ascending), witness=ascending, nodes=counter.nodes)


def max_independent_exact(H, budget: int = DEFAULT_SEARCH_BUDGET, vertex_limit: int | None = None) -> ExactClique:
    """Exact independence number as the clique number of the complement."""
    store = as_store(H)
    return max_clique_exact(store.complement(), budget=budget, vertex_limit=vertex_limit)


def max_balanced_biclique_exact(
    G, budget: int = DEFAULT_SEARCH_BUDGET, vertex_limit: int = BICLIQUE_LIMIT
) -> ExactBiclique:
    """
    Largest t with disjoint |A| = |B| = t and every A-B pair adjacent.

    Depth-first over A in increasing order; C is the common neighborhood of A above min(A), so
    min(A) < min(B) breaks the A/B symmetry. A branch is cut once min(|A| + remaining, |C|) <= best.
    """
    store = as_store(G)
    if store.r != 2 or store.directed:
        raise ArityMismatch("bi-cliques are defined for undirected graphs")
    _check_limit(store.N, vertex_limit, "max_balanced_biclique_exact")
    adjacency = store.adjacency_masks()
    counter = _Counter(budget)
    best = (0, [], [])

    def search(chosen: list[int], common: int, remaining: int):
        nonlocal best
        counter.tick()
        t = min(len(chosen), popcount(common))
        if t > best[0]:
            best = (t, chosen[:t], list(bits(common))[:t])
        if min(len(chosen) + popcount(remaining), popcount(common)) <= best[0]:
            return
        for v in bits(remaining):
            later = remaining & ~((1 << (v + 1)) - 1)
            search(chosen + [v], common & adjacency[v] & ~(1 << v), later)
            if min(len(chosen) + popcount(later), popcount(common)) <= best[0]:
                break

    try:
        for first in range(store.N):
            above = ~((1 << (first + 1)) - 1)
            common = adjacency[first] & above
            if min(store.N - first, popcount(common)) <= best[0]:
                continue
            search([first], common, mask_of(range(first + 1, store.N)))
    except _Exhausted:
        raise BudgetExceeded(
            f"bi-clique search exceeded {budget} nodes", needed=counter.nodes, budget=budget
        ) from None
    t, a, b = best
    return ExactBiclique(t=t, a=a, b=b, nodes=counter.nodes)


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------


WitnessKind = Literal[
    "clique",
    "independentSet",
    "biclique",
    "wellDirected",
    "partition",
    "mPattern",
    "nPattern",
    "focused",
    "monochromatic",
]


class Witness(CamelModel):
    """A claimed structure in an instance, re-checkable from the raw edge oracle."""

    kind: WitnessKind
    vertices: list[int] = Field(default_factory=list, description="Clique, independent or monochromatic set.")
    parts: list[list[int]] = Field(
        default_factory=list, description="(A, B) for bi-cliques and well-directed pairs; parts of a partition."
    )
    poly: int | None = Field(None, description="1-based polynomial index of a directed claim.")
    direction: Literal["AtoB", "BtoA"] | None = Field(None, description="Direction of every A-B edge.")
    pattern: list[int] | None = Field(None, description="1-based set I of nonvanishing polynomials.")
    epsilon: Rational | None = Field(None, description="Homogeneity threshold of a partition claim.")
    counts: dict[str, int] | None = Field(None, description='Claimed tuple classes: "empty", "dense", "bad".')
    equitable: bool = Field(False, description="Partition claims equal sizes up to 1.")
    m_pattern: MWitness | None = None
    n_pattern: NWitness | None = None
    focused: FocusedWitness | None = None


class VerificationResult(CamelModel):
    ok: bool
    detail: str = ""
    counterexample: list[int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _fail(detail: str, tup: Sequence[int] | None = None) -> VerificationResult:
    return VerificationResult(ok=False, detail=detail, counterexample=list(tup) if tup is not None else None)


def _pattern_of(inst: AlgebraicInstance, tup: Sequence[int]) -> set[int]:
    point = [x for v in tup for x in inst.coordinates(v)]
    return {i for i, poly in enumerate(inst.polys, start=1) if poly_eval(poly, point) != 0}


def _poly_has(inst: AlgebraicInstance, index: int):
    poly = inst.polys[index - 1]

    def has(tup: Sequence[int]) -> bool:
        if len(set(tup)) != len(tup):
            return False
        return poly_eval(poly, [x for v in tup for x in inst.coordinates(v)]) != 0

    return has


def _edge_has(inst: AlgebraicInstance):
    def has(tup: Sequence[int]) -> bool:
        if len(set(tup)) != len(tup):
            return False
        return edge_query(inst, tup)

    return has


def _check_homogeneous(inst, vertices, want: bool) -> VerificationResult:
    if len(set(vertices)) != len(vertices):
        return _fail("vertex set repeats a vertex", vertices)
    for tup in itertools.combinations(sorted(vertices), inst.r):
        if edge_query(inst, tup) != want:
            return _fail(f"{'non-edge' if want else 'edge'} inside the claimed set", tup)
    return VerificationResult(ok=True, detail=f"{len(vertices)} vertices")


def _check_biclique(inst, w: Witness) -> VerificationResult:
    if inst.r != 2 or len(w.parts) != 2:
        return _fail("bi-clique claims need a graph and two parts")
    a, b = w.parts
    if len(a) != len(b):
        return _fail(f"sides have sizes {len(a)} and {len(b)}")
    if set(a) & set(b):
        return _fail("sides overlap", sorted(set(a) & set(b)))
    for u, v in itertools.product(a, b):
        if not edge_query(inst, (u, v)):
            return _fail("missing cross edge", (u, v))
    return VerificationResult(ok=True, detail=f"t = {len(a)}")


def _check_well_directed(inst, w: Witness) -> VerificationResult:
    if inst.r != 2 or len(w.parts) != 2 or w.poly is None or w.direction is None:
        return _fail("well-directed claims need a graph, two parts, a polynomial and a direction")
    if not 1 <= w.poly <= inst.m:
        return _fail(f"polynomial {w.poly} outside [1, {inst.m}]")
    a, b = w.parts
    if set(a) & set(b):
        return _fail("sides overlap", sorted(set(a) & set(b)))
    has = _poly_has(inst, w.poly)
    for u, v in itertools.product(a, b):
        backward = (v, u) if w.direction == "AtoB" else (u, v)
        if has(backward):
            return _fail("cross edge against the claimed direction", backward)
    return VerificationResult(ok=True, detail=f"|A| = {len(a)}, |B| = {len(b)}")


def _check_monochromatic(inst, w: Witness) -> VerificationResult:
    if inst.r != 2 or w.pattern is None:
        return _fail("monochromatic claims need a graph and a pattern")
    pattern = set(w.pattern)
    if len(set(w.vertices)) != len(w.vertices):
        return _fail("vertex set repeats a vertex", w.vertices)
    for u, v in itertools.permutations(w.vertices, 2):
        if _pattern_of(inst, (u, v)) != pattern:
            return _fail(f"pair realizes {sorted(_pattern_of(inst, (u, v)))} instead of {sorted(pattern)}", (u, v))
    return VerificationResult(ok=True, detail=f"{len(w.vertices)} vertices on pattern {sorted(pattern)}")


def _check_partition(inst, w: Witness) -> VerificationResult:
    parts = [sorted(part) for part in w.parts]
    covered = sorted(v for part in parts for v in part)
    if covered != list(range(inst.N)):
        return _fail("parts do not partition the vertex set")
    if any(not part for part in parts):
        return _fail("empty part")
    sizes = [len(part) for part in parts]
    if w.equitable and max(sizes) - min(sizes) > 1:
        return _fail(f"part sizes range from {min(sizes)} to {max(sizes)}")
    if w.epsilon is None or w.counts is None:
        return VerificationResult(ok=True, detail=f"{len(parts)} parts")
    recount = {"empty": 0, "dense": 0, "bad": 0}
    for chosen in itertools.combinations(range(len(parts)), inst.r):
        edges = sum(1 for tup in itertools.product(*(parts[i] for i in chosen)) if edge_query(inst, tup))
        possible = 1
        for i in chosen:
            possible *= len(parts[i])
        if edges == 0:
            recount["empty"] += 1
        elif Fraction(edges, possible) >= 1 - w.epsilon:
            recount["dense"] += 1
        else:
            recount["bad"] += 1
    for key, value in recount.items():
        if w.counts.get(key) != value:
            return _fail(f"{key} tuples: claimed {w.counts.get(key)}, recounted {value}")
    return VerificationResult(ok=True, detail=f"{len(parts)} parts, {recount['bad']} bad tuples")


def _check_focused(inst, w: Witness) -> VerificationResult:
    focused = w.focused
    if focused is None or not w.parts:
        return _fail("focused claims need the witness and the parts")
    part_of = {v: index for index, part in enumerate(w.parts) for v in part}
    for row in focused.rows:
        if part_of.get(row.z) != focused.part:
            return _fail(f"apex {row.z} is outside part {focused.part}", [row.z])
        touched = [part_of.get(v) for v in row.u + [row.z]]
        if None in touched or len(set(touched)) != len(touched):
            return _fail("row does not meet distinct parts", row.u + [row.z])
    bad = focused.as_m_witness().violation(_edge_has(inst))
    if bad is not None:
        return _fail("staircase violated", bad)
    return VerificationResult(ok=True, detail=f"{len(focused.rows)} rows in part {focused.part}")


def verify_witness(inst: AlgebraicInstance, w: Witness) -> VerificationResult:
    """
    Re-derive a claimed property from raw edge_query / polynomial evaluations only.

    Never raises on a false claim; the result carries the first counterexample tuple.
    """
    for v in w.vertices + [x for part in w.parts for x in part]:
        if not 0 <= v < inst.N:
            return _fail(f"vertex {v} outside [0, {inst.N - 1}]", [v])
    if w.kind == "clique":
        return _check_homogeneous(inst, w.vertices, True)
    if w.kind == "independentSet":
        return _check_homogeneous(inst, w.vertices, False)
    if w.kind == "biclique":
        return _check_biclique(inst, w)
    if w.kind == "wellDirected":
        return _check_well_directed(inst, w)
    if w.kind == "monochromatic":
        return _check_monochromatic(inst, w)
    if w.kind == "partition":
        return _check_partition(inst, w)
    if w.kind == "mPattern":
        if w.m_pattern is None or w.poly is None:
            return _fail("M-pattern claims need the staircase and a polynomial")
        bad = w.m_pattern.violation(_poly_has(inst, w.poly))
        return _fail("staircase violated", bad) if bad is not None else VerificationResult(ok=True)
    if w.kind == "nPattern":
        if w.n_pattern is None:
            return _fail("N-pattern claims need the edges")
        bad = w.n_pattern.violation(_edge_has(inst))
        return _fail("N-pattern violated", bad) if bad is not None else VerificationResult(ok=True)
    return _check_focused(inst, w)
