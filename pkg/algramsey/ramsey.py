"""Constructive extraction: dense cliques, homogeneous subsets, sparse and well-directed pairs, Ramsey loops."""

import functools
import itertools
import math
from dataclasses import replace
from fractions import Fraction
from typing import Literal, Mapping, Sequence

import numpy as np
from pydantic import Field

from algramsey.config import CamelModel, Rational
from algramsey.errors import (
    AlphaOutOfRange,
    ArityMismatch,
    BadParameters,
    DensityTooLow,
    EmptyHypergraph,
    InternalInconsistency,
    PostconditionFailed,
    StepBudgetExceeded,
    TooDense,
)
from algramsey.hypergraph import (
    STRONG_FORMULA,
    AlgebraicInstance,
    EdgeStore,
    PolyOracle,
    as_store,
    complete_part,
    edge_query,
    materialize,
    materialize_directed,
    neighborhood,
)
from algramsey.oracles import Witness, verify_witness
from algramsey.patterns import SetFamily, separated_packing
from algramsey.utils import DEFAULT_TUPLE_BUDGET, Observable, binomial, make_rng, parse_fraction

MAX_CLIQUE_RETRIES = 64
ALPHA_CAP = Fraction(1, 4)
ALPHA_DENOMINATOR = 1 << 20


# ---------------------------------------------------------------------------
# result models
# ---------------------------------------------------------------------------


class TraceStep(CamelModel):
    level: int = Field(..., description="Depth of the nested sequence U_0 > U_1 > ...")
    case: Literal[1, 2, 3]
    size: int = Field(..., description="|U_level|.")
    bookkeeping: list[int] = Field(default_factory=list, description="s_{l,i,k} (hypergraphs) or s_{l,i} (graphs).")
    jump_kind: Literal["small", "big", "n/a"] = "n/a"
    poly: int | None = Field(None, description="1-based polynomial driving a Case-3 step.")
    note: str = ""


class ExtractionTrace(CamelModel):
    steps: list[TraceStep] = Field(default_factory=list)
    rng_seed: int = 0
    notes: list[str] = Field(default_factory=list, description="Constant substitutions and bookkeeping events.")


class BoundContext(CamelModel):
    vertex_count: int
    gamma: int | None = Field(None, description="2r^2 m (C(n+d,d)+1) for hypergraph extraction.")
    gamma_prime: float | None = Field(None, description="16mn min{d, n log d / log n} for graph extraction.")
    alpha: Rational | None = Field(None, description="Density parameter actually used.")
    alpha_asymptotic: float | None = Field(None, description="Asymptotic value before the desk-scale cap.")
    beta: Rational | None = None
    target: float | None = Field(None, description="Size the asymptotic argument promises at this N.")


class RamseyResult(CamelModel):
    kind: Literal["clique", "independentSet", "monochromaticClique"]
    vertices: list[int]
    pattern: list[int] | None = Field(None, description="1-based set I of polynomials nonvanishing on every pair.")
    color: int | None = None
    achieved_size: int
    bound_context: BoundContext
    trace: ExtractionTrace
    verified: bool
    budget_exhausted: bool = Field(False, description="The Case-3 search ran out before a set of size >= 2 appeared.")


class CliqueExtraction(CamelModel):
    vertices: list[int]
    target: int = Field(..., description="ceil((1/4)(1/alpha)^(1/(r-1))), capped at N.")
    attempts: int
    below_bound: bool


class MedianDegree(CamelModel):
    fixed: list[int] = Field(..., description="The (r-1)-set X.")
    neighborhood: list[tuple[int, ...]]
    bound: Rational
    bound_ok: bool


class DirectedSplit(CamelModel):
    coordinate: int = Field(..., description="Free coordinate l (0-based).")
    fixed: list[int] = Field(..., description="The (r-1)-tuple Y filling the other coordinates in order.")
    neighborhood: list[int]
    bound: Rational
    bound_ok: bool
    route: Literal["complete", "escalation", "exhaustive"]


class HomogeneousSubset(CamelModel):
    vertices: list[int]
    final_case: Literal[1, 2]
    alpha: Rational
    alpha_asymptotic: float
    trace: ExtractionTrace


class SparsePair(CamelModel):
    a: list[int]
    b: list[int]
    center: int = Field(..., description="Net center z_0 whose ball gave B.")
    gamma: Rational


class WellDirectedPair(CamelModel):
    a: list[int]
    b: list[int]
    direction: Literal["AtoB", "BtoA"]
    beta: Rational
    beta_substituted: bool = Field(False, description="1/(4N) replaced the asymptotic beta.")
    rounds: int
    s: int | None = None


# ---------------------------------------------------------------------------
# cliques in dense hypergraphs
# ---------------------------------------------------------------------------


def _undirected(H) -> EdgeStore:
    store = as_store(H)
    if store.directed:
        raise BadParameters("expected an undirected store")
    return store


def _extend_clique(store: EdgeStore, clique: Sequence[int]) -> list[int]:
    """Grow a clique to a maximal one, trying vertices in index order."""
    chosen = sorted(clique)
    inside = set(chosen)
    for v in range(store.N):
        if v in inside:
            continue
        if all(store.has(rest + (v,)) for rest in itertools.combinations(chosen, store.r - 1)):
            chosen.append(v)
            inside.add(v)
    return sorted(chosen)


def _non_degrees(store: EdgeStore, vertices: list[int]) -> dict[int, int]:
    if store.r == 2 and store.table is not None:
        sub = store.table[np.ix_(vertices, vertices)]
        missing = (len(vertices) - 1) - sub.sum(axis=1)
        return {v: int(c) for v, c in zip(vertices, missing)}
    counts = dict.fromkeys(vertices, 0)
    for tup in itertools.combinations(vertices, store.r):
        if not store.has(tup):
            for v in tup:
                counts[v] += 1
    return counts


def _greedy_deletion(store: EdgeStore) -> list[int]:
    vertices = list(range(store.N))
    while vertices:
        counts = _non_degrees(store, vertices)
        worst = max(vertices, key=lambda v: (counts[v], -v))
        if counts[worst] == 0:
            break
        vertices.remove(worst)
    return _extend_clique(store, vertices)


def _clique_target(alpha: Fraction, r: int, N: int) -> int:
    if alpha <= 0:
        return N
    t = 1
    while t < N and Fraction(4 * t) ** (r - 1) * alpha < 1:
        t += 1
    return t


def _dense_clique_core(
    store: EdgeStore, alpha: Fraction, seed: int, labels: tuple = (), max_retries: int = MAX_CLIQUE_RETRIES
) -> CliqueExtraction:
    N, r = store.N, store.r
    if N == 0:
        return CliqueExtraction(vertices=[], target=0, attempts=0, below_bound=False)
    if r == 1:
        members = [v for v in range(N) if store.has((v,))]
        return CliqueExtraction(vertices=members, target=len(members), attempts=0, below_bound=False)
    target = _clique_target(alpha, r, N)
    q = 1.0 if alpha <= 0 else min(1.0, 1.0 / (2 * N * float(alpha) ** (1.0 / (r - 1))))
    best: list[int] = []
    attempts = 0
    for attempt in range(max_retries):
        attempts = attempt + 1
        rng = make_rng(seed, "dense_clique", *labels, attempt)
        sample = [int(v) for v in np.flatnonzero(rng.random(N) < q)]
        present = set(sample)
        for tup in itertools.combinations(sample, r):
            if all(v in present for v in tup) and not store.has(tup):
                present.discard(tup[0])
        clique = _extend_clique(store, sorted(present))
        if len(clique) > len(best):
            best = clique
        if len(best) >= target:
            return CliqueExtraction(vertices=best, target=target, attempts=attempts, below_bound=False)
        if q >= 1.0:
            # every vertex is sampled; further attempts repeat this one
            break
    fallback = _greedy_deletion(store)
    if len(fallback) > len(best):
        best = fallback
    return CliqueExtraction(vertices=best, target=target, attempts=attempts, below_bound=len(best) < target)


def dense_clique(H, alpha, seed: int = 0, max_retries: int = MAX_CLIQUE_RETRIES) -> CliqueExtraction:
    """
    Clique in a hypergraph of density at least 1 - alpha.

    Samples each vertex with probability (2 N alpha^(1/(r-1)))^-1, deletes the lowest vertex of every
    surviving non-edge, and retries with fresh randomness until the clique reaches
    ceil((1/4)(1/alpha)^(1/(r-1))). After `max_retries` it falls back to repeatedly deleting the
    vertex in most non-edges and returns the best clique seen, flagged `below_bound` when short.

    Raises:
        AlphaOutOfRange: alpha is outside (1/N^(r-1), 1/2).
        DensityTooLow: The density is below 1 - alpha.
    """
    store = _undirected(H)
    alpha = parse_fraction(alpha)
    N, r = store.N, store.r
    if r < 2 or N < r:
        raise BadParameters(f"dense_clique needs r >= 2 and N >= r, got r={r}, N={N}")
    if not Fraction(1, N ** (r - 1)) < alpha < Fraction(1, 2):
        raise AlphaOutOfRange(f"alpha = {alpha} outside (1/{N ** (r - 1)}, 1/2)")
    if store.density() < 1 - alpha:
        raise DensityTooLow(f"density {store.density()} is below 1 - alpha = {1 - alpha}")
    return _dense_clique_core(store, alpha, seed, (), max_retries)


# ---------------------------------------------------------------------------
# medium-degree sets
# ---------------------------------------------------------------------------


def _link(store: EdgeStore, u: int) -> EdgeStore:
    edges = [tuple(w for w in e if w != u) for e in store.edges() if u in e]
    return EdgeStore.from_edges(store.N, store.r - 1, edges)


def _median_set(store: EdgeStore) -> tuple[int, ...]:
    if store.r == 1:
        return ()
    degrees = store.degrees()
    positive = np.flatnonzero(degrees > 0)
    u = int(positive[np.argmin(degrees[positive])])
    return tuple(sorted(_median_set(_link(store, u)) + (u,)))


def _least_positive_set(store: EdgeStore) -> tuple[int, ...]:
    counts: dict[tuple[int, ...], int] = {}
    for e in store.edges():
        for X in itertools.combinations(e, store.r - 1):
            counts[X] = counts.get(X, 0) + 1
    return min(sorted(counts), key=lambda X: counts[X])


def med_degree_set(G, alpha, enforce_size: bool = True) -> MedianDegree:
    """
    (r-1)-set X with 1 <= |N(X)| <= (1 - alpha/2r) M.

    Follows the induction on r: take the lowest vertex u of least positive degree and recurse on
    its link. With `enforce_size` off (internal callers on small vertex sets) a miss falls through
    to an exhaustive search for the least positive co-degree and reports `bound_ok`.

    Raises:
        EmptyHypergraph: G has no edges.
        BadParameters: enforce_size and M < 100 r.
        TooDense: enforce_size and d(G) > 1 - alpha.
        PostconditionFailed: enforce_size and the induction misses the bound.
    """
    store = _undirected(G)
    alpha = parse_fraction(alpha)
    if store.is_empty():
        raise EmptyHypergraph("med_degree_set needs a nonempty hypergraph")
    M, r = store.N, store.r
    if enforce_size:
        if M < 100 * r:
            raise BadParameters(f"med_degree_set needs M >= 100r = {100 * r}, got {M}")
        if store.density() > 1 - alpha:
            raise TooDense(f"density {store.density()} exceeds 1 - alpha = {1 - alpha}")
    bound = (1 - alpha / (2 * r)) * M
    X = _median_set(store)
    found = sorted(neighborhood(store, X))
    if not 1 <= len(found) <= bound:
        if enforce_size:
            raise PostconditionFailed(f"|N({list(X)})| = {len(found)} outside [1, {bound}]")
        X = _least_positive_set(store)
        found = sorted(neighborhood(store, X))
    return MedianDegree(fixed=list(X), neighborhood=found, bound=bound, bound_ok=1 <= len(found) <= bound)


def _insert(Y: Sequence[int], position: int, z: int) -> tuple[int, ...]:
    tup = list(Y)
    tup.insert(position, z)
    return tuple(tup)


def _directed_neighbors(store: EdgeStore, Y: Sequence[int], position: int) -> list[int]:
    positions = [i for i in range(store.r) if i != position]
    return sorted(t[0] for t in neighborhood(store, Y, positions))


def _least_positive_split(store: EdgeStore) -> tuple[int, tuple[int, ...]]:
    counts: dict[tuple[int, tuple[int, ...]], int] = {}
    for e in store.edges():
        for position in range(store.r):
            key = (position, e[:position] + e[position + 1 :])
            counts[key] = counts.get(key, 0) + 1
    return min(sorted(counts), key=lambda key: counts[key])


def _escalate(store: EdgeStore, limit: Fraction) -> tuple[int, tuple[int, ...]] | None:
    """
    Grow edge families F_0, F_1, ... from one edge W_0 until some W and coordinate l in I_W have
    |N_l(W minus l)| <= limit. Returns None when the common neighborhood runs dry.
    """
    r = store.r
    W0 = store.edges()[0]
    level = [W0]
    used: list[int] = []
    for _ in range(r):
        common: set[int] | None = None
        for W in level:
            for position in range(r):
                if W[position] != W0[position]:
                    continue
                Y = W[:position] + W[position + 1 :]
                found = _directed_neighbors(store, Y, position)
                if len(found) <= limit:
                    return position, Y
                common = set(found) if common is None else common & set(found)
        common = (common or set()) - set(W0) - set(used)
        if not common:
            return None
        x = min(common)
        used.append(x)
        following: list[tuple[int, ...]] = []
        for W in level:
            for position in range(r):
                if W[position] == W0[position]:
                    replaced = W[:position] + (x,) + W[position + 1 :]
                    if replaced not in following:
                        following.append(replaced)
        level = following
    raise InternalInconsistency(f"every orientation of {sorted(used)} is an edge, yet [G] is empty")


def med_degree_dir(G, alpha, enforce_size: bool = True) -> DirectedSplit:
    """
    Coordinate l and (r-1)-tuple Y with 1 <= |N_l(Y)| <= (1 - alpha/(2r r!)) M.

    When [G] has edges the split comes from med_degree_set on [G] and the orientation of X that
    misses the most outside vertices. Otherwise the edge families are escalated with beta = 1/r!.
    """
    store = as_store(G)
    if not store.directed:
        raise BadParameters("med_degree_dir expects a directed store")
    alpha = parse_fraction(alpha)
    if store.is_empty():
        raise EmptyHypergraph("med_degree_dir needs a nonempty dihypergraph")
    M, r = store.N, store.r
    complete = complete_part(store)
    if enforce_size:
        if M < 100 * r:
            raise BadParameters(f"med_degree_dir needs M >= 100r = {100 * r}, got {M}")
        if complete.density() > 1 - alpha:
            raise TooDense(f"density of [G] is {complete.density()}, above 1 - alpha = {1 - alpha}")
    bound = (1 - alpha / (2 * r * math.factorial(r))) * M

    if not complete.is_empty():
        route = "complete"
        median = med_degree_set(complete, alpha, enforce_size=False)
        X = median.fixed
        inner = {t[0] for t in median.neighborhood}
        outside = [u for u in range(M) if u not in inner and u not in X]
        best = None
        for Y in itertools.permutations(X):
            for position in range(r):
                missed = sum(1 for u in outside if not store.has(_insert(Y, position, u)))
                if best is None or missed > best[0]:
                    best = (missed, Y, position)
        _, Y, position = best
    else:
        route = "escalation"
        split = _escalate(store, (1 - Fraction(1, math.factorial(r))) * M)
        if split is None:
            route = "exhaustive"
            split = _least_positive_split(store)
        position, Y = split

    found = _directed_neighbors(store, Y, position)
    bound_ok = 1 <= len(found) <= bound
    if not bound_ok and route != "exhaustive":
        position, Y = _least_positive_split(store)
        found = _directed_neighbors(store, Y, position)
        route = "exhaustive"
        bound_ok = 1 <= len(found) <= bound
    if enforce_size and not bound_ok:
        raise PostconditionFailed(f"|N_{position}({list(Y)})| = {len(found)} outside [1, {bound}]")
    return DirectedSplit(
        coordinate=position, fixed=list(Y), neighborhood=found, bound=bound, bound_ok=bound_ok, route=route
    )


# ---------------------------------------------------------------------------
# sparse and well-directed pairs (graphs)
# ---------------------------------------------------------------------------


def sparse_pair(G, alpha, beta) -> SparsePair:
    """
    Disjoint A, B with |A| >= alpha N / 4 and every b in B adjacent to at most beta |A| of A.

    B is the gamma-ball (gamma = alpha beta / 4) of the net center z_0 with the largest ball among
    low-degree vertices, trimmed to alpha N / 4; A is everything outside B and N(z_0).

    Raises:
        TooDense: d(G) > 1 - alpha.
        PostconditionFailed: A postcondition fails on the output.
    """
    store = _undirected(G)
    if store.r != 2:
        raise ArityMismatch("sparse_pair works on graphs")
    alpha, beta = parse_fraction(alpha), parse_fraction(beta)
    if not 0 < alpha < 1 or not 0 < beta <= 1:
        raise BadParameters(f"need 0 < alpha < 1 and 0 < beta <= 1, got {alpha}, {beta}")
    N = store.N
    if N < 2:
        raise BadParameters("sparse_pair needs at least two vertices")
    if store.density() > 1 - alpha:
        raise TooDense(f"density {store.density()} exceeds 1 - alpha = {1 - alpha}")
    degrees = store.degrees()
    low = [v for v in range(N) if int(degrees[v]) <= (1 - alpha / 2) * N]
    if not low:
        raise PostconditionFailed("no vertex has degree at most (1 - alpha/2) N")
    gamma = alpha * beta / 4
    family = SetFamily.neighborhoods(store).subfamily(low)
    centers = [low[j] for j in separated_packing(family, gamma)]
    incidence = store.table

    def ball(z: int) -> list[int]:
        differences = (incidence[low] != incidence[z]).sum(axis=1)
        return [v for v, diff in zip(low, differences.tolist()) if diff * gamma.denominator <= gamma.numerator * N]

    balls = {z: ball(z) for z in centers}
    z0 = min(centers, key=lambda z: (-len(balls[z]), int(degrees[z]), z))
    cap = max(1, math.floor(alpha * N / 4))
    B = sorted(balls[z0])[:cap]
    excluded = set(B) | {int(v) for v in np.flatnonzero(incidence[z0])}
    A = [v for v in range(N) if v not in excluded]

    if 4 * len(A) < alpha * N:
        raise PostconditionFailed(f"|A| = {len(A)} is below alpha N / 4 = {alpha * N / 4}")
    for b in B:
        inside = int(incidence[b, A].sum()) if A else 0
        if inside > beta * len(A):
            raise PostconditionFailed(f"vertex {b} has {inside} neighbors in A, above beta |A| = {beta * len(A)}")
    return SparsePair(a=A, b=B, center=z0, gamma=gamma)


def well_directed_pair(diG, alpha, seed: int = 0, s: int | None = None) -> WellDirectedPair:
    """
    Disjoint A, B of a digraph with every A-B edge running the same way.

    [G] comes from the squared polynomial f(x,y) f(y,x) when `diG` is a polynomial oracle and
    from the complete part of the store otherwise. sparse_pair on [G] gives (A_0, B_0); while some
    b in B_0 has both in- and out-neighbors in A, the side of its neighborhood covering at most
    2/3 of A is removed. B is the larger one-sided half of B_0.

    Raises:
        TooDense: d([G]) > 1 - alpha.
        StepBudgetExceeded: More than 2s elimination rounds.
    """
    alpha = parse_fraction(alpha)
    if isinstance(diG, PolyOracle):
        inst = diG.inst
        if inst.r != 2:
            raise ArityMismatch("well_directed_pair works on digraphs")
        squared = replace(
            inst, polys=(diG.poly.symmetric_square(),), formula=STRONG_FORMULA, m=1, d=2 * inst.d, name=f"[{inst.name}]"
        )
        both = materialize(squared)
        store = diG.materialize()
        if s is None:
            s = binomial(inst.n + 2 * inst.d, inst.n) + 1
    else:
        store = as_store(diG)
        if not store.directed or store.r != 2:
            raise ArityMismatch("well_directed_pair expects a directed graph store")
        both = complete_part(store)
    N = store.N
    if N < 2:
        raise BadParameters("well_directed_pair needs at least two vertices")
    if both.density() > 1 - alpha:
        raise TooDense(f"density of [G] is {both.density()}, above 1 - alpha = {1 - alpha}")

    floor_beta = Fraction(1, 4 * N)
    beta = floor_beta if s is None else max(Fraction(1, 6 * 3 ** (2 * s)), floor_beta)
    pair = sparse_pair(both, alpha, beta)
    A = list(pair.a)
    B0 = list(pair.b)
    table = store.table
    cap = 2 * s if s is not None else len(B0) + 1
    rounds = 0
    while True:
        kept = np.array(A, dtype=np.int64)
        chosen = None
        for b in B0:
            if len(kept) and table[b, kept].any() and table[kept, b].any():
                chosen = b
                break
        if chosen is None:
            break
        rounds += 1
        if rounds > cap:
            raise StepBudgetExceeded(
                f"well_directed_pair needed more than {cap} elimination rounds", partial=(A, B0), needed=rounds, budget=cap
            )
        out_side = {a for a in A if table[chosen, a]}
        in_side = {a for a in A if table[a, chosen]}
        if 3 * len(out_side) <= 2 * len(A):
            removed = out_side
        elif 3 * len(in_side) <= 2 * len(A):
            removed = in_side
        else:
            removed = out_side if len(out_side) <= len(in_side) else in_side
        A = [a for a in A if a not in removed]

    kept = np.array(A, dtype=np.int64)
    no_out = [b for b in B0 if not (len(kept) and table[b, kept].any())]
    no_in = [b for b in B0 if not (len(kept) and table[kept, b].any())]
    if len(no_out) >= len(no_in):
        B, direction = no_out, "AtoB"
    else:
        B, direction = no_in, "BtoA"
    if not A or not B:
        raise PostconditionFailed(f"well-directed pair came out with |A| = {len(A)}, |B| = {len(B)}")
    for a, b in itertools.product(A, B):
        backward = table[b, a] if direction == "AtoB" else table[a, b]
        if backward:
            raise PostconditionFailed(f"edge between {a} and {b} runs against {direction}")
    return WellDirectedPair(
        a=A, b=B, direction=direction, beta=beta, beta_substituted=beta == floor_beta, rounds=rounds, s=s
    )


# ---------------------------------------------------------------------------
# extraction loops
# ---------------------------------------------------------------------------


def _capped_alpha(value: float) -> Fraction:
    return min(Fraction(value).limit_denominator(ALPHA_DENOMINATOR), ALPHA_CAP)


def _log_ratio(n: int, d: int) -> float:
    """min{d, n log d / log n}, read as d when n = 1."""
    if n == 1:
        return float(d)
    return min(float(d), n * math.log(d) / math.log(n)) if d > 1 else 0.0


class _Exhausted(Exception):
    pass


class Extractor(Observable):
    """
    Runs the extraction loops and records their traces.

    Observers receive ("step", TraceStep JSON) at every level and ("result", summary) at the end.
    """

    def __init__(self, seed: int = 0):
        super().__init__()
        self.seed = seed
        self.trace = ExtractionTrace(rng_seed=seed)

    def _record(self, **fields) -> TraceStep:
        step = TraceStep(**fields)
        self.trace.steps.append(step)
        self._notify("step", step.model_dump(by_alias=True))
        return step

    def _note(self, note: str):
        self.trace.notes.append(note)
        self._notify("note", {"note": note})

    # -- hypergraphs -----------------------------------------------------------

    def homogeneous_subset(self, di_hypergraphs: Sequence, s_init=None) -> HomogeneousSubset:
        """
        U on which every H_i is a clique or empty.

        Args:
            di_hypergraphs: Directed stores or polynomial oracles on one vertex set.
            s_init: Int or {(i, k): int}; defaults to C(n+d, d) + 1 when oracles are given.

        Raises:
            StepBudgetExceeded: More than 2 r m s Case-3 steps; `partial` holds the current U.
        """
        self.trace = ExtractionTrace(rng_seed=self.seed)
        if not di_hypergraphs:
            raise BadParameters("homogeneous_subset needs at least one dihypergraph")
        if s_init is None:
            first = di_hypergraphs[0]
            if not isinstance(first, PolyOracle):
                raise BadParameters("s_init is required when stores are given")
            s_init = binomial(first.inst.n + first.inst.d, first.inst.d) + 1
        stores = [as_store(h) for h in di_hypergraphs]
        N, r, m = stores[0].N, stores[0].r, len(stores)
        for store in stores:
            if not store.directed or (store.N, store.r) != (N, r):
                raise ArityMismatch("dihypergraphs must be directed and share N and r")
        if isinstance(s_init, Mapping):
            s = {(i, k): int(s_init[(i, k)]) for i in range(m) for k in range(r)}
        else:
            s = {(i, k): int(s_init) for i in range(m) for k in range(r)}
        s_top = max(s.values())
        alpha_asymptotic = 2 * r * math.factorial(r) * N ** (-1 / (2 * r * m * s_top)) if N else 0.0
        alpha = _capped_alpha(alpha_asymptotic)
        if alpha != Fraction(alpha_asymptotic).limit_denominator(ALPHA_DENOMINATOR):
            self._note(f"alpha capped at {alpha} (asymptotic value {alpha_asymptotic:.4g})")
        cap = 2 * r * m * s_top

        U = list(range(N))
        level = 0
        while True:
            bookkeeping = [s[(i, k)] for i in range(m) for k in range(r)]
            sub = [store.induced(U) for store in stores]
            active = [i for i in range(m) if not sub[i].is_empty()]
            violated = [i + 1 for i in active if min(s[(i, k)] for k in range(r)) <= 1]
            note = f"bookkeeping exhausted for polynomials {violated}" if violated else ""
            if not active:
                self._record(level=level, case=1, size=len(U), bookkeeping=bookkeeping, note=note)
                return HomogeneousSubset(
                    vertices=U, final_case=1, alpha=alpha, alpha_asymptotic=alpha_asymptotic, trace=self.trace
                )
            completes = {i: complete_part(sub[i]) for i in active}
            sparse = [i for i in active if completes[i].density() < 1 - alpha]
            if not sparse:
                common = functools.reduce(EdgeStore.intersection, (completes[i] for i in active))
                clique = _dense_clique_core(common, alpha * len(active), self.seed, ("homogeneous", level))
                U = [U[v] for v in clique.vertices]
                self._record(level=level, case=2, size=len(U), bookkeeping=bookkeeping, note=note)
                return HomogeneousSubset(
                    vertices=U, final_case=2, alpha=alpha, alpha_asymptotic=alpha_asymptotic, trace=self.trace
                )
            if level >= cap:
                raise StepBudgetExceeded(
                    f"homogeneous_subset exceeded {cap} Case-3 steps", partial=U, needed=level + 1, budget=cap
                )
            i = sparse[0]
            split = med_degree_dir(sub[i], alpha, enforce_size=False)
            removed = {U[z] for z in split.neighborhood}
            self._record(
                level=level,
                case=3,
                size=len(U),
                bookkeeping=bookkeeping,
                poly=i + 1,
                note=note or f"removed N_{split.coordinate}({[U[y] for y in split.fixed]}) of size {len(removed)}",
            )
            U = [v for v in U if v not in removed]
            s[(i, split.coordinate)] -= 1
            level += 1

    def hypergraph_ramsey(self, inst: AlgebraicInstance, budget: int = DEFAULT_TUPLE_BUDGET) -> RamseyResult:
        """Clique or independent set of the instance from a subset homogeneous for every f_i."""
        stores = [materialize_directed(inst, i, budget) for i in range(inst.m)]
        s = binomial(inst.n + inst.d, inst.d) + 1
        found = self.homogeneous_subset(stores, s)
        U = found.vertices
        if len(U) >= inst.r and not edge_query(inst, U[: inst.r]):
            kind = "independentSet"
        else:
            kind = "clique"
        check = verify_witness(inst, Witness(kind=kind, vertices=U))
        if not check.ok:
            self._note(f"verification failed: {check.detail}")
        gamma = 2 * inst.r**2 * inst.m * s
        result = RamseyResult(
            kind=kind,
            vertices=U,
            achieved_size=len(U),
            bound_context=BoundContext(
                vertex_count=inst.N,
                gamma=gamma,
                alpha=found.alpha,
                alpha_asymptotic=found.alpha_asymptotic,
                target=inst.N ** (1 / gamma) if inst.N else 0.0,
            ),
            trace=self.trace,
            verified=check.ok,
        )
        self._notify("result", {"kind": kind, "size": len(U), "verified": check.ok})
        return result

    # -- graphs ----------------------------------------------------------------

    def graph_ramsey(self, inst: AlgebraicInstance, beta=Fraction(1, 2), budget: int = DEFAULT_TUPLE_BUDGET) -> RamseyResult:
        """
        Set U and pattern I such that every ordered pair in U has exactly the f_i, i in I, nonzero.

        Case 1 (no G_i has edges on U) and Case 2 (every nonempty [G_i] dense on U) end a branch.
        Case 3 splits U into a well-directed pair and tries the big jump (B, t = floor(s/sqrt n))
        before the small jump (A, u = s - t), depth first, under a Case-3 budget of
        4 (a_max + b_max). The first verified set of size >= 2 wins.
        """
        if inst.r != 2:
            raise BadParameters(f"graph_ramsey needs r = 2, got r = {inst.r}")
        beta = parse_fraction(beta)
        if not 0 < beta < 1:
            raise BadParameters(f"beta must lie in (0, 1), got {beta}")
        self.trace = ExtractionTrace(rng_seed=self.seed)
        self.inst = inst
        n, d, m, N = inst.n, inst.d, inst.m, inst.N
        ratio = _log_ratio(n, d)
        gamma_prime = 16 * m * n * ratio
        if gamma_prime > 0 and N > 1:
            alpha_asymptotic = N ** (-float(beta) / gamma_prime)
            alpha = _capped_alpha(alpha_asymptotic)
        else:
            alpha_asymptotic = 0.0
            alpha = Fraction(1, 4 * max(N, 1))
        if alpha != Fraction(alpha_asymptotic).limit_denominator(ALPHA_DENOMINATOR):
            self._note(f"alpha set to {alpha} (asymptotic value {alpha_asymptotic:.4g})")
        self.alpha = alpha
        a_max = max(1, math.ceil(2 * m * ratio))
        b_max = max(1, math.ceil(4 * math.sqrt(n) * m * min(d * math.log(n), n * math.log(d) if d > 1 else 0.0)))
        self.case3_budget = 4 * (a_max + b_max)
        self.case3_nodes = 0
        self.well_directed_s = binomial(n + 2 * d, n) + 1
        self.stores = [materialize_directed(inst, i, budget) for i in range(m)]
        self.best: tuple[list[int], list[int], int] = ([], [], 1)

        exhausted = False
        try:
            found = self._descend(list(range(N)), [binomial(n + d, d) + 1] * m, 0)
        except _Exhausted:
            found = None
            exhausted = True
            self._note(f"Case-3 budget of {self.case3_budget} nodes exhausted")
        if found is None:
            found = self._pair_fallback()
        U, pattern, case = found
        check = verify_witness(inst, Witness(kind="monochromatic", vertices=U, pattern=pattern))
        if case == 1:
            target = N ** (1 - float(beta))
        elif gamma_prime > 0:
            target = N ** (float(beta) / gamma_prime) / (4 * m)
        else:
            target = None
        result = RamseyResult(
            kind="monochromaticClique",
            vertices=U,
            pattern=pattern,
            achieved_size=len(U),
            bound_context=BoundContext(
                vertex_count=N,
                gamma_prime=gamma_prime,
                alpha=alpha,
                alpha_asymptotic=alpha_asymptotic,
                beta=beta,
                target=target,
            ),
            trace=self.trace,
            verified=check.ok,
            budget_exhausted=exhausted,
        )
        self._notify("result", {"pattern": pattern, "size": len(U), "verified": check.ok})
        return result

    def _leaf(self, U: list[int], pattern: list[int], case: int):
        check = verify_witness(self.inst, Witness(kind="monochromatic", vertices=U, pattern=pattern))
        if not check.ok:
            self._note(f"leaf on {U} failed verification: {check.detail}")
            return None
        if len(U) > len(self.best[0]):
            self.best = (U, pattern, case)
        return (U, pattern, case) if len(U) >= 2 else None

    def _descend(self, U: list[int], s: list[int], level: int):
        m = len(self.stores)
        sub = [store.induced(U) for store in self.stores]
        active = [i for i in range(m) if not sub[i].is_empty()]
        s = [s[i] if i in active else 1 for i in range(m)]
        violated = [i + 1 for i in active if s[i] <= 1]
        note = f"bookkeeping exhausted for polynomials {violated}" if violated else ""
        if not active:
            self._record(level=level, case=1, size=len(U), bookkeeping=s, note=note)
            return self._leaf(U, [], 1)
        completes = {i: complete_part(sub[i]) for i in active}
        sparse = [i for i in active if completes[i].density() < 1 - self.alpha]
        if not sparse:
            common = functools.reduce(EdgeStore.intersection, (completes[i] for i in active))
            clique = _dense_clique_core(common, self.alpha * len(active), self.seed, ("graph", level, len(U)))
            self._record(level=level, case=2, size=len(U), bookkeeping=s, note=note)
            return self._leaf([U[v] for v in clique.vertices], [i + 1 for i in active], 2)

        self.case3_nodes += 1
        if self.case3_nodes > self.case3_budget:
            raise _Exhausted
        i = sparse[0]
        try:
            pair = well_directed_pair(sub[i], self.alpha, seed=self.seed, s=self.well_directed_s)
        except (PostconditionFailed, TooDense, BadParameters, StepBudgetExceeded) as e:
            self._record(level=level, case=3, size=len(U), bookkeeping=s, poly=i + 1, note=f"dead branch: {e}")
            return None
        s_eff = max(s[i], 2)
        t = s_eff - 1 if self.inst.n == 1 else s_eff // math.isqrt(self.inst.n)
        t = min(max(t, 1), s_eff - 1)
        u = s_eff - t
        branches = (("big", [U[v] for v in pair.b], t), ("small", [U[v] for v in pair.a], u))
        for jump, part, budget in branches:
            self._record(level=level, case=3, size=len(U), bookkeeping=s, jump_kind=jump, poly=i + 1, note=note)
            following = list(s)
            following[i] = budget
            found = self._descend(part, following, level + 1)
            if found is not None:
                return found
        return None

    def _pair_fallback(self) -> tuple[list[int], list[int], int]:
        """Greedy monochromatic set grown from the first symmetric pair."""
        N = self.inst.N
        codes = np.zeros((N, N), dtype=np.int64)
        for i, store in enumerate(self.stores):
            codes |= store.table.astype(np.int64) << i
        for u, v in itertools.combinations(range(N), 2):
            code = codes[u, v]
            if codes[v, u] != code:
                continue
            chosen = [u, v]
            for w in range(N):
                if w not in chosen and all(codes[w, x] == code and codes[x, w] == code for x in chosen):
                    chosen.append(w)
            pattern = [i + 1 for i in range(len(self.stores)) if (int(code) >> i) & 1]
            self._note(f"no branch produced a set of size >= 2; grew one from the pair ({u}, {v})")
            return sorted(chosen), pattern, 3
        return self.best


# ---------------------------------------------------------------------------
# module-level entry points
# ---------------------------------------------------------------------------


def _extractor(seed: int, observer) -> Extractor:
    extractor = Extractor(seed)
    if observer is not None:
        extractor.add_observer(observer)
    return extractor


def homogeneous_subset(di_hypergraphs: Sequence, s_init=None, seed: int = 0, observer=None) -> HomogeneousSubset:
    return _extractor(seed, observer).homogeneous_subset(di_hypergraphs, s_init)


def hypergraph_ramsey(
    inst: AlgebraicInstance, seed: int = 0, observer=None, budget: int = DEFAULT_TUPLE_BUDGET
) -> RamseyResult:
    return _extractor(seed, observer).hypergraph_ramsey(inst, budget)


def graph_ramsey(
    inst: AlgebraicInstance, beta=Fraction(1, 2), seed: int = 0, observer=None, budget: int = DEFAULT_TUPLE_BUDGET
) -> RamseyResult:
    return _extractor(seed, observer).graph_ramsey(inst, beta, budget)


def realized_patterns(inst: AlgebraicInstance, budget: int = DEFAULT_TUPLE_BUDGET) -> set[tuple[int, ...]]:
    """1-based sets I realized by ordered pairs of distinct vertices."""
    codes = np.zeros((inst.N, inst.N), dtype=np.int64)
    for i in range(inst.m):
        codes |= materialize_directed(inst, i, budget).table.astype(np.int64) << i
    off_diagonal = ~np.eye(inst.N, dtype=bool)
    return {
        tuple(i + 1 for i in range(inst.m) if (code >> i) & 1) for code in np.unique(codes[off_diagonal]).tolist()
    }


def multicolor_ramsey(
    inst: AlgebraicInstance,
    color_map: Mapping[tuple[int, ...], int] | None = None,
    beta=Fraction(1, 2),
    seed: int = 0,
    observer=None,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> RamseyResult:
    """
    Monochromatic clique of an algebraic coloring: each color class is a union of patterns I.

    Args:
        color_map: 1-based pattern tuple -> color. Defaults to one color per realized pattern.

    Raises:
        BadParameters: The map misses a realized pattern.
    """
    realized = sorted(realized_patterns(inst, budget))
    if color_map is None:
        color_map = {pattern: index for index, pattern in enumerate(realized)}
    color_map = {tuple(sorted(key)): value for key, value in color_map.items()}
    missing = [list(pattern) for pattern in realized if pattern not in color_map]
    if missing:
        raise BadParameters(f"color map misses realized patterns {missing}")
    result = graph_ramsey(inst, beta, seed=seed, observer=observer, budget=budget)
    result.color = color_map.get(tuple(result.pattern or ()))
    if result.color is None and result.achieved_size >= 2:
        raise BadParameters(f"color map misses the pattern {result.pattern} of the result")
    gamma_prime = result.bound_context.gamma_prime
    if gamma_prime:
        result.bound_context.target = inst.N ** (1 / (2 * gamma_prime)) / (4 * inst.m)
    return result
