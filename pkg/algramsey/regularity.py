"""Polynomial regularity: weak-VC partitions, cleaning of sparse tuples, and hereditary amplification."""

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from pydantic import Field

from algramsey.config import CamelModel, Rational
from algramsey.errors import (
    ArityMismatch,
    BadParameters,
    EmptyPart,
    EmptyInput,
    EpsilonOutOfRange,
    InternalInconsistency,
    OverlappingParts,
    PostconditionFailed,
    ResampleBudgetExceeded,
    TooDense,
    VerificationFailed,
)
from algramsey.hypergraph import AlgebraicInstance, EdgeStore, as_store, cross_edge_count, materialize, neighborhood
from algramsey.oracles import Witness, max_clique_exact, max_independent_exact, verify_witness
from algramsey.patterns import SetFamily, find_focused_M, separated_packing
from algramsey.ramsey import _dense_clique_core
from algramsey.utils import DEFAULT_SEARCH_BUDGET, DEFAULT_TUPLE_BUDGET, Observable, binomial, make_rng, parse_fraction

PARTITION_ROUNDS = 8
REGULARITY_RETRIES = 4
RESAMPLE_LIMIT = 32
HEREDITARY_EPSILON_CAP = Fraction(1, 5)
THRESHOLD_DENOMINATOR = 1 << 20


class Partition(CamelModel):
    k: int = Field(..., alias="K", description="Number of parts.")
    assignment: list[int] = Field(..., description="Part index of every vertex.")
    equitable: bool = Field(..., description="Part sizes differ by at most one.")

    def parts(self) -> list[list[int]]:
        parts: list[list[int]] = [[] for _ in range(self.k)]
        for v, part in enumerate(self.assignment):
            parts[part].append(v)
        return parts

    @classmethod
    def from_parts(cls, N: int, parts: Sequence[Sequence[int]]) -> "Partition":
        assignment = [-1] * N
        for index, part in enumerate(parts):
            for v in part:
                if assignment[v] != -1:
                    raise OverlappingParts(f"vertex {v} lies in parts {assignment[v]} and {index}")
                assignment[v] = index
        if -1 in assignment:
            raise BadParameters(f"vertex {assignment.index(-1)} is in no part")
        sizes = [len(part) for part in parts]
        return cls(K=len(parts), assignment=assignment, equitable=bool(sizes) and max(sizes) - min(sizes) <= 1)


class HomogeneityReport(CamelModel):
    epsilon: Rational
    k: int = Field(..., alias="K")
    tuples_total: int
    tuples_empty: int
    tuples_dense: int = Field(..., description="Tuples with density at least 1 - epsilon.")
    tuples_bad: int
    bad_fraction: Rational
    k_bounds_ok: bool = Field(..., alias="KBoundsOK", description="K > 8 / epsilon.")
    k_reference: float | None = Field(None, description="(1/epsilon)^e, the shape of the upper bound on K; never asserted.")
    k_ratio: float | None = Field(None, description="K / kReference.")


class PartitionResult(CamelModel):
    partition: Partition
    report: HomogeneityReport
    delta: Rational = Field(..., description="Net separation of the accepted round.")
    rounds: int


class PartiteSplit(CamelModel):
    coordinate: int = Field(..., description="Part index l (0-based) holding the neighborhood.")
    fixed: list[int] = Field(..., description="One vertex from every other part, in part order.")
    neighborhood: list[int]


class CleaningResult(CamelModel):
    parts: list[list[int]] = Field(..., description="Trimmed parts V_i, subsets of U_i.")
    removed: list[int] = Field(..., description="|U_i| - |V_i| per part.")
    size_target: float = Field(..., description="1 - c(r,s) eps0^(1/r!), the targeted kept fraction.")
    shortfall: list[int] = Field(default_factory=list, description="Parts kept below the targeted fraction.")
    focused_status: str | None = Field(None, description="Outcome of the focused-copy check when requested.")


class RegularityResult(CamelModel):
    partition: Partition
    report: HomogeneityReport
    epsilon0: Rational = Field(..., description="Sparse-tuple threshold.")
    initial_parts: int = Field(..., description="L, the number of parts before cleaning.")
    cleaning: CleaningResult
    attempts: int
    notes: list[str] = Field(default_factory=list)


class HereditaryResult(CamelModel):
    witness: Witness
    verified: bool
    epsilon: Rational
    epsilon_asymptotic: float
    parts: int = Field(..., description="K of the regular partition.")
    clique_indices: list[int] = Field(..., description="J, the clique of the auxiliary hypergraph on [K].")
    sampled: list[int] = Field(..., description="v_i chosen in every part.")
    resamples: int
    from_part: int | None = Field(None, description="Part returned as the independent set.")
    notes: list[str] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _check_epsilon(epsilon) -> Fraction:
    epsilon = parse_fraction(epsilon)
    if not 0 < epsilon <= Fraction(1, 4):
        raise EpsilonOutOfRange(f"epsilon = {epsilon} outside (0, 1/4]")
    return epsilon


def _part_edge_counts(H: EdgeStore, parts: list[list[int]]) -> dict[tuple[int, ...], tuple[int, int]]:
    """(edges, possible) for every r-set of distinct part indices, in lexicographic order."""
    K, r = len(parts), H.r
    counts = {}
    if r == 2 and H.table is not None and H.N:
        indicator = np.zeros((H.N, K), dtype=np.int64)
        for index, part in enumerate(parts):
            indicator[part, index] = 1
        block = indicator.T @ H.table.astype(np.int64) @ indicator
        for i, j in itertools.combinations(range(K), 2):
            counts[(i, j)] = (int(block[i, j]), len(parts[i]) * len(parts[j]))
        return counts
    for chosen in itertools.combinations(range(K), r):
        members = [parts[i] for i in chosen]
        counts[chosen] = (cross_edge_count(H, members), math.prod(len(part) for part in members))
    return counts


def _classify(edges: int, possible: int, epsilon: Fraction) -> str:
    if edges == 0:
        return "empty"
    if Fraction(edges, possible) >= 1 - epsilon:
        return "dense"
    return "bad"


def k_reference(epsilon: Fraction, exponent: int) -> float:
    """(1/epsilon)^exponent as a float, infinite past the float range."""
    try:
        return float(1 / epsilon) ** exponent
    except OverflowError:
        return math.inf


def homogeneity_report(H, partition: Partition, epsilon, k_exponent: int | None = None) -> HomogeneityReport:
    """
    Classify every r-set of parts as empty, dense (>= 1 - epsilon) or bad, with exact counts.

    With `k_exponent` the report also carries (1/epsilon)^k_exponent and K against it.
    """
    store = as_store(H)
    epsilon = parse_fraction(epsilon)
    tally = {"empty": 0, "dense": 0, "bad": 0}
    for edges, possible in _part_edge_counts(store, partition.parts()).values():
        tally[_classify(edges, possible, epsilon)] += 1
    total = sum(tally.values())
    reference = k_reference(epsilon, k_exponent) if k_exponent is not None else None
    return HomogeneityReport(
        epsilon=epsilon,
        K=partition.k,
        tuples_total=total,
        tuples_empty=tally["empty"],
        tuples_dense=tally["dense"],
        tuples_bad=tally["bad"],
        bad_fraction=Fraction(tally["bad"], total) if total else Fraction(0),
        KBoundsOK=partition.k > 8 / epsilon,
        k_reference=reference,
        k_ratio=partition.k / reference if reference else None,
    )


def _equitable_sizes(N: int, K: int) -> list[int]:
    q, rem = divmod(N, K)
    return [q + 1] * rem + [q] * (K - rem)


# ---------------------------------------------------------------------------
# partite medium degree and cleaning
# ---------------------------------------------------------------------------


def _partite_edges(H: EdgeStore, parts: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Edges with one vertex in each part, as tuples in part order."""
    if H.table is not None:
        hits = np.argwhere(H.table[np.ix_(*parts)])
        return [tuple(parts[position][i] for position, i in enumerate(row)) for row in hits.tolist()]
    return [tup for tup in itertools.product(*parts) if H.has(tup)]


def _within(count: int, size: int, epsilon: Fraction, r: int) -> bool:
    """count <= epsilon^(1/r) * size, decided exactly."""
    return count**r <= epsilon * size**r


def _sparse_split(
    tuples: list[tuple[int, ...]], parts: list[list[int]], positions: list[int], epsilon: Fraction, r: int
) -> tuple[int, dict[int, int]]:
    for j, part in enumerate(parts):
        covered = {t[j] for t in tuples}
        if _within(len(covered), len(part), epsilon, r):
            first = tuples[0]
            return positions[j], {positions[i]: first[i] for i in range(len(parts)) if i != j}
    if len(parts) == 1:
        raise PostconditionFailed("partite density exceeds the threshold at the base of the induction")
    degree: dict[int, int] = {}
    for t in tuples:
        degree[t[0]] = degree.get(t[0], 0) + 1
    x = min(sorted(degree), key=lambda v: degree[v])
    link = [t[1:] for t in tuples if t[0] == x]
    position, fixed = _sparse_split(link, parts[1:], positions[1:], epsilon, r)
    fixed[positions[0]] = x
    return position, fixed


def med_degree_sparse(H, parts: Sequence[Sequence[int]], epsilon) -> PartiteSplit:
    """
    Part l and one vertex X_i from every other part with 1 <= |N(X) & W_l| <= epsilon^(1/r) |W_l|.

    If some part has at most epsilon^(1/r) of its vertices in edges, any edge minus that part works;
    otherwise the lowest vertex of least degree in the first part is fixed and the link is searched.

    Raises:
        EmptyInput: No edge meets every part.
        TooDense: d(W_1, ..., W_r) > epsilon.
    """
    store = as_store(H)
    epsilon = parse_fraction(epsilon)
    r = store.r
    if len(parts) != r:
        raise ArityMismatch(f"need {r} parts, got {len(parts)}")
    parts = [sorted(int(v) for v in part) for part in parts]
    if not all(parts):
        raise EmptyPart("every part must be nonempty")
    if len(set().union(*parts)) != sum(len(part) for part in parts):
        raise OverlappingParts("parts must be disjoint")
    tuples = _partite_edges(store, parts)
    if not tuples:
        raise EmptyInput("no edge meets every part")
    possible = math.prod(len(part) for part in parts)
    if Fraction(len(tuples), possible) > epsilon:
        raise TooDense(f"partite density {Fraction(len(tuples), possible)} exceeds {epsilon}")
    position, chosen = _sparse_split(tuples, parts, list(range(r)), epsilon, r)
    fixed = [chosen[p] for p in range(r) if p != position]

    def completes(v: int) -> bool:
        return store.has(tuple(chosen[p] if p != position else v for p in range(r)))

    found = [v for v in parts[position] if completes(v)]
    if not found or not _within(len(found), len(parts[position]), epsilon, r):
        raise PostconditionFailed(
            f"|N({fixed}) & W_{position}| = {len(found)} misses epsilon^(1/{r}) |W_{position}|"
        )
    return PartiteSplit(coordinate=position, fixed=fixed, neighborhood=found)


def cleaning_constant(r: int, s: int) -> float:
    """c(2, s) = 2s and c(r, s) = s + c(r-1, s) (6rs)^(1/(r-1)!)."""
    if r <= 2:
        return float(2 * s)
    return s + cleaning_constant(r - 1, s) * (6 * r * s) ** (1 / math.factorial(r - 1))


def _sparse_sets(sparse_tuples) -> set[tuple[int, ...]]:
    if isinstance(sparse_tuples, EdgeStore):
        return {tuple(sorted(t)) for t in sparse_tuples.edges()}
    return {tuple(sorted(int(i) for i in t)) for t in sparse_tuples}


def _clean(
    H: EdgeStore, parts: list[list[int]], sparse: set[tuple[int, ...]], eps0: Fraction, s: int
) -> list[list[int]]:
    r = H.r
    part_of = {v: index for index, part in enumerate(parts) for v in part}
    members = [set(part) for part in parts]
    sparse_edges = []
    for e in H.edges():
        owners = [part_of.get(v) for v in e]
        if None in owners or len(set(owners)) != r:
            continue
        if tuple(sorted(owners)) in sparse:
            sparse_edges.append((e, owners))

    co_neighbors: dict[tuple[tuple[int, ...], int], set[int]] = {}

    def into(Z: tuple[int, ...], k: int) -> set[int]:
        key = (Z, k)
        if key not in co_neighbors:
            co_neighbors[key] = {t[0] for t in neighborhood(H, Z)} & members[k]
        return co_neighbors[key]

    trimmed = [set() for _ in parts]
    large: dict[tuple[int, ...], set[int]] = {}
    for e, owners in sparse_edges:
        for position, k in enumerate(owners):
            Z = e[:position] + e[position + 1 :]
            found = into(Z, k)
            if _within(len(found), len(parts[k]), eps0, r):
                trimmed[k] |= found
            else:
                large.setdefault(Z, set()).add(k)
    kept = [members[k] - trimmed[k] for k in range(len(parts))]
    # F_X keeps the large Z that still reach the trimmed part
    surviving = sorted(Z for Z, ks in large.items() if any(into(Z, k) & kept[k] for k in ks))

    if r == 2:
        removed = {Z[0] for Z in surviving}
        return [sorted(kept[k] - removed) for k in range(len(parts))]

    lower = EdgeStore.from_edges(H.N, r - 1, surviving)
    every = set(itertools.combinations(range(len(parts)), r - 1))
    eps1 = float(eps0) ** (1 / r)
    eps_next = Fraction(min(1.0, 6 * r * s * eps1)).limit_denominator(THRESHOLD_DENOMINATOR)
    return _clean(lower, [sorted(part) for part in kept], every, eps_next, s)


def cleaning(
    H,
    parts: Sequence[Sequence[int]],
    sparse_tuples: Iterable | EdgeStore,
    eps0,
    s: int,
    check_focused: bool = False,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> CleaningResult:
    """
    Trim parts U_i to V_i so that every sparse tuple of parts spans no edge.

    T_k collects small nonempty co-neighborhoods into U_k of cross-part (r-1)-tuples taken from
    edges inside sparse tuples; the remaining large tuples F_X either get stripped (graphs) or
    form an (r-1)-uniform hypergraph cleaned recursively with every tuple marked sparse.

    Raises:
        PostconditionFailed: A sparse tuple still spans an edge.
    """
    store = as_store(H)
    if store.directed:
        raise BadParameters("cleaning expects an undirected store")
    eps0 = parse_fraction(eps0)
    parts = [sorted(int(v) for v in part) for part in parts]
    sparse = _sparse_sets(sparse_tuples)
    focused_status = None
    if check_focused and sparse:
        focused_status = find_focused_M(store, parts, store.r, s, budget).status
    trimmed = _clean(store, parts, sparse, eps0, s) if sparse else [list(part) for part in parts]
    trimmed = [sorted(set(V) & set(U)) for V, U in zip(trimmed, parts)]
    for chosen in sorted(sparse):
        members = [trimmed[i] for i in chosen]
        if all(members) and cross_edge_count(store, members):
            raise PostconditionFailed(f"sparse tuple {list(chosen)} still spans edges after cleaning")
    size_target = 1 - cleaning_constant(store.r, s) * float(eps0) ** (1 / math.factorial(store.r))
    shortfall = [i for i, (V, U) in enumerate(zip(trimmed, parts)) if len(V) < size_target * len(U)]
    return CleaningResult(
        parts=trimmed,
        removed=[len(U) - len(V) for V, U in zip(trimmed, parts)],
        size_target=size_target,
        shortfall=shortfall,
        focused_status=focused_status,
    )


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


def _sparse_threshold(r: int, s: int, epsilon: Fraction) -> Fraction:
    """Largest power of 1/2 with 2^r eps0 <= epsilon and c_1 eps0^(1/r!) <= epsilon."""
    c1 = 1 + 4 * math.factorial(r) * cleaning_constant(r, s)
    j = r
    while not (Fraction(2**r, 2**j) <= epsilon and c1 * 2 ** (-j / math.factorial(r)) <= float(epsilon)):
        j += 1
    return Fraction(1, 2**j)


def _reequitablize(N: int, kept: list[list[int]], K_floor: int) -> list[list[int]] | None:
    smallest = min(len(part) for part in kept)
    if smallest == 0:
        return None
    K = max(len(kept), K_floor)
    while -(-N // K) > smallest:
        K += 1
    sizes = _equitable_sizes(N, K)
    parts = [part[:size] for part, size in zip(kept, sizes)]
    placed = {v for part in parts for v in part}
    leftover = [v for v in range(N) if v not in placed]
    start = 0
    for size in sizes[len(kept) :]:
        parts.append(leftover[start : start + size])
        start += size
    return parts


class RegularityPipeline(Observable):
    """
    Partition rounds, regularity attempts and hereditary sampling, with observer checkpoints.

    Events: "round" (weak-VC rounds), "attempt" (regularity attempts), "resample" (hereditary).
    """

    def __init__(self, seed: int = 0):
        super().__init__()
        self.seed = seed

    def weak_vc_partition(
        self,
        H,
        epsilon,
        rounds: int = PARTITION_ROUNDS,
        enforce_k_bound: bool = True,
        label=0,
        n: int | None = None,
    ) -> PartitionResult:
        """
        Equitable partition into K > 8/epsilon parts, all but an epsilon fraction of r-tuples homogeneous.

        Each round clusters vertices around a delta-separated net of neighborhoods (delta = epsilon/4,
        halved per round), orders vertices by cluster and cuts the order into K equitable runs.
        Given the vertex dimension `n`, the report compares K with (1/epsilon)^(2n+1).

        Raises:
            EpsilonOutOfRange: epsilon outside (0, 1/4].
            BadParameters: N <= 8/epsilon while the K bound is enforced.
            VerificationFailed: No round met the bad-fraction target; `report` is the best round.
        """
        store = as_store(H)
        epsilon = _check_epsilon(epsilon)
        N = store.N
        K_min = math.floor(8 / epsilon) + 1
        if K_min > N:
            if enforce_k_bound:
                raise BadParameters(f"K > 8/epsilon = {8 / epsilon} needs N >= {K_min}, got {N}")
            K_min = N
        family = SetFamily.neighborhoods(store)
        exponent = 2 * n + 1 if n is not None else None
        delta = epsilon / 4
        best: PartitionResult | None = None
        for round_index in range(rounds):
            rng = make_rng(self.seed, "weak_vc_partition", label, round_index)
            order = rng.permutation(N).tolist()
            centers = [order[j] for j in separated_packing(family.subfamily(order), delta)]
            distances = (family.incidence[:, None, :] != family.incidence[None, centers, :]).sum(axis=2)
            cluster = distances.argmin(axis=1)
            ordering = sorted(range(N), key=lambda v: (int(cluster[v]), v))
            K = min(N, max(K_min, len(centers)))
            parts, start = [], 0
            for size in _equitable_sizes(N, K):
                parts.append(sorted(ordering[start : start + size]))
                start += size
            partition = Partition.from_parts(N, parts)
            report = homogeneity_report(store, partition, epsilon, exponent)
            result = PartitionResult(partition=partition, report=report, delta=delta, rounds=round_index + 1)
            self._notify("round", {"round": round_index, "K": K, "badFraction": str(report.bad_fraction)})
            if report.bad_fraction <= epsilon:
                return result
            if best is None or report.bad_fraction < best.report.bad_fraction:
                best = result
            delta /= 2
        raise VerificationFailed(
            f"no partition round reached bad fraction <= {epsilon}; best {best.report.bad_fraction}", report=best
        )

    def algebraic_regularity(
        self,
        inst: AlgebraicInstance,
        epsilon,
        retries: int = REGULARITY_RETRIES,
        enforce_k_bound: bool = True,
        H: EdgeStore | None = None,
        budget: int = DEFAULT_TUPLE_BUDGET,
    ) -> RegularityResult:
        """
        Equitable partition of a strongly algebraic hypergraph in which all but an epsilon fraction of
        r-tuples of parts are empty or have density >= 1 - epsilon.

        Partitions at epsilon, cleans the tuples sparser than eps0 to emptiness with
        s = C(n+d, d) + 1, and re-cuts the trimmed parts into K equitable parts. The report compares
        K with (1/epsilon)^(r!(2n+1)).
        """
        if inst.kind != "stronglyAlgebraic":
            raise BadParameters(f"algebraic_regularity needs a stronglyAlgebraic instance, got {inst.kind}")
        epsilon = _check_epsilon(epsilon)
        store = materialize(inst, budget) if H is None else H
        N, r = store.N, store.r
        s = binomial(inst.n + inst.d, inst.d) + 1
        eps0 = _sparse_threshold(r, s, epsilon)
        K_floor = math.floor(8 / epsilon) + 1
        if K_floor > N and not enforce_k_bound:
            K_floor = N
        best: RegularityResult | None = None
        for attempt in range(retries):
            try:
                initial = self.weak_vc_partition(
                    store, epsilon, enforce_k_bound=enforce_k_bound, label=attempt, n=inst.n
                )
            except VerificationFailed as e:
                initial = e.report
            parts = initial.partition.parts()
            counts = _part_edge_counts(store, parts)
            sparse = {chosen for chosen, (edges, possible) in counts.items() if Fraction(edges, possible) < eps0}
            cleaned = cleaning(store, parts, sparse, eps0, s)
            final = _reequitablize(N, cleaned.parts, K_floor)
            self._notify("attempt", {"attempt": attempt, "L": len(parts), "cleanedEmpty": final is None})
            if final is None:
                continue
            partition = Partition.from_parts(N, final)
            report = homogeneity_report(store, partition, epsilon, math.factorial(r) * (2 * inst.n + 1))
            notes = []
            if partition.k == N:
                notes.append(f"K = N = {N}: every part is a single vertex, so every tuple is trivially empty or dense")
            result = RegularityResult(
                partition=partition,
                report=report,
                epsilon0=eps0,
                initial_parts=len(parts),
                cleaning=cleaned,
                attempts=attempt + 1,
                notes=notes,
            )
            if report.bad_fraction <= epsilon and (report.k_bounds_ok or not enforce_k_bound):
                return result
            if best is None or report.bad_fraction < best.report.bad_fraction:
                best = result
        raise VerificationFailed(f"regularity failed after {retries} attempts", report=best)

    def hereditary_amplify(
        self,
        inst: AlgebraicInstance,
        base_finder: Callable[[AlgebraicInstance], Witness],
        beta=Fraction(1, 2),
        budget: int = DEFAULT_TUPLE_BUDGET,
    ) -> HereditaryResult:
        """
        Clique or independent set from a base finder run on one sampled vertex per regular part.

        The auxiliary hypergraph on [K] keeps a tuple when the sampled vertices agree with its
        class (an edge on a dense tuple, a non-edge on an empty one); sampling repeats until its
        density reaches 1 - 2 epsilon. A clique J of it induces the subinstance handed to the
        finder. A returned clique is mapped back; a returned independent set is traded for the
        first of its parts that is independent in the whole instance.
        """
        if inst.kind != "stronglyAlgebraic":
            raise BadParameters(f"hereditary_amplify needs a stronglyAlgebraic instance, got {inst.kind}")
        beta = parse_fraction(beta)
        if not 0 < beta < 1:
            raise BadParameters(f"beta must lie in (0, 1), got {beta}")
        N, r = inst.N, inst.r
        epsilon_asymptotic = N ** (-float(beta) / (math.factorial(r) * (2 * inst.n + 1))) if N > 1 else 1.0
        epsilon = min(Fraction(epsilon_asymptotic).limit_denominator(THRESHOLD_DENOMINATOR), HEREDITARY_EPSILON_CAP)
        notes = []
        if epsilon != Fraction(epsilon_asymptotic).limit_denominator(THRESHOLD_DENOMINATOR):
            notes.append(f"epsilon capped at {epsilon} (asymptotic value {epsilon_asymptotic:.4g})")
        store = materialize(inst, budget)
        regular = self.algebraic_regularity(inst, epsilon, enforce_k_bound=False, H=store, budget=budget)
        if not regular.report.k_bounds_ok:
            notes.append(f"K = {regular.partition.k} does not exceed 8/epsilon")
        parts = regular.partition.parts()
        K = len(parts)
        if K < r:
            raise BadParameters(f"regular partition has {K} parts, fewer than r = {r}")
        classes = {
            chosen: _classify(edges, possible, epsilon)
            for chosen, (edges, possible) in _part_edge_counts(store, parts).items()
        }

        for attempt in range(RESAMPLE_LIMIT):
            rng = make_rng(self.seed, "hereditary_amplify", attempt)
            sampled = [part[int(rng.integers(len(part)))] for part in parts]
            agreeing = []
            for chosen, kind in classes.items():
                present = store.has(tuple(sampled[i] for i in chosen))
                if (present and kind == "dense") or (not present and kind == "empty"):
                    agreeing.append(chosen)
            G = EdgeStore.from_edges(K, r, agreeing)
            self._notify("resample", {"attempt": attempt, "density": str(G.density())})
            if G.density() >= 1 - 2 * epsilon:
                break
        else:
            raise ResampleBudgetExceeded(
                f"auxiliary hypergraph stayed below density 1 - 2 epsilon after {RESAMPLE_LIMIT} samples",
                needed=RESAMPLE_LIMIT + 1,
                budget=RESAMPLE_LIMIT,
            )

        J = _dense_clique_core(G, 2 * epsilon, self.seed, ("hereditary",)).vertices
        chosen_vertices = [sampled[j] for j in J]
        found = base_finder(inst.subinstance(chosen_vertices, name=f"{inst.name}[J]"))
        from_part = None
        if found.kind == "clique":
            witness = Witness(kind="clique", vertices=sorted(chosen_vertices[v] for v in found.vertices))
        elif found.kind == "independentSet":
            candidates = [J[v] for v in found.vertices]
            for index in candidates:
                part = parts[index]
                if not any(store.has(tup) for tup in itertools.combinations(part, r)):
                    from_part = index
                    break
            if from_part is not None:
                witness = Witness(kind="independentSet", vertices=parts[from_part])
            else:
                s = (r - 1) * binomial(inst.n + inst.d, inst.d) + 1
                if len(candidates) >= s:
                    raise InternalInconsistency(
                        f"{len(candidates)} parts each contain an edge, which would span a forbidden N_(r,s)"
                    )
                notes.append("no part of the independent set is independent; returning the set itself")
                witness = Witness(kind="independentSet", vertices=sorted(chosen_vertices[v] for v in found.vertices))
        else:
            raise BadParameters(f"base finder returned a {found.kind} witness")
        check = verify_witness(inst, witness)
        return HereditaryResult(
            witness=witness,
            verified=check.ok,
            epsilon=epsilon,
            epsilon_asymptotic=epsilon_asymptotic,
            parts=K,
            clique_indices=J,
            sampled=sampled,
            resamples=attempt + 1,
            from_part=from_part,
            notes=notes,
        )


def _pipeline(seed: int, observer) -> RegularityPipeline:
    pipeline = RegularityPipeline(seed)
    if observer is not None:
        pipeline.add_observer(observer)
    return pipeline


def weak_vc_partition(
    H,
    epsilon,
    seed: int = 0,
    rounds: int = PARTITION_ROUNDS,
    enforce_k_bound: bool = True,
    observer=None,
    n: int | None = None,
) -> PartitionResult:
    return _pipeline(seed, observer).weak_vc_partition(H, epsilon, rounds, enforce_k_bound, n=n)


def algebraic_regularity(
    inst: AlgebraicInstance,
    epsilon,
    seed: int = 0,
    retries: int = REGULARITY_RETRIES,
    enforce_k_bound: bool = True,
    observer=None,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> RegularityResult:
    return _pipeline(seed, observer).algebraic_regularity(inst, epsilon, retries, enforce_k_bound, budget=budget)


def hereditary_amplify(
    inst: AlgebraicInstance,
    base_finder: Callable[[AlgebraicInstance], Witness],
    beta=Fraction(1, 2),
    seed: int = 0,
    observer=None,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> HereditaryResult:
    return _pipeline(seed, observer).hereditary_amplify(inst, base_finder, beta, budget)


def exact_base_finder(s: int, budget: int = DEFAULT_SEARCH_BUDGET) -> Callable[[AlgebraicInstance], Witness]:
    """Base finder backed by the exact oracles: an independent set of size >= s, else a maximum clique."""

    def finder(sub: AlgebraicInstance) -> Witness:
        store = materialize(sub)
        independent = max_independent_exact(store, budget=budget)
        if independent.size >= s:
            return Witness(kind="independentSet", vertices=independent.witness)
        return Witness(kind="clique", vertices=max_clique_exact(store, budget=budget).witness)

    return finder
