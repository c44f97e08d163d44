"""Algebraic (di)hypergraphs: the edge oracle, materialized edge stores, densities and neighborhoods."""

import bisect
import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from algramsey.algebra import FieldPrime, MultiPoly, as_field, poly_eval, symmetry_check
from algramsey.config import InstanceFile
from algramsey.errors import (
    ArityMismatch,
    AsymmetricPredicate,
    BadFormulaAtom,
    BadParameters,
    BudgetExceeded,
    DuplicateVertex,
    EmptyPart,
    OverlappingParts,
    RepeatedVertexInTuple,
)
from algramsey.utils import DEFAULT_TUPLE_BUDGET, binomial, make_rng

MAX_FORMULA_DEPTH = 64
TABLE_MAX_ARITY = 3
CHUNK = 1 << 16

CANONICAL_GENERATORS = ("paley", "franklWilson", "erPolarity")


# ---------------------------------------------------------------------------
# Boolean edge formulas over the atoms A_i = "f_i vanishes"
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoolFormula:
    """Expression tree over atoms A_1..A_m with AND / OR / NOT / CONST connectives."""

    op: str
    children: tuple["BoolFormula", ...] = ()
    atom: int = 0
    value: bool = False

    @classmethod
    def parse(cls, data, depth: int = 1) -> "BoolFormula":
        """
        Parse the nested-array text form, e.g. ["not", ["atom", 1]].

        Raises:
            BadParameters: Malformed expression or depth above 64.
        """
        if depth > MAX_FORMULA_DEPTH:
            raise BadParameters(f"formula deeper than {MAX_FORMULA_DEPTH}")
        if not isinstance(data, (list, tuple)) or not data:
            raise BadParameters(f"malformed formula node: {data!r}")
        op = str(data[0]).lower()
        if op == "atom":
            if len(data) != 2 or isinstance(data[1], bool) or not isinstance(data[1], int):
                raise BadFormulaAtom(f"atom needs one integer index: {data!r}")
            return cls("atom", atom=data[1])
        if op == "const":
            if len(data) != 2 or not isinstance(data[1], bool):
                raise BadParameters(f"const needs one boolean: {data!r}")
            return cls("const", value=data[1])
        if op == "not":
            if len(data) != 2:
                raise BadParameters(f"not takes one operand: {data!r}")
            return cls("not", (cls.parse(data[1], depth + 1),))
        if op in ("and", "or"):
            if len(data) < 2:
                raise BadParameters(f"{op} needs operands: {data!r}")
            return cls(op, tuple(cls.parse(child, depth + 1) for child in data[1:]))
        raise BadParameters(f"unknown connective {data[0]!r}")

    @classmethod
    def vanishes(cls, index: int) -> "BoolFormula":
        return cls("atom", atom=index)

    @classmethod
    def nonzero(cls, index: int) -> "BoolFormula":
        return cls("not", (cls.vanishes(index),))

    def to_json(self) -> list:
        if self.op == "atom":
            return ["atom", self.atom]
        if self.op == "const":
            return ["const", self.value]
        return [self.op] + [child.to_json() for child in self.children]

    def atoms(self) -> set[int]:
        if self.op == "atom":
            return {self.atom}
        found = set()
        for child in self.children:
            found |= child.atoms()
        return found

    def depth(self) -> int:
        return 1 + max((child.depth() for child in self.children), default=0)

    def evaluate(self, vanishes: Sequence[bool]) -> bool:
        """Formula value given vanishes[i-1] = (f_i == 0)."""
        if self.op == "atom":
            return bool(vanishes[self.atom - 1])
        if self.op == "const":
            return self.value
        if self.op == "not":
            return not self.children[0].evaluate(vanishes)
        if self.op == "and":
            return all(child.evaluate(vanishes) for child in self.children)
        return any(child.evaluate(vanishes) for child in self.children)

    def evaluate_array(self, vanishes: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorized `evaluate` over equally long boolean arrays."""
        if self.op == "atom":
            return np.asarray(vanishes[self.atom - 1], dtype=bool)
        if self.op == "const":
            size = len(vanishes[0]) if len(vanishes) else 0
            return np.full(size, self.value, dtype=bool)
        if self.op == "not":
            return ~self.children[0].evaluate_array(vanishes)
        parts = [child.evaluate_array(vanishes) for child in self.children]
        if self.op == "and":
            return np.logical_and.reduce(parts)
        return np.logical_or.reduce(parts)


STRONG_FORMULA = BoolFormula.nonzero(1)


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraicInstance:
    """
    An algebraic r-uniform hypergraph of complexity (n, d, m) on explicit vertices in F_p^n.

    Vertices are indexed 0..N-1 in input order.
    """

    field: FieldPrime
    r: int
    n: int
    d: int
    m: int
    polys: tuple[MultiPoly, ...]
    formula: BoolFormula
    vertices: np.ndarray
    kind: str = "general"
    name: str = "instance"
    symmetry_mode: str = "auto"
    generator: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def N(self) -> int:
        return len(self.vertices)

    def coordinates(self, index: int) -> list[int]:
        return [int(x) for x in self.vertices[index]]

    def points(self, tuples: np.ndarray) -> np.ndarray:
        """Concatenate vertex vectors of a (k, r) index array into a (k, r*n) point array."""
        tuples = np.asarray(tuples, dtype=np.int64).reshape(-1, self.r)
        return self.vertices[tuples].reshape(len(tuples), self.r * self.n)

    def vanishing(self, points: np.ndarray) -> list[np.ndarray]:
        return [poly.evaluate_many(points) == 0 for poly in self.polys]

    def predicate(self, points: np.ndarray) -> np.ndarray:
        """Vectorized edge predicate on concatenated points."""
        return self.formula.evaluate_array(self.vanishing(points))

    def edge_mask(self, tuples: np.ndarray) -> np.ndarray:
        return self.predicate(self.points(tuples))

    def subinstance(self, indices: Sequence[int], name: str | None = None) -> "AlgebraicInstance":
        """Induced instance on the given vertex indices (relabeled in the given order)."""
        chosen = np.asarray(list(indices), dtype=np.int64)
        vertices = self.vertices[chosen].copy()
        vertices.setflags(write=False)
        return replace(self, vertices=vertices, name=name or f"{self.name}[{len(chosen)}]")

    def summary(self) -> dict:
        return {
            "name": self.name,
            "N": self.N,
            "p": self.p,
            "r": self.r,
            "n": self.n,
            "d": self.d,
            "m": self.m,
            "kind": self.kind,
            "symmetryMode": self.symmetry_mode,
        }

    def to_file(self) -> InstanceFile:
        return InstanceFile(
            name=self.name,
            p=self.p,
            r=self.r,
            n=self.n,
            d=self.d,
            m=self.m,
            kind=self.kind,
            polys=[poly.to_records() for poly in self.polys],
            formula=self.formula.to_json(),
            vertices=[self.coordinates(i) for i in range(self.N)],
            symmetry_mode=self.symmetry_mode,
        )


def make_instance(
    field: FieldPrime | int,
    r: int,
    n: int,
    d: int,
    polys: Sequence[MultiPoly],
    formula: BoolFormula,
    vertices,
    kind: str = "general",
    name: str = "instance",
    symmetry_mode: str = "auto",
    seed: int = 0,
    generator: Mapping | None = None,
) -> AlgebraicInstance:
    """
    Assemble and validate an instance.

    Raises:
        DegreeCapViolated: A polynomial exceeds the per-block cap d.
        BadFormulaAtom: The formula references an atom outside [1, m].
        DuplicateVertex: Two vertices coincide.
        AsymmetricPredicate: The edge predicate depends on the order of the tuple.
    """
    field = as_field(field)
    polys = tuple(polys)
    m = len(polys)
    if r < 1 or n < 1 or m < 1:
        raise BadParameters(f"need r, n, m >= 1, got r={r}, n={n}, m={m}")
    for index, poly in enumerate(polys, start=1):
        if (poly.field, poly.r, poly.n) != (field, r, n):
            raise ArityMismatch(f"polynomial {index} is not in {r} blocks of {n} variables over F_{field.p}")
        if poly.max_block_degree > d:
            # re-validation raises DegreeCapViolated naming the monomial
            poly.with_cap(d)
    bad_atoms = sorted(i for i in formula.atoms() if not 1 <= i <= m)
    if bad_atoms:
        raise BadFormulaAtom(f"formula references atoms {bad_atoms} but m = {m}")
    if kind == "stronglyAlgebraic":
        if m != 1 or formula != STRONG_FORMULA:
            raise BadParameters("stronglyAlgebraic instances need m = 1 and formula NOT(A_1)")
    elif kind != "general":
        raise BadParameters(f"unknown instance kind {kind!r}")

    vertex_array = np.asarray(vertices, dtype=np.int64).reshape(-1, n) if len(vertices) else np.zeros((0, n), dtype=np.int64)
    if vertex_array.size and (vertex_array.min() < 0 or vertex_array.max() >= field.p):
        raise BadParameters(f"vertex coordinates must be residues mod {field.p}")
    seen: dict[tuple, int] = {}
    for index, row in enumerate(vertex_array.tolist()):
        key = tuple(row)
        if key in seen:
            raise DuplicateVertex(f"vertices {seen[key]} and {index} are both {list(key)}")
        seen[key] = index
    vertex_array.setflags(write=False)

    instance = AlgebraicInstance(
        field=field,
        r=r,
        n=n,
        d=d,
        m=m,
        polys=polys,
        formula=formula,
        vertices=vertex_array,
        kind=kind,
        name=name,
        symmetry_mode=symmetry_mode,
        generator=dict(generator or {}),
    )
    if not symmetry_check(instance.predicate, r, n, vertex_array, mode=symmetry_mode, seed=seed):
        raise AsymmetricPredicate(
            f"edge predicate of {name} changes under reordering a tuple ({symmetry_mode} check)"
        )
    return instance


def _generated_vertices(spec: InstanceFile, budget: int) -> list[list[int]]:
    generator = spec.vertex_generator
    total = spec.p**spec.n
    if generator.name == "all":
        if total > budget:
            raise BudgetExceeded(f"F_{spec.p}^{spec.n} has {total} points", needed=total, budget=budget)
        return [list(point) for point in itertools.product(range(spec.p), repeat=spec.n)]
    if generator.name == "randomSubset":
        count = int(generator.params.get("N", 0))
        if count > total:
            raise BudgetExceeded(
                f"cannot draw {count} distinct points from F_{spec.p}^{spec.n}", needed=count, budget=total
            )
        rng = make_rng(int(generator.params.get("seed", 0)), "randomSubset")
        codes = sorted(rng.choice(total, size=count, replace=False).tolist())
        return [decode_point(code, spec.p, spec.n) for code in codes]
    raise BadParameters(f"unknown vertex generator {generator.name!r}")


def decode_point(code: int, p: int, n: int) -> list[int]:
    """Base-p digits of `code`, most significant first."""
    digits = []
    for _ in range(n):
        code, digit = divmod(code, p)
        digits.append(digit)
    return digits[::-1]


def build_instance(spec: InstanceFile | Mapping, budget: int = DEFAULT_TUPLE_BUDGET) -> AlgebraicInstance:
    """
    Validate a parsed instance description and build the instance.

    Args:
        spec: Instance-file model or the raw JSON mapping.
        budget: Cap on generated vertices for the "all" generator.

    Returns:
        AlgebraicInstance: The validated instance.
    """
    if not isinstance(spec, InstanceFile):
        spec = InstanceFile.parse(spec)
    generator = spec.vertex_generator
    if generator is not None and generator.name in CANONICAL_GENERATORS:
        from algramsey import constructions

        return constructions.from_generator(generator.name, generator.params)

    if spec.p is None or spec.d is None:
        raise BadParameters("instance needs p and d unless it names a canonical generator")
    field = FieldPrime(spec.p)
    if spec.m is not None and spec.m != len(spec.polys):
        raise BadParameters(f"m = {spec.m} but {len(spec.polys)} polynomials were given")
    polys = [MultiPoly.from_records(field, spec.r, spec.n, spec.d, records) for records in spec.polys]
    formula = BoolFormula.parse(spec.formula)
    if spec.vertices is not None:
        vertices = spec.vertices
        for row in vertices:
            if len(row) != spec.n:
                raise ArityMismatch(f"vertex {row} does not have n = {spec.n} coordinates")
    elif generator is not None:
        vertices = _generated_vertices(spec, budget)
    else:
        raise BadParameters("instance needs either vertices or a vertexGenerator")
    return make_instance(
        field,
        spec.r,
        spec.n,
        spec.d,
        polys,
        formula,
        vertices,
        kind=spec.kind,
        name=spec.name,
        symmetry_mode=spec.symmetry_mode,
    )


def _check_tuple(N: int, r: int, tup: Sequence[int]) -> tuple[int, ...]:
    tup = tuple(int(v) for v in tup)
    if len(tup) != r:
        raise ArityMismatch(f"expected an {r}-tuple, got {tup}")
    if any(not 0 <= v < N for v in tup):
        raise BadParameters(f"tuple {tup} has indices outside [0, {N - 1}]")
    if len(set(tup)) != r:
        raise RepeatedVertexInTuple(f"tuple {tup} repeats a vertex")
    return tup


def edge_query(inst: AlgebraicInstance, tup: Sequence[int]) -> bool:
    """
    Raw edge oracle: evaluate every f_i at the concatenated vectors and apply the formula.

    Raises:
        RepeatedVertexInTuple: The tuple repeats a vertex.
    """
    tup = _check_tuple(inst.N, inst.r, tup)
    point = [x for v in tup for x in inst.coordinates(v)]
    return inst.formula.evaluate([poly_eval(poly, point) == 0 for poly in inst.polys])


@dataclass(frozen=True, eq=False)
class PolyOracle:
    """Directed edge oracle of one polynomial: ordered X is an edge iff f_i(X) != 0."""

    inst: AlgebraicInstance
    index: int

    directed = True

    @property
    def N(self) -> int:
        return self.inst.N

    @property
    def r(self) -> int:
        return self.inst.r

    @property
    def poly(self) -> MultiPoly:
        return self.inst.polys[self.index]

    def has(self, tup: Sequence[int]) -> bool:
        tup = _check_tuple(self.N, self.r, tup)
        point = [x for v in tup for x in self.inst.coordinates(v)]
        return poly_eval(self.poly, point) != 0

    __call__ = has

    def materialize(self, budget: int = DEFAULT_TUPLE_BUDGET) -> "EdgeStore":
        return materialize_directed(self.inst, self.index, budget)


def di_hypergraphs_of(inst: AlgebraicInstance) -> list[PolyOracle]:
    return [PolyOracle(inst, index) for index in range(inst.m)]


# ---------------------------------------------------------------------------
# materialized stores
# ---------------------------------------------------------------------------


def distinct_mask(N: int, r: int) -> np.ndarray:
    """Boolean array of shape (N,)*r marking index tuples with pairwise distinct entries."""
    axis = np.arange(N)
    mask = np.ones((N,) * r, dtype=bool)
    for i, j in itertools.combinations(range(r), 2):
        shape_i = [1] * r
        shape_j = [1] * r
        shape_i[i] = N
        shape_j[j] = N
        mask &= axis.reshape(shape_i) != axis.reshape(shape_j)
    return mask


class EdgeStore:
    """
    Materialized r-uniform (di)hypergraph on vertices 0..N-1.

    For r <= 3 membership is a boolean table over ordered tuples (symmetric when undirected);
    above that a sorted list of tuples (sorted entries when undirected) searched by bisection.
    """

    def __init__(self, N: int, r: int, directed: bool, table: np.ndarray | None = None, tuples=None):
        self.N = N
        self.r = r
        self.directed = directed
        self.table = None
        self._tuples: list[tuple[int, ...]] = []
        if r <= TABLE_MAX_ARITY:
            self.table = np.zeros((N,) * r, dtype=bool) if table is None else np.asarray(table, dtype=bool)
            if r >= 2 and N:
                self.table &= distinct_mask(N, r)
            self.table.setflags(write=False)
        else:
            canon = (tuple(t) for t in (tuples or ()))
            if not directed:
                canon = (tuple(sorted(t)) for t in canon)
            self._tuples = sorted({t for t in canon if len(set(t)) == r})

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_edges(cls, N: int, r: int, edges: Iterable[Sequence[int]], directed: bool = False) -> "EdgeStore":
        edges = [tuple(int(v) for v in e) for e in edges]
        for e in edges:
            if len(e) != r:
                raise ArityMismatch(f"edge {e} is not an {r}-tuple")
            if len(set(e)) != r:
                raise RepeatedVertexInTuple(f"edge {e} repeats a vertex")
        if r > TABLE_MAX_ARITY:
            return cls(N, r, directed, tuples=edges)
        table = np.zeros((N,) * r, dtype=bool)
        if edges:
            index = np.array(edges, dtype=np.int64)
            orders = [tuple(range(r))] if directed else list(itertools.permutations(range(r)))
            for order in orders:
                table[tuple(index[:, list(order)].T)] = True
        return cls(N, r, directed, table=table)

    @classmethod
    def complete(cls, N: int, r: int, directed: bool = False) -> "EdgeStore":
        if r > TABLE_MAX_ARITY:
            return cls(N, r, directed, tuples=_all_tuples(N, r, directed))
        return cls(N, r, directed, table=np.ones((N,) * r, dtype=bool))

    @classmethod
    def empty(cls, N: int, r: int, directed: bool = False) -> "EdgeStore":
        return cls(N, r, directed)

    # -- queries ---------------------------------------------------------------

    def has(self, tup: Sequence[int]) -> bool:
        tup = tuple(int(v) for v in tup)
        if len(set(tup)) != len(tup):
            return False
        if self.table is not None:
            return bool(self.table[tup])
        key = tup if self.directed else tuple(sorted(tup))
        position = bisect.bisect_left(self._tuples, key)
        return position < len(self._tuples) and self._tuples[position] == key

    __call__ = has

    def edges(self) -> list[tuple[int, ...]]:
        """Undirected: sorted r-sets in lexicographic order. Directed: all ordered edges."""
        if self.table is None:
            return list(self._tuples)
        found = [tuple(int(v) for v in row) for row in np.argwhere(self.table)]
        if self.directed or self.r == 1:
            return found
        return [t for t in found if all(t[i] < t[i + 1] for i in range(self.r - 1))]

    def edge_count(self) -> int:
        if self.table is None:
            return len(self._tuples)
        total = int(self.table.sum())
        return total if self.directed else total // math.factorial(self.r)

    def is_empty(self) -> bool:
        if self.table is None:
            return not self._tuples
        return not self.table.any()

    def density(self) -> Fraction:
        """Edge density against C(N, r) sets (undirected) or N!/(N-r)! tuples (directed)."""
        possible = binomial(self.N, self.r)
        if self.directed:
            possible *= math.factorial(self.r)
        return Fraction(self.edge_count(), possible) if possible else Fraction(0)

    def degrees(self) -> np.ndarray:
        """Number of edges (sets when undirected, tuples when directed) through each vertex."""
        if self.table is None:
            counts = np.zeros(self.N, dtype=np.int64)
            for e in self.edges():
                for v in e:
                    counts[v] += 1
            return counts
        if self.r == 1:
            return self.table.astype(np.int64)
        if not self.directed:
            others = tuple(range(1, self.r))
            return self.table.sum(axis=others, dtype=np.int64) // math.factorial(self.r - 1)
        counts = np.zeros(self.N, dtype=np.int64)
        for axis in range(self.r):
            others = tuple(a for a in range(self.r) if a != axis)
            counts += self.table.sum(axis=others, dtype=np.int64)
        return counts

    def induced(self, indices: Sequence[int]) -> "EdgeStore":
        """Sub-store on the listed vertices, relabeled 0..len(indices)-1 in the given order."""
        indices = [int(v) for v in indices]
        if self.table is not None:
            if not indices:
                return EdgeStore(0, self.r, self.directed)
            sub = self.table[np.ix_(*([indices] * self.r))]
            return EdgeStore(len(indices), self.r, self.directed, table=sub)
        relabel = {v: i for i, v in enumerate(indices)}
        kept = [tuple(relabel[v] for v in e) for e in self._tuples if all(v in relabel for v in e)]
        return EdgeStore(len(indices), self.r, self.directed, tuples=kept)

    def complement(self) -> "EdgeStore":
        """Undirected complement: r-sets that are not edges."""
        if self.directed:
            raise BadParameters("complement is defined for undirected stores")
        if self.table is not None:
            return EdgeStore(self.N, self.r, False, table=~self.table)
        present = set(self._tuples)
        return EdgeStore(
            self.N,
            self.r,
            False,
            tuples=[t for t in itertools.combinations(range(self.N), self.r) if t not in present],
        )

    def intersection(self, other: "EdgeStore") -> "EdgeStore":
        if (self.N, self.r, self.directed) != (other.N, other.r, other.directed):
            raise ArityMismatch("stores have different shapes")
        if self.table is not None:
            return EdgeStore(self.N, self.r, self.directed, table=self.table & other.table)
        keep = set(other._tuples)
        return EdgeStore(self.N, self.r, self.directed, tuples=[t for t in self._tuples if t in keep])

    def adjacency_masks(self) -> list[int]:
        """Python-int bitset of out-neighbors per vertex (graphs only)."""
        if self.r != 2:
            raise ArityMismatch("adjacency masks exist for graphs only")
        masks = []
        for row in self.table:
            mask = 0
            for v in np.flatnonzero(row).tolist():
                mask |= 1 << v
            masks.append(mask)
        return masks

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeStore):
            return NotImplemented
        return (self.N, self.r, self.directed) == (other.N, other.r, other.directed) and self.edges() == other.edges()

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"EdgeStore(N={self.N}, r={self.r}, {kind}, edges={self.edge_count()})"


def _all_tuples(N: int, r: int, directed: bool) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(N), r) if directed else itertools.combinations(range(N), r)


def _chunks(iterator: Iterator[tuple[int, ...]], r: int) -> Iterator[np.ndarray]:
    while True:
        block = list(itertools.islice(iterator, CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(-1, r)


def _fill(N: int, r: int, directed: bool, iterator, mask_of_chunk) -> EdgeStore:
    if r > TABLE_MAX_ARITY:
        kept = []
        for chunk in _chunks(iterator, r):
            kept.extend(tuple(row) for row in chunk[mask_of_chunk(chunk)].tolist())
        return EdgeStore(N, r, directed, tuples=kept)
    table = np.zeros((N,) * r, dtype=bool)
    orders = [tuple(range(r))] if directed else list(itertools.permutations(range(r)))
    for chunk in _chunks(iterator, r):
        hits = chunk[mask_of_chunk(chunk)]
        for order in orders:
            table[tuple(hits[:, list(order)].T)] = True
    return EdgeStore(N, r, directed, table=table)


def materialize(inst: AlgebraicInstance, budget: int = DEFAULT_TUPLE_BUDGET) -> EdgeStore:
    """
    Evaluate the instance on every r-subset once and store the undirected hypergraph.

    Raises:
        BudgetExceeded: C(N, r) exceeds the budget; `needed` holds the exact count.
    """
    needed = binomial(inst.N, inst.r)
    if needed > budget:
        raise BudgetExceeded(
            f"materializing {inst.name} needs {needed} tuple evaluations", needed=needed, budget=budget
        )
    return _fill(inst.N, inst.r, False, itertools.combinations(range(inst.N), inst.r), inst.edge_mask)


def materialize_directed(inst: AlgebraicInstance, index: int, budget: int = DEFAULT_TUPLE_BUDGET) -> EdgeStore:
    """Directed store of f_index: every ordered tuple of distinct vertices with f_index != 0."""
    needed = math.perm(inst.N, inst.r)
    if needed > budget:
        raise BudgetExceeded(
            f"materializing dihypergraph {index + 1} of {inst.name} needs {needed} evaluations",
            needed=needed,
            budget=budget,
        )
    poly = inst.polys[index]
    return _fill(
        inst.N,
        inst.r,
        True,
        itertools.permutations(range(inst.N), inst.r),
        lambda chunk: poly.evaluate_many(inst.points(chunk)) != 0,
    )


def as_store(H, budget: int = DEFAULT_TUPLE_BUDGET) -> EdgeStore:
    """Accept a store, a polynomial oracle, or an instance and return an EdgeStore."""
    if isinstance(H, EdgeStore):
        return H
    if isinstance(H, PolyOracle):
        return H.materialize(budget)
    if isinstance(H, AlgebraicInstance):
        return materialize(H, budget)
    raise TypeError(f"cannot read edges from {type(H).__name__}")


def complete_part(diH, budget: int = DEFAULT_TUPLE_BUDGET) -> EdgeStore:
    """[H]: the r-sets all of whose orientations are directed edges."""
    store = as_store(diH, budget)
    if not store.directed:
        raise BadParameters("complete_part expects a directed store")
    if store.table is not None:
        table = np.ones_like(store.table)
        for perm in itertools.permutations(range(store.r)):
            table &= np.transpose(store.table, perm)
        return EdgeStore(store.N, store.r, False, table=table)
    candidates = {tuple(sorted(e)) for e in store.edges()}
    complete = [s for s in sorted(candidates) if all(store.has(o) for o in itertools.permutations(s))]
    return EdgeStore(store.N, store.r, False, tuples=complete)


def _check_parts(parts: Sequence[Sequence[int]]) -> list[list[int]]:
    parts = [sorted(int(v) for v in part) for part in parts]
    seen: set[int] = set()
    for index, part in enumerate(parts):
        if not part:
            raise EmptyPart(f"part {index} is empty")
        if seen & set(part):
            raise OverlappingParts(f"part {index} shares vertices {sorted(seen & set(part))}")
        seen |= set(part)
    return parts


def cross_edge_count(H: EdgeStore, parts: Sequence[Sequence[int]]) -> int:
    """Number of edges with exactly one vertex in each of the (disjoint) parts."""
    if H.table is not None:
        return int(H.table[np.ix_(*parts)].sum())
    return sum(1 for tup in itertools.product(*parts) if H.has(tup))


def density(H: EdgeStore, parts: Sequence[Sequence[int]]) -> Fraction:
    """
    Exact |E(V_1, ..., V_r)| / (|V_1| ... |V_r|).

    Raises:
        EmptyPart: Some part is empty.
        OverlappingParts: Two parts share a vertex.
    """
    if len(parts) != H.r:
        raise ArityMismatch(f"density needs {H.r} parts, got {len(parts)}")
    parts = _check_parts(parts)
    return Fraction(cross_edge_count(H, parts), math.prod(len(part) for part in parts))


def neighborhood(H: EdgeStore, X: Sequence[int], positions: Sequence[int] | None = None) -> set[tuple[int, ...]]:
    """
    Tuples completing X to an edge.

    Undirected: X is a set; returns the sorted (r-|X|)-sets Y disjoint from X with X u Y an edge.
    Directed: `positions` (0-based) says where X sits; returns the tuples filling the other
    positions in increasing position order.
    """
    X = tuple(int(v) for v in X)
    if len(set(X)) != len(X):
        raise RepeatedVertexInTuple(f"{X} repeats a vertex")
    rest = H.r - len(X)
    if rest < 0:
        raise ArityMismatch(f"{X} is longer than r = {H.r}")
    if H.directed:
        if positions is None or len(positions) != len(X):
            raise ArityMismatch("directed neighborhoods need one position per fixed vertex")
        positions = [int(i) for i in positions]
        free = [i for i in range(H.r) if i not in positions]
    else:
        positions = list(range(len(X)))
        free = list(range(len(X), H.r))
    if rest == 0:
        return {()} if H.has(X) else set()
    if H.table is not None:
        index = [slice(None)] * H.r
        for position, v in zip(positions, X):
            index[position] = v
        hits = {tuple(int(v) for v in row) for row in np.argwhere(H.table[tuple(index)])}
    else:
        hits = set()
        for e in H.edges():
            for order in (itertools.permutations(e) if not H.directed else [e]):
                if all(order[i] == v for i, v in zip(positions, X)):
                    hits.add(tuple(order[i] for i in free))
    if H.directed:
        return hits
    return {tuple(sorted(y)) for y in hits if not set(y) & set(X)}


def vertex_neighbors(H: EdgeStore, v: int) -> set[int]:
    """Graph shorthand: out-neighbors of v (all neighbors when undirected)."""
    if H.r != 2:
        raise ArityMismatch("vertex_neighbors is a graph shorthand")
    return {int(u) for u in np.flatnonzero(H.table[v])}


def in_neighbors(H: EdgeStore, v: int) -> set[int]:
    if H.r != 2:
        raise ArityMismatch("in_neighbors is a graph shorthand")
    return {int(u) for u in np.flatnonzero(H.table[:, v])}
