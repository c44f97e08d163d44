"""Canonical algebraic instances (Paley, Frankl-Wilson, Erdos-Renyi polarity) and random generators."""

import itertools
from typing import Mapping

import numpy as np
import sympy
from pydantic import Field

from algramsey.algebra import FieldPrime, MultiPoly, random_multipoly
from algramsey.config import CamelModel
from algramsey.errors import BadParameters, BadPrime, BudgetExceeded, DegenerateInstance
from algramsey.hypergraph import STRONG_FORMULA, AlgebraicInstance, BoolFormula, decode_point, make_instance
from algramsey.utils import DEFAULT_TUPLE_BUDGET, binomial, make_rng

FORMULA_SHAPES = ("strong", "all_nonzero", "any_zero", "random")
MAX_REDRAWS = 16
ZERO_TEST_TUPLES = 256


def _two_block_variables(field: FieldPrime, n: int, d: int) -> tuple[list[MultiPoly], list[MultiPoly]]:
    xs = [MultiPoly.variable(field, 2, n, d, 0, c) for c in range(n)]
    ys = [MultiPoly.variable(field, 2, n, d, 1, c) for c in range(n)]
    return xs, ys


def paley(p: int, variant: str = "sum") -> AlgebraicInstance:
    """
    Paley graph on F_p with f(x, y) = (x + y)^((p-1)/2) + 1, edge iff f != 0.

    Args:
        p (int): Prime with p = 1 mod 4.
        variant (str): "sum" uses x + y; "difference" uses x - y, the (p-1)/2-regular graph.

    Raises:
        BadPrime: p is not a prime congruent to 1 mod 4.
    """
    field = FieldPrime(p)
    if p % 4 != 1:
        raise BadPrime(f"Paley graphs need p = 1 mod 4, got {p}")
    if variant not in ("sum", "difference"):
        raise BadParameters(f"unknown Paley variant {variant!r}")
    half = (p - 1) // 2
    (x,), (y,) = _two_block_variables(field, 1, half)
    base = x + y if variant == "sum" else x - y
    f = base**half + 1
    return make_instance(
        field,
        2,
        1,
        half,
        [f],
        STRONG_FORMULA,
        [[v] for v in range(p)],
        kind="stronglyAlgebraic",
        name=f"paley({p})" if variant == "sum" else f"paley-difference({p})",
        generator={"name": "paley", "params": {"p": p, "variant": variant}},
    )


def frankl_wilson(
    n: int, p: int, complement: bool = False, budget: int = DEFAULT_TUPLE_BUDGET
) -> AlgebraicInstance:
    """
    Frankl-Wilson graph: (p^2-1)-subsets of {0..n-1} as characteristic vectors, edge iff <u,v> + 1 != 0.

    With `complement` the edge rule flips to <u,v> + 1 == 0, i.e. |A & B| = -1 mod p.
    """
    field = FieldPrime(p)
    size = p * p - 1
    if size > n:
        raise BadParameters(f"FW({n}, {p}) needs n >= p^2 - 1 = {size}")
    count = binomial(n, size)
    if count > budget:
        raise BudgetExceeded(f"FW({n}, {p}) has {count} vertices", needed=count, budget=budget)
    vertices = []
    for subset in itertools.combinations(range(n), size):
        vector = [0] * n
        for element in subset:
            vector[element] = 1
        vertices.append(vector)
    xs, ys = _two_block_variables(field, n, 2)
    f = MultiPoly.constant(field, 2, n, 2, 1)
    for x, y in zip(xs, ys):
        f = f + x * y
    return make_instance(
        field,
        2,
        n,
        2,
        [f],
        BoolFormula.vanishes(1) if complement else STRONG_FORMULA,
        vertices,
        kind="general" if complement else "stronglyAlgebraic",
        name=f"fw({n},{p})" + ("-complement" if complement else ""),
        generator={"name": "franklWilson", "params": {"n": n, "p": p, "complement": complement}},
    )


def projective_points(q: int) -> list[list[int]]:
    """One representative per point of PG(2, q): first nonzero coordinate scaled to 1."""
    points = []
    for vector in itertools.product(range(q), repeat=3):
        nonzero = [x for x in vector if x]
        if nonzero and nonzero[0] == 1:
            points.append(list(vector))
    return points


def er_polarity(q: int, side: str = "complement") -> AlgebraicInstance:
    """
    Erdos-Renyi polarity graph ER_q on the projective plane over F_q.

    Args:
        q (int): Prime.
        side (str): "complement" (edge iff x.y != 0, strongly algebraic) or "er" (edge iff x.y == 0).

    Self-orthogonal points keep their vertex; loops are never edges.
    """
    field = FieldPrime(q)
    if side not in ("complement", "er"):
        raise BadParameters(f"unknown ER side {side!r}")
    xs, ys = _two_block_variables(field, 3, 2)
    f = MultiPoly.zero(field, 2, 3, 2)
    for x, y in zip(xs, ys):
        f = f + x * y
    strong = side == "complement"
    return make_instance(
        field,
        2,
        3,
        2,
        [f],
        STRONG_FORMULA if strong else BoolFormula.vanishes(1),
        projective_points(q),
        kind="stronglyAlgebraic" if strong else "general",
        name=f"er({q})" + ("-complement" if strong else ""),
        generator={"name": "erPolarity", "params": {"q": q, "side": side}},
    )


class MixingBound(CamelModel):
    q: int = Field(..., description="Field size.")
    N: int = Field(..., description="q^2 + q + 1.")
    exact: str = Field(..., description="N*sqrt(q)/(q+1) in closed form.")
    value: float = Field(..., description="Decimal value of the ceiling.")
    floor: int = Field(..., description="Largest integer bi-clique size the ceiling allows.")


def mixing_biclique_bound(q: int) -> MixingBound:
    """Ceiling N*sqrt(q)/(q+1) on balanced bi-cliques in ER_q and its complement."""
    FieldPrime(q)
    N = q * q + q + 1
    expression = sympy.Integer(N) * sympy.sqrt(q) / (q + 1)
    return MixingBound(
        q=q,
        N=N,
        exact=str(expression),
        value=float(expression.evalf(30)),
        floor=int(sympy.floor(expression)),
    )


def _random_formula(m: int, shape: str, rng: np.random.Generator) -> BoolFormula:
    if shape == "strong":
        if m != 1:
            raise BadParameters("the strong formula shape needs m = 1")
        return STRONG_FORMULA
    if shape == "all_nonzero":
        return BoolFormula("and", tuple(BoolFormula.nonzero(i) for i in range(1, m + 1)))
    if shape == "any_zero":
        return BoolFormula("or", tuple(BoolFormula.vanishes(i) for i in range(1, m + 1)))
    if shape == "random":
        literals = [
            BoolFormula.nonzero(i) if rng.integers(2) else BoolFormula.vanishes(i) for i in range(1, m + 1)
        ]
        node = literals[0]
        for literal in literals[1:]:
            node = BoolFormula("and" if rng.integers(2) else "or", (node, literal))
        return node
    raise BadParameters(f"unknown formula shape {shape!r}; expected one of {FORMULA_SHAPES}")


def _random_vertices(p: int, n: int, N: int, rng: np.random.Generator) -> list[list[int]]:
    total = p**n
    if N > total:
        raise BudgetExceeded(f"cannot draw {N} distinct vertices from F_{p}^{n}", needed=N, budget=total)
    if total <= DEFAULT_TUPLE_BUDGET:
        codes = rng.choice(total, size=N, replace=False).tolist()
    else:
        chosen: set[int] = set()
        while len(chosen) < N:
            chosen.add(int(rng.integers(total)))
        codes = list(chosen)
    return [decode_point(code, p, n) for code in sorted(codes)]


def _vanishes_everywhere(f: MultiPoly, vertices: np.ndarray, r: int, rng: np.random.Generator) -> bool:
    N = len(vertices)
    if N < r:
        return f.is_zero
    tuples = np.array(
        [rng.choice(N, size=r, replace=False) for _ in range(ZERO_TEST_TUPLES)], dtype=np.int64
    )
    points = vertices[tuples].reshape(len(tuples), r * f.n)
    return not f.evaluate_many(points).any()


def random_algebraic(
    p: int,
    n: int,
    d: int,
    m: int,
    r: int,
    N: int,
    formula_shape: str = "strong",
    seed: int = 0,
    symmetry_mode: str = "auto",
) -> AlgebraicInstance:
    """
    Random instance: symmetrized uniform polynomials on N distinct uniform points.

    Raises:
        BudgetExceeded: N > p^n.
        DegenerateInstance: A symmetrized polynomial vanished on every test tuple 16 times in a row.
    """
    field = FieldPrime(p)
    rng = make_rng(seed, "random_algebraic", p, n, d, m, r, N)
    vertices = _random_vertices(p, n, N, rng)
    vertex_array = np.asarray(vertices, dtype=np.int64).reshape(-1, n)
    polys = []
    for index in range(m):
        for _ in range(MAX_REDRAWS):
            f = random_multipoly(field, r, n, d, rng).symmetrize()
            if not _vanishes_everywhere(f, vertex_array, r, rng):
                polys.append(f)
                break
        else:
            raise DegenerateInstance(
                f"polynomial {index + 1} vanished on all test tuples after {MAX_REDRAWS} redraws"
            )
    formula = _random_formula(m, formula_shape, rng)
    return make_instance(
        field,
        r,
        n,
        d,
        polys,
        formula,
        vertices,
        kind="stronglyAlgebraic" if formula_shape == "strong" else "general",
        name=f"random(p={p},n={n},d={d},m={m},r={r},N={N},seed={seed})",
        symmetry_mode=symmetry_mode,
        seed=seed,
        generator={
            "name": "random",
            "params": {"p": p, "n": n, "d": d, "m": m, "r": r, "N": N, "shape": formula_shape, "seed": seed},
        },
    )


def _param(params: Mapping, key: str, default=None):
    if key not in params:
        if default is None:
            raise BadParameters(f"generator parameter {key!r} is missing")
        return default
    return params[key]


def from_generator(name: str, params: Mapping) -> AlgebraicInstance:
    """Build a canonical instance named in an instance file's vertexGenerator."""
    if name == "paley":
        return paley(int(_param(params, "p")), _param(params, "variant", "sum"))
    if name == "franklWilson":
        return frankl_wilson(
            int(_param(params, "n")), int(_param(params, "p", 2)), bool(_param(params, "complement", False))
        )
    if name == "erPolarity":
        return er_polarity(int(_param(params, "q")), _param(params, "side", "complement"))
    raise BadParameters(f"unknown canonical generator {name!r}")
