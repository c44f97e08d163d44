"""Prime-field arithmetic and sparse multivariate polynomials in r blocks of n variables."""

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np
from sympy import isprime

from algramsey.errors import (
    ArityMismatch,
    BadPrime,
    DegreeCapViolated,
    InversionOfZero,
    NonResidueInput,
)
from algramsey.utils import (
    EXHAUSTIVE_SYMMETRY_LIMIT,
    SAMPLED_SYMMETRY_TUPLES,
    binomial,
    make_rng,
)

MAX_PRIME = 2**31 - 1

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class FieldPrime:
    """The prime field F_p, 2 <= p <= 2^31 - 1, checked with a deterministic primality test."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise BadPrime(f"field characteristic must be an integer, got {self.p!r}")
        if self.p < 2 or self.p > MAX_PRIME or not isprime(self.p):
            raise BadPrime(f"{self.p} is not a prime in [2, 2^31 - 1]")

    def check(self, a: int) -> int:
        if isinstance(a, bool) or not isinstance(a, (int, np.integer)) or not 0 <= a < self.p:
            raise NonResidueInput(f"{a!r} is not a residue in [0, {self.p - 1}]")
        return int(a)

    def add(self, a: int, b: int) -> int:
        return (self.check(a) + self.check(b)) % self.p

    def sub(self, a: int, b: int) -> int:
        return (self.check(a) - self.check(b)) % self.p

    def mul(self, a: int, b: int) -> int:
        return (self.check(a) * self.check(b)) % self.p

    def inv(self, a: int) -> int:
        if self.check(a) == 0:
            raise InversionOfZero(f"0 has no inverse mod {self.p}")
        return pow(int(a), -1, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(self.check(a), int(e), self.p)

    def is_square(self, a: int) -> bool:
        """Euler's criterion; 0 counts as a square."""
        a = self.check(a)
        if a == 0 or self.p == 2:
            return True
        return pow(a, (self.p - 1) // 2, self.p) == 1


def as_field(p: "FieldPrime | int") -> FieldPrime:
    return p if isinstance(p, FieldPrime) else FieldPrime(p)


def field_ops(p: FieldPrime | int, a: int, b: int | None, op: str) -> int:
    """
    Single field operation on canonical residues.

    Args:
        p: The field (or its prime).
        a: First operand in [0, p-1].
        b: Second operand in [0, p-1]; ignored for "inv", the exponent for "pow".
        op: One of "add", "sub", "mul", "inv", "pow".

    Returns:
        int: The result in [0, p-1].
    """
    field = as_field(p)
    if op == "add":
        return field.add(a, b)
    if op == "sub":
        return field.sub(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "inv":
        return field.inv(a)
    if op == "pow":
        field.check(b)
        return field.pow(a, b)
    raise ValueError(f"Unknown field operation: {op}")


def monomial_count(n: int, d: int) -> int:
    """Number of monomials of total degree <= d in n variables, C(n+d, d)."""
    if n < 0 or d < 0:
        raise ValueError(f"monomial_count needs n, d >= 0, got ({n}, {d})")
    return binomial(n + d, d)


def block_exponents(n: int, d: int) -> Iterator[Exponents]:
    """Yield every exponent vector of n variables with sum <= d, in lexicographic order."""
    for exps in itertools.product(range(d + 1), repeat=n):
        if sum(exps) <= d:
            yield exps


def _power_column(values: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(values)
    base = values.copy()
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@dataclass(frozen=True)
class MultiPoly:
    """
    Sparse polynomial over F_p in r blocks of n variables.

    `terms` holds (coefficient, exponent vector) pairs sorted by exponent vector, with nonzero
    coefficients and every block's exponent sum at most `d`. Variable j*n + c is coordinate c of
    block j.
    """

    field: FieldPrime
    r: int
    n: int
    d: int
    terms: tuple[tuple[int, Exponents], ...] = ()

    @classmethod
    def from_terms(
        cls,
        field: FieldPrime | int,
        r: int,
        n: int,
        d: int,
        terms: Iterable[tuple[int, Sequence[int]]] | Mapping[Sequence[int], int],
    ) -> "MultiPoly":
        """
        Build a polynomial, merging repeated exponent vectors and dropping zero coefficients.

        Args:
            field: Coefficient field.
            r: Number of blocks.
            n: Variables per block.
            d: Per-block degree cap.
            terms: (coefficient, exponents) pairs, or a mapping exponents -> coefficient.

        Returns:
            MultiPoly: The validated polynomial.

        Raises:
            ArityMismatch: An exponent vector does not have r*n entries.
            DegreeCapViolated: Some block of some monomial exceeds degree d.
        """
        field = as_field(field)
        if r < 1 or n < 1 or d < 0:
            raise ValueError(f"bad polynomial shape (r={r}, n={n}, d={d})")
        if isinstance(terms, Mapping):
            terms = [(coeff, exps) for exps, coeff in terms.items()]
        merged: dict[Exponents, int] = {}
        for coeff, exps in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != r * n:
                raise ArityMismatch(f"exponent vector {exps} has length {len(exps)}, expected {r * n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            merged[exps] = (merged.get(exps, 0) + int(coeff)) % field.p
        for exps, coeff in merged.items():
            if not coeff:
                continue
            for block in range(r):
                degree = sum(exps[block * n : (block + 1) * n])
                if degree > d:
                    raise DegreeCapViolated(
                        f"monomial {exps} has degree {degree} in block {block}, cap is {d}"
                    )
        ordered = tuple(
            sorted(((coeff, exps) for exps, coeff in merged.items() if coeff), key=lambda t: t[1])
        )
        return cls(field, r, n, d, ordered)

    @classmethod
    def zero(cls, field, r: int, n: int, d: int) -> "MultiPoly":
        return cls.from_terms(field, r, n, d, [])

    @classmethod
    def constant(cls, field, r: int, n: int, d: int, value: int) -> "MultiPoly":
        return cls.from_terms(field, r, n, d, [(value, (0,) * (r * n))])

    @classmethod
    def variable(cls, field, r: int, n: int, d: int, block: int, coord: int = 0) -> "MultiPoly":
        exps = [0] * (r * n)
        exps[block * n + coord] = 1
        return cls.from_terms(field, r, n, d, [(1, exps)])

    @classmethod
    def from_records(cls, field, r: int, n: int, d: int, records: Iterable[Mapping]) -> "MultiPoly":
        """Parse the instance-file text form: a list of {"c": int, "e": [int; r*n]}."""
        return cls.from_terms(field, r, n, d, [(rec["c"], rec["e"]) for rec in records])

    def to_records(self) -> list[dict]:
        return [{"c": coeff, "e": list(exps)} for coeff, exps in self.terms]

    # -- shape -----------------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.r * self.n

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def max_block_degree(self) -> int:
        degree = 0
        for _, exps in self.terms:
            for block in range(self.r):
                degree = max(degree, sum(exps[block * self.n : (block + 1) * self.n]))
        return degree

    def with_cap(self, d: int) -> "MultiPoly":
        return MultiPoly.from_terms(self.field, self.r, self.n, d, self.terms)

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if (other.field, other.r, other.n) != (self.field, self.r, self.n):
                raise ArityMismatch("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self.field, self.r, self.n, self.d, other % self.field.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly.from_terms(
            self.field, self.r, self.n, max(self.d, other.d), self.terms + other.terms
        )

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return MultiPoly.from_terms(
            self.field, self.r, self.n, self.d, [(p - coeff, exps) for coeff, exps in self.terms]
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        products = []
        for c1, e1 in self.terms:
            for c2, e2 in other.terms:
                products.append((c1 * c2, tuple(a + b for a, b in zip(e1, e2))))
        return MultiPoly.from_terms(self.field, self.r, self.n, max(self.d, other.d), products)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(self.field, self.r, self.n, self.d, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- block manipulation ----------------------------------------------------

    def permute_blocks(self, perm: Sequence[int]) -> "MultiPoly":
        """Return g with g(X_0, ..., X_{r-1}) = f(X_perm[0], ..., X_perm[r-1])."""
        if sorted(perm) != list(range(self.r)):
            raise ValueError(f"{perm} is not a permutation of range({self.r})")
        n = self.n
        moved = []
        for coeff, exps in self.terms:
            new = [0] * self.nvars
            for block, target in enumerate(perm):
                new[target * n : (target + 1) * n] = exps[block * n : (block + 1) * n]
            moved.append((coeff, new))
        return MultiPoly.from_terms(self.field, self.r, self.n, self.d, moved)

    def symmetrize(self) -> "MultiPoly":
        """Sum of f over all r! block permutations."""
        total = MultiPoly.zero(self.field, self.r, self.n, self.d)
        for perm in itertools.permutations(range(self.r)):
            total = total + self.permute_blocks(perm)
        return total

    def symmetric_square(self) -> "MultiPoly":
        """f(x, y) * f(y, x) for a two-block polynomial; per-block degree at most 2d."""
        if self.r != 2:
            raise ArityMismatch("symmetric_square is defined for two blocks")
        widened = self.with_cap(2 * self.d)
        return widened * widened.permute_blocks((1, 0))

    def specialize(self, fixed: Mapping[int, Sequence[int]]) -> "MultiPoly":
        """
        Substitute concrete vectors for some blocks.

        Args:
            fixed: Mapping block index -> length-n residue vector.

        Returns:
            MultiPoly: Polynomial in the remaining blocks, in their original order.
        """
        p, n = self.field.p, self.n
        free = [block for block in range(self.r) if block not in fixed]
        if not free:
            raise ArityMismatch("specialize must leave at least one block free")
        collected = []
        for coeff, exps in self.terms:
            value = coeff
            for block, vector in fixed.items():
                if len(vector) != n:
                    raise ArityMismatch(f"block {block} needs {n} coordinates")
                for coord in range(n):
                    e = exps[block * n + coord]
                    if e:
                        value = value * pow(int(vector[coord]), e, p) % p
            if value:
                rest = [e for block in free for e in exps[block * n : (block + 1) * n]]
                collected.append((value, rest))
        return MultiPoly.from_terms(self.field, len(free), n, self.d, collected)

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, point: Sequence[int]) -> int:
        return poly_eval(self, point)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """
        Vectorized evaluation.

        Args:
            points: Integer array of shape (k, r*n) with residues in [0, p-1].

        Returns:
            np.ndarray: int64 array of k residues.
        """
        p = self.field.p
        points = np.asarray(points, dtype=np.int64).reshape(-1, self.nvars)
        out = np.zeros(len(points), dtype=np.int64)
        powers: dict[tuple[int, int], np.ndarray] = {}
        for coeff, exps in self.terms:
            term = np.full(len(points), coeff, dtype=np.int64)
            for var, e in enumerate(exps):
                if not e:
                    continue
                key = (var, e)
                if key not in powers:
                    powers[key] = _power_column(points[:, var], e, p)
                term = term * powers[key] % p
            out = (out + term) % p
        return out


def poly_eval(f: MultiPoly, point: Sequence[int]) -> int:
    """
    Evaluate f at a point of F_p^(r*n).

    Raises:
        ArityMismatch: The point has the wrong length.
        NonResidueInput: A coordinate is outside [0, p-1].
    """
    if len(point) != f.nvars:
        raise ArityMismatch(f"point has {len(point)} coordinates, polynomial needs {f.nvars}")
    p = f.field.p
    values = [f.field.check(x) for x in point]
    total = 0
    for coeff, exps in f.terms:
        term = coeff
        for x, e in zip(values, exps):
            if e:
                term = term * pow(x, e, p) % p
        total += term
    return total % p


def random_multipoly(
    field: FieldPrime | int, r: int, n: int, d: int, rng: np.random.Generator
) -> MultiPoly:
    """Uniform coefficients for every monomial whose blocks all have degree <= d."""
    field = as_field(field)
    per_block = list(block_exponents(n, d))
    monomials = [sum(choice, ()) for choice in itertools.product(per_block, repeat=r)]
    coeffs = rng.integers(0, field.p, size=len(monomials))
    return MultiPoly.from_terms(field, r, n, d, list(zip(coeffs.tolist(), monomials)))


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

# vectorized predicate: (k, r*n) int64 array of concatenated points -> (k,) bool array
TuplePredicate = Callable[[np.ndarray], np.ndarray]


def zero_predicate(f: MultiPoly) -> TuplePredicate:
    """Predicate "f vanishes" for use with symmetry_check."""
    return lambda points: f.evaluate_many(points) == 0


def symmetry_check(
    subject: MultiPoly | TuplePredicate,
    r: int,
    n: int,
    vertices,
    mode: str = "auto",
    samples: int = SAMPLED_SYMMETRY_TUPLES,
    seed: int = 0,
) -> bool:
    """
    Check that an edge predicate is invariant under reordering the r points of a tuple.

    Args:
        subject: A polynomial (its zero pattern is tested) or a vectorized predicate.
        r: Tuple size.
        n: Coordinates per vertex.
        vertices: N x n array-like of residues.
        mode: "exhaustive", "sampled", or "auto" (exhaustive when C(N, r)*r! <= 10^6).
        samples: Number of random r-subsets in sampled mode.
        seed: Seed for sampled mode.

    Returns:
        bool: True if every tested r-subset gives the same answer in all r! orders.
    """
    predicate = zero_predicate(subject) if isinstance(subject, MultiPoly) else subject
    vertices = np.asarray(vertices, dtype=np.int64).reshape(-1, n)
    count = len(vertices)
    if count < r or r < 2:
        return True
    if mode == "auto":
        oriented = binomial(count, r) * len(list(itertools.permutations(range(r))))
        mode = "exhaustive" if oriented <= EXHAUSTIVE_SYMMETRY_LIMIT else "sampled"
    if mode == "exhaustive":
        subsets = np.array(list(itertools.combinations(range(count), r)), dtype=np.int64)
    elif mode == "sampled":
        rng = make_rng(seed, "symmetry_check")
        subsets = np.array(
            [np.sort(rng.choice(count, size=r, replace=False)) for _ in range(samples)],
            dtype=np.int64,
        )
    else:
        raise ValueError(f"Unknown symmetry mode: {mode}")

    def evaluate(order):
        points = vertices[subsets[:, list(order)]].reshape(len(subsets), r * n)
        return np.asarray(predicate(points), dtype=bool)

    reference = evaluate(range(r))
    for perm in itertools.permutations(range(r)):
        if not np.array_equal(evaluate(perm), reference):
            return False
    return True
