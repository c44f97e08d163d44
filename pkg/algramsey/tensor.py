"""Dense tensors over F_p, flattening ranks, and the semi-diagonal rank floor."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from pydantic import Field

from algramsey.algebra import FieldPrime, MultiPoly, as_field
from algramsey.config import CamelModel, Rational
from algramsey.errors import (
    ArityMismatch,
    AxisMismatch,
    BadParameters,
    BudgetExceeded,
    NonResidueInput,
    NotSemidiagonal,
)
from algramsey.hypergraph import distinct_mask
from algramsey.utils import DEFAULT_TENSOR_BUDGET, ceil_fraction


@dataclass(frozen=True, eq=False)
class Tensor:
    """r-dimensional array of residues mod p, indexed by vertex positions."""

    field: FieldPrime
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.int64)
        if data.size and (data.min() < 0 or data.max() >= self.field.p):
            raise NonResidueInput(f"tensor entries must lie in [0, {self.field.p - 1}]")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_array(cls, p: FieldPrime | int, array, reduce: bool = False) -> "Tensor":
        field = as_field(p)
        array = np.asarray(array, dtype=np.int64)
        if reduce:
            array = np.mod(array, field.p)
        return cls(field, array)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def r(self) -> int:
        return self.data.ndim

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.data.shape)

    def __add__(self, other: "Tensor") -> "Tensor":
        if self.field != other.field or self.dims != other.dims:
            raise AxisMismatch(f"cannot add tensors of shapes {self.dims} and {other.dims}")
        return Tensor(self.field, (self.data + other.data) % self.p)

    def subtensor(self, index_sets: Sequence[Sequence[int]]) -> "Tensor":
        """Induced subtensor keeping the listed indices along each axis."""
        if len(index_sets) != self.r:
            raise AxisMismatch(f"need {self.r} index sets, got {len(index_sets)}")
        return Tensor(self.field, self.data[np.ix_(*[list(s) for s in index_sets])])

    def matricize(self, axis: int) -> np.ndarray:
        """Axis-`axis` flattening: rows along that axis, columns lexicographic over the others."""
        if not 0 <= axis < self.r:
            raise AxisMismatch(f"axis {axis} outside [0, {self.r - 1}]")
        return np.moveaxis(self.data, axis, 0).reshape(self.dims[axis], -1)


def _check_entries(dims: Sequence[int], budget: int) -> None:
    entries = math.prod(dims)
    if entries > budget:
        raise BudgetExceeded(f"tensor of shape {tuple(dims)} has {entries} entries", needed=entries, budget=budget)


def tensor_from_poly(
    f: MultiPoly, V, r: int | None = None, budget: int = DEFAULT_TENSOR_BUDGET
) -> Tensor:
    """
    Evaluate f on every ordered tuple of V^r, repeats included.

    Args:
        f: Polynomial in r blocks of n variables.
        V: Vertex vectors, shape (N, n).
        r: Number of axes; defaults to f.r.
        budget: Cap on N^r entries.

    Returns:
        Tensor: T[i_1, ..., i_r] = f(V[i_1], ..., V[i_r]).
    """
    r = f.r if r is None else r
    if r != f.r:
        raise ArityMismatch(f"polynomial has {f.r} blocks but r = {r}")
    V = np.asarray(V, dtype=np.int64).reshape(-1, f.n)
    N = len(V)
    dims = (N,) * r
    _check_entries(dims, budget)
    data = np.zeros(dims, dtype=np.int64)
    if N == 0:
        return Tensor(f.field, data)
    rest = r - 1
    grid = (
        np.stack(np.meshgrid(*([np.arange(N)] * rest), indexing="ij"), axis=-1).reshape(-1, rest)
        if rest
        else np.zeros((1, 0), dtype=np.int64)
    )
    for first in range(N):
        tuples = np.concatenate([np.full((len(grid), 1), first, dtype=np.int64), grid], axis=1)
        points = V[tuples].reshape(len(tuples), r * f.n)
        data[first] = f.evaluate_many(points).reshape(dims[1:])
    return Tensor(f.field, data)


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """Rank over F_p by row reduction, pivoting on the first nonzero entry of each column."""
    A = np.mod(np.asarray(matrix, dtype=np.int64), p)
    if A.ndim != 2 or 0 in A.shape:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        nonzero = np.flatnonzero(A[rank:, c])
        if not len(nonzero):
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            A[[rank, pivot]] = A[[pivot, rank]]
        A[rank] = (A[rank] * pow(int(A[rank, c]), -1, p)) % p
        below = A[rank + 1 :, c].copy()
        if below.any():
            A[rank + 1 :] = (A[rank + 1 :] - np.outer(below, A[rank])) % p
        rank += 1
        if rank == rows:
            break
    return rank


def flattening_rank(T: Tensor, axis: int) -> int:
    """frank along `axis` (0-based)."""
    return rank_mod_p(T.matricize(axis), T.p)


class RankReport(CamelModel):
    per_axis: list[int] = Field(..., description="Flattening rank along each axis.")
    max: int = Field(..., description="Max-flattening rank.")


def max_flattening_rank(T: Tensor) -> RankReport:
    per_axis = [flattening_rank(T, axis) for axis in range(T.r)]
    return RankReport(per_axis=per_axis, max=max(per_axis, default=0))


def semidiagonal_check(T: Tensor) -> bool:
    """
    True iff T vanishes on pairwise-distinct index tuples and is nonzero on every constant tuple.

    Raises:
        AxisMismatch: Axes have different lengths.
    """
    if len(set(T.dims)) > 1:
        raise AxisMismatch(f"semi-diagonal tensors need equal axes, got {T.dims}")
    if T.r < 2:
        raise BadParameters("semi-diagonal tensors have at least two axes")
    size = T.dims[0]
    diagonal = T.data[(np.arange(size),) * T.r]
    if not np.all(diagonal != 0):
        return False
    return not np.any(T.data[distinct_mask(size, T.r)])


class SemidiagonalBound(CamelModel):
    holds: bool = Field(..., description="mfrank meets the |A|/(r-1) floor.")
    mfrank: int = Field(..., description="Max-flattening rank.")
    floor: Rational = Field(..., description="|A| / (r - 1).")
    size: int = Field(..., description="|A|.")
    r: int = Field(..., description="Number of axes.")


def verify_semidiag_bound(T: Tensor) -> SemidiagonalBound:
    """
    Compare mfrank(T) with |A|/(r-1); a failure is reported in `holds`, never raised.

    Raises:
        NotSemidiagonal: T is not semi-diagonal.
    """
    if not semidiagonal_check(T):
        raise NotSemidiagonal(f"tensor of shape {T.dims} is not semi-diagonal")
    mfrank = max_flattening_rank(T).max
    floor = Fraction(T.dims[0], T.r - 1)
    return SemidiagonalBound(holds=mfrank >= ceil_fraction(floor), mfrank=mfrank, floor=floor, size=T.dims[0], r=T.r)


def random_tensor(p: FieldPrime | int, dims: Sequence[int], rng: np.random.Generator) -> Tensor:
    field = as_field(p)
    return Tensor(field, rng.integers(0, field.p, size=tuple(dims), dtype=np.int64))


def random_semidiagonal(p: FieldPrime | int, r: int, size: int, rng: np.random.Generator) -> Tensor:
    """Uniform entries off the constraint set, zeros on distinct tuples, nonzero diagonal."""
    field = as_field(p)
    data = rng.integers(0, field.p, size=(size,) * r, dtype=np.int64)
    data[distinct_mask(size, r)] = 0
    data[(np.arange(size),) * r] = rng.integers(1, field.p, size=size, dtype=np.int64)
    return Tensor(field, data)
