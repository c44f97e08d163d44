import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algramsey.algebra import (
    FieldPrime,
    MultiPoly,
    field_ops,
    monomial_count,
    poly_eval,
    random_multipoly,
    symmetry_check,
)
from algramsey.errors import (
    ArityMismatch,
    BadPrime,
    DegreeCapViolated,
    InversionOfZero,
    NonResidueInput,
)
from algramsey.utils import make_rng


def two_block(p: int, d: int):
    """Return (x, y) as single-variable blocks of a two-block ring over F_p."""
    x = MultiPoly.variable(p, 2, 1, d, 0)
    y = MultiPoly.variable(p, 2, 1, d, 1)
    return x, y


def test_field_rejects_composites_and_out_of_range():
    with pytest.raises(BadPrime):
        FieldPrime(4)
    with pytest.raises(BadPrime):
        FieldPrime(1)
    with pytest.raises(BadPrime):
        FieldPrime(2**31 + 11)
    assert FieldPrime(2**31 - 1).p == 2**31 - 1


def test_field_operations():
    assert field_ops(13, 5, 9, "add") == 1
    assert field_ops(13, 5, 9, "sub") == 9
    assert field_ops(13, 5, 9, "mul") == 6
    assert field_ops(7, 3, None, "inv") == 5
    assert field_ops(13, 2, 12, "pow") == 1
    with pytest.raises(InversionOfZero):
        field_ops(7, 0, None, "inv")
    with pytest.raises(NonResidueInput):
        field_ops(7, 7, 1, "add")


@given(st.integers(min_value=1, max_value=100))
def test_inverse_law(a):
    field = FieldPrime(101)
    assert field.mul(a, field.inv(a)) == 1


def test_quadratic_residues_mod_13():
    field = FieldPrime(13)
    squares = {a for a in range(13) if field.is_square(a)}
    assert squares == {0, 1, 3, 4, 9, 10, 12}


def test_polynomial_arithmetic_and_evaluation():
    x, y = two_block(5, 2)
    f = (x + y) ** 2
    assert poly_eval(f, [1, 2]) == 4
    assert poly_eval(f - x * x - y * y, [3, 4]) == (2 * 3 * 4) % 5
    assert (f - f).is_zero
    assert f.max_block_degree == 2


def test_degree_cap_and_arity_errors():
    with pytest.raises(DegreeCapViolated):
        MultiPoly.from_terms(5, 2, 1, 1, [(1, (2, 0))])
    with pytest.raises(ArityMismatch):
        MultiPoly.from_terms(5, 2, 1, 1, [(1, (1, 0, 0))])
    x, _ = two_block(5, 1)
    with pytest.raises(ArityMismatch):
        poly_eval(x, [1])
    with pytest.raises(NonResidueInput):
        poly_eval(x, [5, 0])


def test_records_round_trip_preserves_terms():
    x, y = two_block(7, 2)
    f = 3 * x * y + y * y + 1
    assert MultiPoly.from_records(7, 2, 1, 2, f.to_records()) == f


def test_specialize_fixes_a_block():
    x, y = two_block(7, 1)
    g = (x + 2 * y).specialize({0: [3]})
    assert g.r == 1
    assert poly_eval(g, [1]) == 5
    with pytest.raises(ArityMismatch):
        (x + y).specialize({0: [1], 1: [2]})


def test_symmetric_square_is_symmetric():
    x, y = two_block(13, 1)
    f = x - 2 * y
    square = f.symmetric_square()
    assert square.d == 2
    for a, b in [(0, 1), (2, 5), (7, 3)]:
        assert poly_eval(square, [a, b]) == poly_eval(square, [b, a])
        assert poly_eval(square, [a, b]) == poly_eval(f, [a, b]) * poly_eval(f, [b, a]) % 13


def test_symmetry_check_detects_order_dependence():
    x, _ = two_block(5, 1)
    vertices = [[0], [1], [2]]
    assert not symmetry_check(x, 2, 1, vertices, mode="exhaustive")
    assert symmetry_check(x.symmetrize(), 2, 1, vertices, mode="exhaustive")
    assert symmetry_check(x.symmetrize(), 2, 1, vertices, mode="sampled", samples=50)


def test_monomial_count():
    assert monomial_count(1, 3) == 4
    assert monomial_count(3, 2) == 10


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from([3, 5, 7, 13]))
def test_vectorized_evaluation_matches_pointwise(seed, p):
    rng = make_rng(seed, "eval")
    f = random_multipoly(p, 2, 2, 2, rng)
    points = rng.integers(0, p, size=(16, 4))
    expected = [poly_eval(f, row.tolist()) for row in points]
    assert f.evaluate_many(points).tolist() == expected


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_symmetrized_polynomials_pass_the_symmetry_check(seed):
    rng = make_rng(seed, "symmetrize")
    f = random_multipoly(7, 3, 1, 2, rng).symmetrize()
    vertices = np.arange(7).reshape(-1, 1)
    assert symmetry_check(f, 3, 1, vertices, mode="exhaustive")
