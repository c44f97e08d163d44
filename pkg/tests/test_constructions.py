import math

import pytest

from algramsey.constructions import (
    er_polarity,
    frankl_wilson,
    from_generator,
    mixing_biclique_bound,
    paley,
    projective_points,
    random_algebraic,
)
from algramsey.errors import BadParameters, BadPrime, BudgetExceeded
from algramsey.hypergraph import build_instance, materialize


def test_paley_parameters():
    inst = paley(13)
    assert inst.kind == "stronglyAlgebraic"
    assert (inst.N, inst.r, inst.n, inst.d, inst.m) == (13, 2, 1, 6, 1)
    with pytest.raises(BadPrime):
        paley(7)
    with pytest.raises(BadPrime):
        paley(21)
    with pytest.raises(BadParameters):
        paley(13, "product")


def test_paley_difference_graph_is_regular():
    store = materialize(paley(13, "difference"))
    assert store.degrees().tolist() == [6] * 13
    assert store.edge_count() == 39


def test_frankl_wilson_is_the_line_graph_of_k5():
    store = materialize(frankl_wilson(5, 2))
    assert store.N == 10
    assert store.edge_count() == 30
    assert set(store.degrees().tolist()) == {6}
    # complement of the line graph of K_5 is the Petersen graph
    petersen = materialize(frankl_wilson(5, 2, complement=True))
    assert petersen.edge_count() == 15
    assert set(petersen.degrees().tolist()) == {3}


def test_frankl_wilson_errors():
    with pytest.raises(BadParameters):
        frankl_wilson(2, 2)
    with pytest.raises(BudgetExceeded):
        frankl_wilson(8, 2, budget=10)
    assert frankl_wilson(8, 2).N == 56


def test_projective_plane_and_polarity_graph():
    assert len(projective_points(3)) == 13
    er = materialize(er_polarity(2, "er"))
    # q + 1 absolute points lose their loop: (N(q + 1) - (q + 1)) / 2 edges
    assert er.edge_count() == (7 * 3 - 3) // 2
    complement = er_polarity(2)
    assert complement.kind == "stronglyAlgebraic"
    assert materialize(complement).edge_count() == math.comb(7, 2) - 9


@pytest.mark.parametrize("q, N, floor", [(2, 7, 3), (3, 13, 5), (5, 31, 11)])
def test_mixing_biclique_bound(q, N, floor):
    bound = mixing_biclique_bound(q)
    assert bound.N == N
    assert bound.floor == floor
    assert bound.value == pytest.approx(N * math.sqrt(q) / (q + 1))


def test_random_instances_are_reproducible():
    first = random_algebraic(13, 1, 2, 1, 2, 8, seed=7)
    second = random_algebraic(13, 1, 2, 1, 2, 8, seed=7)
    assert first.vertices.tolist() == second.vertices.tolist()
    assert first.polys == second.polys
    assert first.kind == "stronglyAlgebraic"
    mixed = random_algebraic(7, 2, 1, 3, 2, 10, formula_shape="random", seed=3)
    assert mixed.kind == "general"
    assert mixed.m == 3


def test_random_instance_errors():
    with pytest.raises(BudgetExceeded):
        random_algebraic(5, 1, 1, 1, 2, 6)
    with pytest.raises(BadParameters):
        random_algebraic(13, 1, 2, 2, 2, 8, formula_shape="strong")
    with pytest.raises(BadParameters):
        random_algebraic(13, 1, 2, 1, 2, 8, formula_shape="bogus")


def test_generators_and_instance_files_agree():
    assert from_generator("franklWilson", {"n": 5}).N == 10
    assert from_generator("erPolarity", {"q": 3}).N == 13
    with pytest.raises(BadParameters):
        from_generator("kneser", {})
    inst = paley(13)
    rebuilt = build_instance(inst.to_file())
    assert materialize(rebuilt) == materialize(inst)
