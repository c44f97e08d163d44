import numpy as np
import pytest

from algramsey.algebra import MultiPoly
from algramsey.constructions import paley
from algramsey.errors import ArityMismatch, BadParameters, BudgetExceeded, OverlappingParts
from algramsey.hypergraph import EdgeStore, materialize
from algramsey.patterns import (
    SetFamily,
    find_focused_M,
    find_M_member,
    find_N_member,
    packing_trend,
    separated_packing,
    shatter_function,
    weak_vc_report,
    zero_patterns,
)


def less_than_digraph(N: int) -> EdgeStore:
    """Directed graph with an edge (a, b) exactly when a < b."""
    return EdgeStore.from_edges(N, 2, [(a, b) for a in range(N) for b in range(a + 1, N)], directed=True)


def power_set_family(base: int) -> SetFamily:
    """Every subset of {0..base-1}, as a family over that base."""
    members = [[i for i in range(base) if code >> i & 1] for code in range(1 << base)]
    return SetFamily.from_sets(base, members)


def test_zero_patterns_of_two_lines():
    x = MultiPoly.variable(5, 1, 1, 1, 0)
    report = zero_patterns([x, x - 1])
    assert set(report.patterns) == {"0*", "*0", "**"}
    assert report.count == 3
    assert report.bound == 3
    assert report.holds
    assert report.points == 5


def test_zero_patterns_on_explicit_domain_and_budget():
    x = MultiPoly.variable(7, 2, 1, 1, 0)
    y = MultiPoly.variable(7, 2, 1, 1, 1)
    report = zero_patterns([x, y], domain=[[0, 0], [0, 3]])
    assert report.patterns == ["0*", "00"]
    with pytest.raises(BudgetExceeded):
        zero_patterns([x, y], budget=10)
    with pytest.raises(BadParameters):
        zero_patterns([])


def test_shatter_function_of_power_set():
    family = power_set_family(4)
    assert shatter_function(family, 0) == 1
    assert shatter_function(family, 2) == 4
    assert shatter_function(family, 4) == 16
    with pytest.raises(BudgetExceeded):
        shatter_function(family, 4, max_z=3)


def test_shatter_function_of_a_chain():
    chain = SetFamily.from_sets(4, [list(range(k)) for k in range(5)])
    # prefixes trace at most z + 1 sets on any z elements
    assert shatter_function(chain, 2) == 3
    assert shatter_function(chain, 3) == 4


def test_weak_vc_report_for_paley():
    inst = paley(13)
    report = weak_vc_report(inst, 2, H=materialize(inst))
    assert report.base_size == 13
    assert [row.z for row in report.rows] == [1, 2]
    assert [row.bound for row in report.rows] == [7, 13]
    assert all(row.holds for row in report.rows)


def test_separated_packing_is_greedy_in_index_order():
    family = SetFamily.from_sets(6, [[0, 1, 2], [0, 1], [3, 4, 5], [0, 1, 2, 3]])
    assert separated_packing(family, "1/2") == [0, 2]
    assert separated_packing(family, "1/6") == [0, 1, 2, 3]
    with pytest.raises(BadParameters):
        separated_packing(family, 0)
    assert packing_trend([family, family.subfamily([0, 1])], "1/2") == [(6, 2), (6, 1)]


def test_neighborhood_family_of_a_triple_system():
    store = EdgeStore.from_edges(4, 3, [(0, 1, 2)])
    family = SetFamily.neighborhoods(store)
    assert family.base_size == 6
    assert family.base_labels[family.incidence[0].argmax()] == (1, 2)
    assert [len(family.member(v)) for v in range(4)] == [1, 1, 1, 0]


def test_staircase_in_the_order_digraph():
    outcome = find_M_member(less_than_digraph(4), r=2, s=2, k=1)
    assert outcome.found
    witness = outcome.witness
    assert witness.violation(less_than_digraph(4).has) is None
    assert find_M_member(less_than_digraph(3), r=2, s=2, k=1).status == "exhausted"
    assert find_M_member(less_than_digraph(4), r=2, s=2, k=0).found


def test_complete_digraph_has_no_staircase():
    complete = EdgeStore.complete(6, 2, directed=True)
    assert find_M_member(complete, r=2, s=2, k=1).status == "exhausted"
    assert find_M_member(complete, r=2, s=1, k=1).found


def test_search_budget_and_argument_errors():
    assert find_M_member(less_than_digraph(8), r=2, s=4, k=1, budget=1).status == "budget"
    with pytest.raises(ArityMismatch):
        find_M_member(less_than_digraph(4), r=3, s=2, k=1)
    with pytest.raises(BadParameters):
        find_M_member(less_than_digraph(4), r=2, s=2, k=2)


def test_matching_contains_an_N_pattern():
    matching = EdgeStore.from_edges(4, 2, [(0, 1), (2, 3)])
    outcome = find_N_member(matching, r=2, s=2)
    assert outcome.found
    assert outcome.witness.violation(matching.has) is None
    assert find_N_member(EdgeStore.complete(4, 2), r=2, s=2).status == "exhausted"
    with pytest.raises(BadParameters):
        find_N_member(less_than_digraph(4), r=2, s=2)


def test_focused_staircase():
    parts = [[0, 1], [2, 3]]
    matching = EdgeStore.from_edges(4, 2, [(0, 2), (1, 3)])
    outcome = find_focused_M(matching, parts, r=2, s=2)
    assert outcome.found
    assert outcome.witness.part == 0
    assert sorted(row.z for row in outcome.witness.rows) == [0, 1]
    complete_bipartite = EdgeStore.from_edges(4, 2, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert find_focused_M(complete_bipartite, parts, r=2, s=2).status == "exhausted"
    with pytest.raises(OverlappingParts):
        find_focused_M(matching, [[0, 1], [1, 2]], r=2, s=2)


def test_incidence_masks():
    family = SetFamily.from_sets(3, [[0, 2], []])
    assert family.masks() == [0b101, 0]
    assert len(family) == 2
    assert np.array_equal(family.subfamily([1]).incidence, np.zeros((1, 3), dtype=bool))
