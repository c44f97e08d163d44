import itertools
import math
from fractions import Fraction

import pytest

from algramsey.algebra import MultiPoly
from algramsey.constructions import frankl_wilson, paley
from algramsey.errors import (
    ArityMismatch,
    BadParameters,
    EmptyInput,
    EmptyPart,
    EpsilonOutOfRange,
    OverlappingParts,
    TooDense,
)
from algramsey.hypergraph import STRONG_FORMULA, EdgeStore, decode_point, make_instance, materialize
from algramsey.regularity import (
    Partition,
    algebraic_regularity,
    cleaning,
    cleaning_constant,
    exact_base_finder,
    hereditary_amplify,
    homogeneity_report,
    med_degree_sparse,
    weak_vc_partition,
)


def constant_instance(value: int, N: int):
    """Strongly algebraic graph on N points of F_11^2 whose polynomial is the constant `value`."""
    f = MultiPoly.constant(11, 2, 2, 1, value)
    vertices = [decode_point(code, 11, 2) for code in range(N)]
    return make_instance(11, 2, 2, 1, [f], STRONG_FORMULA, vertices, kind="stronglyAlgebraic", name=f"const{value}")


def two_cliques(size: int) -> EdgeStore:
    """Disjoint union of two cliques on {0..size-1} and {size..2 size-1}."""
    edges = [pair for block in (range(size), range(size, 2 * size)) for pair in itertools.combinations(block, 2)]
    return EdgeStore.from_edges(2 * size, 2, edges)


def test_partition_from_parts():
    partition = Partition.from_parts(5, [[0, 3], [1, 4], [2]])
    assert partition.k == 3
    assert partition.assignment == [0, 1, 2, 0, 1]
    assert partition.equitable
    assert partition.parts() == [[0, 3], [1, 4], [2]]
    assert partition.model_dump(by_alias=True)["K"] == 3
    with pytest.raises(OverlappingParts):
        Partition.from_parts(3, [[0, 1], [1, 2]])
    with pytest.raises(BadParameters):
        Partition.from_parts(3, [[0, 1]])


def test_homogeneity_report_counts_tuple_classes():
    store = two_cliques(3)
    partition = Partition.from_parts(6, [[0, 1], [2, 3], [4, 5]])
    report = homogeneity_report(store, partition, Fraction(1, 5))
    assert report.tuples_total == 3
    # {0,1}-{2,3} and {2,3}-{4,5} each carry 2 of 4 edges, {0,1}-{4,5} none
    assert report.tuples_empty == 1
    assert report.tuples_dense == 0
    assert report.tuples_bad == 2
    assert report.bad_fraction == Fraction(2, 3)
    assert not report.k_bounds_ok


def test_weak_vc_partition_of_a_complete_graph():
    result = weak_vc_partition(EdgeStore.complete(40, 2), "1/4", n=1)
    assert result.partition.k == 33
    assert result.partition.equitable
    assert result.report.tuples_bad == 0
    assert result.report.k_bounds_ok
    assert result.rounds == 1
    assert result.report.k_reference == 4.0**3
    assert result.report.k_ratio == pytest.approx(33 / 64)
    assert weak_vc_partition(EdgeStore.complete(40, 2), "1/4").report.k_reference is None


def test_weak_vc_partition_separates_two_cliques():
    rounds = []
    result = weak_vc_partition(two_cliques(20), "1/4", seed=9, observer=lambda kind, payload: rounds.append(payload))
    assert result.report.tuples_bad == 0
    for part in result.partition.parts():
        assert len({v < 20 for v in part}) == 1
    assert rounds[0]["K"] == 33


def test_weak_vc_partition_argument_checks():
    with pytest.raises(EpsilonOutOfRange):
        weak_vc_partition(EdgeStore.complete(40, 2), "1/3")
    with pytest.raises(EpsilonOutOfRange):
        weak_vc_partition(EdgeStore.complete(40, 2), 0)
    with pytest.raises(BadParameters):
        weak_vc_partition(EdgeStore.complete(10, 2), "1/5")
    relaxed = weak_vc_partition(EdgeStore.complete(10, 2), "1/5", enforce_k_bound=False)
    assert relaxed.partition.k == 10


def test_med_degree_sparse_single_edge():
    store = EdgeStore.from_edges(20, 2, [(0, 10)])
    split = med_degree_sparse(store, [range(10), range(10, 20)], "1/100")
    assert split.coordinate == 0
    assert split.fixed == [10]
    assert split.neighborhood == [0]


def test_med_degree_sparse_errors():
    store = EdgeStore.from_edges(20, 2, [(0, 10)])
    with pytest.raises(ArityMismatch):
        med_degree_sparse(store, [range(10)], "1/100")
    with pytest.raises(EmptyPart):
        med_degree_sparse(store, [[], range(10, 20)], "1/100")
    with pytest.raises(EmptyInput):
        med_degree_sparse(store, [range(1, 10), range(11, 20)], "1/100")
    with pytest.raises(TooDense):
        med_degree_sparse(EdgeStore.complete(20, 2), [range(10), range(10, 20)], "1/100")


def test_cleaning_constant():
    assert cleaning_constant(2, 3) == 6
    assert cleaning_constant(3, 1) == pytest.approx(1 + 2 * 18**0.5)


@pytest.mark.parametrize("eps0", ["1/4", "1/100"])
def test_cleaning_empties_a_sparse_pair(eps0):
    store = EdgeStore.from_edges(8, 2, [(0, 4)])
    result = cleaning(store, [[0, 1, 2, 3], [4, 5, 6, 7]], [(1, 0)], eps0, s=1)
    assert result.parts == [[1, 2, 3], [5, 6, 7]]
    assert result.removed == [1, 1]


def test_cleaning_recurses_on_triples():
    store = EdgeStore.from_edges(9, 3, [(0, 3, 6)])
    result = cleaning(store, [[0, 1, 2], [3, 4, 5], [6, 7, 8]], [(0, 1, 2)], "1/2", s=1)
    assert result.parts == [[1, 2], [4, 5], [7, 8]]


def test_cleaning_reports_a_focused_copy():
    store = EdgeStore.from_edges(8, 2, [(0, 4)])
    result = cleaning(store, [[0, 1, 2, 3], [4, 5, 6, 7]], [(0, 1)], "1/4", s=1, check_focused=True)
    assert result.focused_status == "found"
    with pytest.raises(BadParameters):
        cleaning(EdgeStore.complete(4, 2, directed=True), [[0, 1], [2, 3]], [(0, 1)], "1/4", s=1)


def test_algebraic_regularity_on_a_complete_graph():
    events = []
    result = algebraic_regularity(constant_instance(1, 48), "1/5", observer=lambda kind, payload: events.append(kind))
    assert result.initial_parts == 41
    assert result.partition.k == 48
    assert all(len(part) == 1 for part in result.partition.parts())
    assert result.report.tuples_bad == 0
    assert result.report.k_bounds_ok
    assert result.epsilon0 == Fraction(1, 2**17)
    assert "attempt" in events
    assert result.report.k_reference == 5.0**10
    assert result.report.k_ratio == pytest.approx(48 / 5**10)
    assert any("K = N = 48" in note for note in result.notes)


def test_algebraic_regularity_on_paley():
    result = algebraic_regularity(paley(101), "1/4")
    assert result.partition.k == 101
    assert result.report.tuples_bad == 0
    assert result.report.k_reference == 4.0**6
    assert len(result.notes) == 1
    dumped = result.model_dump(by_alias=True)
    assert {"kReference", "kRatio"} <= set(dumped["report"])


def recount(store: EdgeStore, parts, epsilon: Fraction) -> dict[str, int]:
    """Classify every r-set of parts by walking its cross tuples one by one."""
    tally = {"empty": 0, "dense": 0, "bad": 0}
    for chosen in itertools.combinations(range(len(parts)), store.r):
        members = [parts[i] for i in chosen]
        edges = sum(store.has(tup) for tup in itertools.product(*members))
        possible = math.prod(len(part) for part in members)
        if edges == 0:
            tally["empty"] += 1
        elif Fraction(edges, possible) >= 1 - epsilon:
            tally["dense"] += 1
        else:
            tally["bad"] += 1
    return tally


@pytest.mark.parametrize("p", [101, 181])
@pytest.mark.parametrize("epsilon", [Fraction(1, 4), Fraction(1, 5)])
@pytest.mark.parametrize("seed", range(5))
def test_regularity_on_paley_recounts_exactly(p, epsilon, seed):
    inst = paley(p)
    result = algebraic_regularity(inst, epsilon, seed=seed)
    report = result.report
    parts = result.partition.parts()
    assert report.bad_fraction <= epsilon
    assert result.partition.k > 8 / epsilon
    assert result.partition.equitable
    assert max(map(len, parts)) - min(map(len, parts)) <= 1
    tally = recount(materialize(inst), parts, epsilon)
    assert tally == {"empty": report.tuples_empty, "dense": report.tuples_dense, "bad": report.tuples_bad}


def test_algebraic_regularity_argument_checks():
    with pytest.raises(BadParameters):
        algebraic_regularity(frankl_wilson(5, 2, complement=True), "1/5")
    with pytest.raises(BadParameters):
        algebraic_regularity(paley(29), "1/4")
    relaxed = algebraic_regularity(paley(29), "1/4", enforce_k_bound=False)
    assert relaxed.partition.k == 29
    assert not relaxed.report.k_bounds_ok


def test_hereditary_amplify_returns_a_clique():
    inst = frankl_wilson(5, 2)
    result = hereditary_amplify(inst, exact_base_finder(22))
    assert result.parts == 10
    assert result.epsilon == Fraction(1, 5)
    assert result.witness.kind == "clique"
    assert len(result.witness.vertices) == 4
    assert result.verified
    assert result.resamples == 1
    assert any("capped" in note for note in result.notes)


def test_hereditary_amplify_returns_an_independent_part():
    inst = constant_instance(0, 100)
    result = hereditary_amplify(inst, exact_base_finder(3))
    assert result.parts == 50
    assert result.witness.kind == "independentSet"
    assert result.from_part == 0
    assert len(result.witness.vertices) == 2
    assert result.verified
