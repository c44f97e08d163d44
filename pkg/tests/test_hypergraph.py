from fractions import Fraction

import pytest

from algramsey.algebra import MultiPoly
from algramsey.constructions import paley
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
from algramsey.hypergraph import (
    STRONG_FORMULA,
    BoolFormula,
    EdgeStore,
    PolyOracle,
    build_instance,
    complete_part,
    density,
    di_hypergraphs_of,
    edge_query,
    make_instance,
    materialize,
    materialize_directed,
    neighborhood,
    vertex_neighbors,
)

QR13 = {1, 3, 4, 9, 10, 12}


def linear_sum_description(vertices) -> dict:
    """Instance file for f(x, y) = x + y over F_5, edge iff f != 0."""
    return {
        "name": "sum5",
        "p": 5,
        "r": 2,
        "n": 1,
        "d": 1,
        "kind": "stronglyAlgebraic",
        "polys": [[{"c": 1, "e": [1, 0]}, {"c": 1, "e": [0, 1]}]],
        "formula": ["not", ["atom", 1]],
        "vertices": vertices,
    }


def both_nonzero_instance():
    """Two one-block polynomials x and y on {0, 1, 2} in F_5, edge iff both are nonzero."""
    x = MultiPoly.variable(5, 2, 1, 1, 0)
    y = MultiPoly.variable(5, 2, 1, 1, 1)
    formula = BoolFormula("and", (BoolFormula.nonzero(1), BoolFormula.nonzero(2)))
    return make_instance(5, 2, 1, 1, [x, y], formula, [[0], [1], [2]], name="both-nonzero")


@pytest.fixture(scope="module")
def paley13():
    """Materialized Paley sum graph on F_13."""
    return materialize(paley(13))


def test_formula_parse_and_evaluate():
    formula = BoolFormula.parse(["or", ["atom", 1], ["not", ["atom", 2]]])
    assert formula.atoms() == {1, 2}
    assert formula.depth() == 3
    assert formula.evaluate([True, True])
    assert formula.evaluate([False, False])
    assert not formula.evaluate([False, True])
    assert BoolFormula.parse(formula.to_json()) == formula
    assert BoolFormula.parse(["not", ["atom", 1]]) == STRONG_FORMULA


def test_formula_parse_errors():
    with pytest.raises(BadFormulaAtom):
        BoolFormula.parse(["atom", "one"])
    with pytest.raises(BadParameters):
        BoolFormula.parse(["xor", ["atom", 1], ["atom", 2]])
    deep = ["atom", 1]
    for _ in range(70):
        deep = ["not", deep]
    with pytest.raises(BadParameters):
        BoolFormula.parse(deep)


def test_build_instance_from_mapping():
    inst = build_instance(linear_sum_description([[0], [1], [2], [3]]))
    assert inst.N == 4
    assert inst.kind == "stronglyAlgebraic"
    # 2 + 3 = 0 mod 5 is the only non-edge
    assert not edge_query(inst, (2, 3))
    assert edge_query(inst, (0, 1))
    assert materialize(inst).edge_count() == 5


def test_build_instance_rejects_bad_input():
    with pytest.raises(DuplicateVertex):
        build_instance(linear_sum_description([[0], [1], [1]]))
    with pytest.raises(ArityMismatch):
        build_instance(linear_sum_description([[0, 1], [2, 3]]))
    spec = linear_sum_description([[0], [1]])
    spec["formula"] = ["atom", 2]
    spec["kind"] = "general"
    with pytest.raises(BadFormulaAtom):
        build_instance(spec)
    with pytest.raises(BadParameters):
        build_instance({"name": "no-prime", "vertices": [[0]]})


def test_canonical_generator_in_instance_file():
    inst = build_instance({"vertexGenerator": {"name": "paley", "params": {"p": 13}}})
    assert inst.N == 13
    assert inst.name == "paley(13)"


def test_all_points_generator_respects_budget():
    spec = linear_sum_description(None)
    del spec["vertices"]
    spec["vertexGenerator"] = {"name": "all"}
    assert build_instance(spec).N == 5
    with pytest.raises(BudgetExceeded):
        build_instance(spec, budget=4)


def test_asymmetric_predicate_is_rejected():
    x = MultiPoly.variable(5, 2, 1, 1, 0)
    with pytest.raises(AsymmetricPredicate):
        make_instance(5, 2, 1, 1, [x], STRONG_FORMULA, [[0], [1], [2]], symmetry_mode="exhaustive")


def test_edge_query_rejects_repeated_vertex():
    inst = paley(13)
    with pytest.raises(RepeatedVertexInTuple):
        edge_query(inst, (4, 4))
    with pytest.raises(ArityMismatch):
        edge_query(inst, (1, 2, 3))


def test_paley_sum_graph(paley13):
    assert paley13.edge_count() == 42
    for x, y in [(0, 1), (2, 5), (6, 7), (3, 10)]:
        assert paley13.has((x, y)) == (((x + y) % 13) in QR13 | {0})
    assert density(paley13, [[0, 1, 2], [3, 4, 5]]) == Fraction(1, 3)


def test_density_rejects_bad_parts(paley13):
    with pytest.raises(EmptyPart):
        density(paley13, [[], [1]])
    with pytest.raises(OverlappingParts):
        density(paley13, [[0, 1], [1, 2]])
    with pytest.raises(ArityMismatch):
        density(paley13, [[0], [1], [2]])


def test_directed_stores_and_complete_part():
    inst = both_nonzero_instance()
    assert materialize(inst).edges() == [(1, 2)]
    directed = materialize_directed(inst, 0)
    assert sorted(directed.edges()) == [(1, 0), (1, 2), (2, 0), (2, 1)]
    assert complete_part(directed).edges() == [(1, 2)]
    oracle = PolyOracle(inst, 0)
    assert oracle.has((1, 0))
    assert not oracle.has((0, 1))
    assert [o.index for o in di_hypergraphs_of(inst)] == [0, 1]
    with pytest.raises(BadParameters):
        complete_part(materialize(inst))


def test_edge_store_operations():
    store = EdgeStore.from_edges(5, 3, [(0, 1, 2), (0, 1, 3)])
    assert store.edge_count() == 2
    assert store.has((2, 1, 0))
    assert not store.has((0, 0, 1))
    assert store.degrees().tolist() == [2, 2, 1, 1, 0]
    assert neighborhood(store, (0, 1)) == {(2,), (3,)}
    assert neighborhood(store, (0,)) == {(1, 2), (1, 3)}
    assert store.complement().edge_count() == 10 - 2
    assert store.induced([0, 1, 3]).edges() == [(0, 1, 2)]
    assert EdgeStore.complete(5, 3).complement().is_empty()
    assert store.intersection(EdgeStore.complete(5, 3)) == store
    with pytest.raises(RepeatedVertexInTuple):
        EdgeStore.from_edges(5, 3, [(0, 0, 1)])


def test_tuple_backed_store_for_high_arity():
    store = EdgeStore.from_edges(6, 4, [(3, 2, 1, 0), (0, 1, 2, 5)])
    assert store.table is None
    assert store.has((0, 1, 2, 3))
    assert store.edges() == [(0, 1, 2, 3), (0, 1, 2, 5)]
    assert neighborhood(store, (0, 1, 2)) == {(3,), (5,)}
    assert EdgeStore.complete(6, 4).edge_count() == 15


def test_graph_shorthands(paley13):
    neighbors = vertex_neighbors(paley13, 0)
    assert neighbors == {v for v in range(1, 13) if v in QR13}
    assert paley13.adjacency_masks()[0] == sum(1 << v for v in neighbors)


def test_subinstance_relabels_vertices():
    inst = paley(13)
    sub = inst.subinstance([4, 9, 0])
    assert sub.N == 3
    assert sub.coordinates(0) == [4]
    # 4 + 9 = 0 mod 13 is an edge of the sum graph
    assert edge_query(sub, (0, 1))
