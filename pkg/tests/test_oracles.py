import functools
import itertools

import networkx as nx
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from algramsey.constructions import er_polarity, frankl_wilson, paley
from algramsey.errors import ArityMismatch, BudgetExceeded
from algramsey.hypergraph import EdgeStore, materialize
from algramsey.oracles import (
    Witness,
    max_balanced_biclique_exact,
    max_clique_exact,
    max_independent_exact,
    verify_witness,
)
from algramsey.utils import make_rng


def to_networkx(store: EdgeStore) -> nx.Graph:
    """Undirected networkx copy of a graph store."""
    G = nx.Graph()
    G.add_nodes_from(range(store.N))
    G.add_edges_from(store.edges())
    return G


def networkx_clique_number(G: nx.Graph) -> int:
    return max((len(c) for c in nx.find_cliques(G)), default=0)


def random_graph(seed: int, N: int, density: float) -> EdgeStore:
    """Seeded G(N, density) as an EdgeStore."""
    rng = make_rng(seed, "oracle-graph")
    pairs = [pair for pair in itertools.combinations(range(N), 2) if rng.random() < density]
    return EdgeStore.from_edges(N, 2, pairs)


def test_frankl_wilson_clique_and_independence_numbers():
    store = materialize(frankl_wilson(5, 2))
    clique = max_clique_exact(store)
    assert clique.size == 4
    assert store.induced(clique.witness).complement().is_empty()
    assert max_independent_exact(store).size == 2


def test_paley_matches_networkx():
    store = materialize(paley(13))
    G = to_networkx(store)
    assert max_clique_exact(store).size == networkx_clique_number(G)
    assert max_independent_exact(store).size == networkx_clique_number(nx.complement(G))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.integers(min_value=1, max_value=14),
    st.sampled_from([0.2, 0.5, 0.8]),
)
def test_clique_number_matches_networkx(seed, N, density):
    store = random_graph(seed, N, density)
    G = to_networkx(store)
    result = max_clique_exact(store)
    assert result.size == networkx_clique_number(G)
    assert all(G.has_edge(u, v) for u, v in itertools.combinations(result.witness, 2))


def test_hypergraph_cliques():
    store = EdgeStore.from_edges(5, 3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    clique = max_clique_exact(store)
    assert clique.size == 4
    assert clique.witness == [0, 1, 2, 3]
    assert max_independent_exact(store).size == 3
    assert max_clique_exact(EdgeStore.complete(7, 4)).size == 7


def test_oracle_limits():
    with pytest.raises(BudgetExceeded):
        max_clique_exact(EdgeStore.complete(70, 2))
    with pytest.raises(BudgetExceeded):
        max_clique_exact(materialize(paley(13)), budget=1)
    with pytest.raises(BudgetExceeded):
        max_clique_exact(EdgeStore.complete(10, 3), vertex_limit=8)


def test_complete_bipartite_biclique():
    store = EdgeStore.from_edges(6, 2, [(a, b) for a in range(3) for b in range(3, 6)])
    result = max_balanced_biclique_exact(store)
    assert result.t == 3
    assert result.a == [0, 1, 2]
    assert result.b == [3, 4, 5]
    assert max_balanced_biclique_exact(EdgeStore.empty(5, 2)).t == 0
    assert max_balanced_biclique_exact(EdgeStore.complete(7, 2)).t == 3
    with pytest.raises(ArityMismatch):
        max_balanced_biclique_exact(EdgeStore.complete(5, 3))


@pytest.mark.parametrize("side", ["er", "complement"])
def test_polarity_biclique_respects_the_mixing_ceiling(side):
    inst = er_polarity(2, side)
    result = max_balanced_biclique_exact(materialize(inst))
    assert result.t <= 3
    witness = Witness(kind="biclique", parts=[result.a, result.b])
    assert verify_witness(inst, witness).ok


def test_verify_witness_reports_counterexamples():
    inst = frankl_wilson(5, 2)
    clique = max_clique_exact(materialize(inst))
    assert verify_witness(inst, Witness(kind="clique", vertices=clique.witness))
    bad = verify_witness(inst, Witness(kind="independentSet", vertices=clique.witness[:2]))
    assert not bad.ok
    assert bad.counterexample == clique.witness[:2]
    assert not verify_witness(inst, Witness(kind="clique", vertices=[0, 10]))
    uneven = verify_witness(inst, Witness(kind="biclique", parts=[[0], [1, 2]]))
    assert not uneven.ok


def test_verify_partition_witness():
    inst = paley(13)
    singletons = [[v] for v in range(13)]
    assert verify_witness(inst, Witness(kind="partition", parts=singletons, equitable=True))
    assert not verify_witness(inst, Witness(kind="partition", parts=singletons[:-1]))
    lopsided = [list(range(10)), [10], [11], [12]]
    assert not verify_witness(inst, Witness(kind="partition", parts=lopsided, equitable=True))
    counts = {"empty": 78 - 42, "dense": 42, "bad": 0}
    claim = Witness(kind="partition", parts=singletons, epsilon="1/4", counts=counts)
    assert verify_witness(inst, claim)
    wrong = Witness(kind="partition", parts=singletons, epsilon="1/4", counts={**counts, "bad": 1})
    assert not verify_witness(inst, wrong)


@functools.cache
def valid_claims():
    """Maximum clique and independent set of FW(5, 2) and a maximum bi-clique of ER_2."""
    fw = frankl_wilson(5, 2)
    fw_store = materialize(fw)
    er = er_polarity(2, "er")
    er_store = materialize(er)
    biclique = max_balanced_biclique_exact(er_store)
    return {
        "clique": (fw, fw_store, Witness(kind="clique", vertices=max_clique_exact(fw_store).witness)),
        "independentSet": (
            fw,
            fw_store,
            Witness(kind="independentSet", vertices=max_independent_exact(fw_store).witness),
        ),
        "biclique": (er, er_store, Witness(kind="biclique", parts=[biclique.a, biclique.b])),
    }


def mutate_vertex_set(data, inst, store, witness: Witness) -> Witness:
    vertices = list(witness.vertices)
    want = witness.kind == "clique"
    mutation = data.draw(st.sampled_from(["grow", "repeat", "flip", "outside", "swap"]))
    i = data.draw(st.integers(0, len(vertices) - 1))
    if mutation == "grow":
        # the claim is maximum, so any extra vertex breaks it
        w = data.draw(st.sampled_from([v for v in range(inst.N) if v not in vertices]))
        return witness.model_copy(update={"vertices": vertices + [w]})
    if mutation == "repeat":
        j = data.draw(st.integers(0, len(vertices) - 1).filter(lambda j: j != i))
        vertices[i] = vertices[j]
    elif mutation == "flip":
        return witness.model_copy(update={"kind": "independentSet" if want else "clique"})
    elif mutation == "outside":
        vertices[i] = inst.N
    else:
        rest = vertices[:i] + vertices[i + 1 :]
        breaking = [
            w for w in range(inst.N) if w not in vertices and any(store.has((w, x)) != want for x in rest)
        ]
        assume(breaking)
        vertices[i] = data.draw(st.sampled_from(breaking))
    return witness.model_copy(update={"vertices": vertices})


def mutate_biclique(data, inst, store, witness: Witness) -> Witness:
    a, b = (list(part) for part in witness.parts)
    mutation = data.draw(st.sampled_from(["uneven", "overlap", "outside", "swap", "flip"]))
    i = data.draw(st.integers(0, len(a) - 1))
    if mutation == "uneven":
        del a[i]
    elif mutation == "overlap":
        a[i] = data.draw(st.sampled_from(b))
    elif mutation == "outside":
        a[i] = inst.N
    elif mutation == "swap":
        breaking = [w for w in range(inst.N) if w not in a and w not in b and any(not store.has((w, x)) for x in b)]
        assume(breaking)
        a[i] = data.draw(st.sampled_from(breaking))
    else:
        return witness.model_copy(update={"kind": "wellDirected"})
    return witness.model_copy(update={"parts": [a, b]})


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["clique", "independentSet", "biclique"]), st.data())
def test_verify_witness_rejects_single_field_mutations(claim, data):
    inst, store, witness = valid_claims()[claim]
    assert verify_witness(inst, witness).ok
    mutate = mutate_biclique if claim == "biclique" else mutate_vertex_set
    mutated = mutate(data, inst, store, witness)
    result = verify_witness(inst, mutated)
    assert not result.ok, (mutated, result)
