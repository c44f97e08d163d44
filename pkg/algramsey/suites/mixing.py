from algramsey.constructions import er_polarity, mixing_biclique_bound
from algramsey.hypergraph import materialize
from algramsey.oracles import max_balanced_biclique_exact
from algramsey.suites._base import VerificationSuite, format_params
from algramsey.suites._registry import register


@register
class MixingSuite(VerificationSuite):
    """Balanced bi-cliques of ER_q and of its complement stay below N sqrt(q)/(q+1)."""

    title = "Polarity-graph bi-cliques"
    bound_name = "t <= N sqrt(q)/(q+1)"

    def rows(self):
        for q in self.sweep.mixing_qs:
            ceiling = mixing_biclique_bound(q)
            for side in ("er", "complement"):
                G = materialize(er_polarity(q, side), self.budgets.tuple_evaluations)
                found = max_balanced_biclique_exact(G, self.budgets.search_nodes, self.budgets.biclique_vertices)
                yield self.row(
                    "t <= floor(N sqrt(q)/(q+1))",
                    format_params(q=q, side=side, N=ceiling.N),
                    found.t,
                    f"{ceiling.floor} ({ceiling.exact})",
                    found.t <= ceiling.floor,
                )
