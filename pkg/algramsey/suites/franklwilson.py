from algramsey.constructions import frankl_wilson
from algramsey.hypergraph import materialize
from algramsey.oracles import max_clique_exact, max_independent_exact
from algramsey.suites._base import VerificationSuite, format_params
from algramsey.suites._registry import register

FW_PRIME = 2


@register
class FranklWilsonSuite(VerificationSuite):
    """Exact clique and independence numbers of FW(n, 2) are at most C(n, 1) = n."""

    title = "Frankl-Wilson graphs"
    bound_name = "omega, alpha <= C(n, p-1)"

    def rows(self):
        for n in self.sweep.frankl_wilson_ns:
            G = materialize(frankl_wilson(n, FW_PRIME), self.budgets.tuple_evaluations)
            limit = self.budgets.clique_vertices_graph
            omega = max_clique_exact(G, self.budgets.search_nodes, limit).size
            alpha = max_independent_exact(G, self.budgets.search_nodes, limit).size
            params = format_params(n=n, p=FW_PRIME, N=G.N)
            yield self.row("omega <= n", params, omega, n, omega <= n)
            yield self.row("alpha <= n", params, alpha, n, alpha <= n)
