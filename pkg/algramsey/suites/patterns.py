from algramsey.constructions import random_algebraic
from algramsey.hypergraph import materialize, materialize_directed
from algramsey.patterns import find_M_member, find_N_member
from algramsey.suites._base import VerificationSuite, format_params
from algramsey.suites._registry import register
from algramsey.utils import binomial, make_rng

PATTERN_PRIME = 13
N_MAX_VERTICES = 15


@register
class ForbiddenPatternSuite(VerificationSuite):
    """
    Polynomial dihypergraphs contain no member of M(r, s) for s = C(n+d, d) + 1, and strongly
    algebraic hypergraphs contain no member of N_{r,s} for s = (r-1) C(n+d, d) + 1.

    Every search must end "exhausted"; a "budget" outcome is reported as a failed check.
    """

    title = "Forbidden patterns"
    bound_name = "no M(r,s) / no N_{r,s}"

    def rows(self):
        budget = self.budgets.search_nodes
        for trial in range(self.sweep.m_trials):
            rng = make_rng(self.seed, "forbidden_m", trial)
            r = int(rng.integers(2, 4))
            d = int(rng.integers(1, 3))
            N = int(rng.integers(r + 1, self.sweep.pattern_max_vertices + 1))
            inst = random_algebraic(PATTERN_PRIME, 1, d, 1, r, N, "strong", seed=int(rng.integers(2**31)))
            s = binomial(1 + d, d) + 1
            diH = materialize_directed(inst, 0, self.budgets.tuple_evaluations)
            statuses = [find_M_member(diH, r, s, k, budget).status for k in range(r)]
            yield self.row(
                "no M(r,s), s = C(n+d,d)+1",
                format_params(trial=trial, p=PATTERN_PRIME, n=1, d=d, r=r, N=N, s=s),
                "/".join(statuses),
                "exhausted",
                all(status == "exhausted" for status in statuses),
            )
        for trial in range(self.sweep.n_trials):
            rng = make_rng(self.seed, "forbidden_n", trial)
            r = int(rng.integers(2, 4))
            n = int(rng.integers(1, 3))
            d = 1
            N = int(rng.integers(r + 1, min(N_MAX_VERTICES, PATTERN_PRIME**n) + 1))
            inst = random_algebraic(PATTERN_PRIME, n, d, 1, r, N, "strong", seed=int(rng.integers(2**31)))
            s = (r - 1) * binomial(n + d, d) + 1
            outcome = find_N_member(materialize(inst, self.budgets.tuple_evaluations), r, s, budget)
            yield self.row(
                "no N_{r,s}, s = (r-1)C(n+d,d)+1",
                format_params(trial=trial, p=PATTERN_PRIME, n=n, d=d, r=r, N=N, s=s),
                outcome.status,
                "exhausted",
                outcome.status == "exhausted",
            )
