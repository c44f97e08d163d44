import itertools

from algramsey.algebra import FieldPrime, random_multipoly
from algramsey.patterns import zero_patterns
from algramsey.suites._base import VerificationSuite, format_params
from algramsey.suites._registry import register
from algramsey.utils import make_rng

MAX_N = 3
MAX_M = 4
MAX_D = 2


@register
class ZeroPatternSuite(VerificationSuite):
    """m polynomials of degree <= d in n variables realize at most C(md+n, n) zero patterns."""

    title = "Zero-pattern counts"
    bound_name = "#patterns <= C(md+n, n)"

    def rows(self):
        cells = itertools.product(
            self.sweep.zeropattern_primes, range(1, MAX_N + 1), range(1, MAX_M + 1), range(1, MAX_D + 1)
        )
        for p, n, m, d in cells:
            field = FieldPrime(p)
            worst = None
            for family in range(self.sweep.zeropattern_families):
                rng = make_rng(self.seed, "zeropattern", p, n, m, d, family)
                polys = [random_multipoly(field, 1, n, d, rng) for _ in range(m)]
                report = zero_patterns(polys, budget=self.budgets.tuple_evaluations)
                if worst is None or report.count - report.bound > worst.count - worst.bound:
                    worst = report
            if worst is None:
                continue
            yield self.row(
                "#patterns <= C(md+n,n)",
                format_params(p=p, n=n, m=m, d=d, families=self.sweep.zeropattern_families),
                worst.count,
                worst.bound,
                worst.holds,
            )
