import numpy as np

from algramsey.algebra import FieldPrime, monomial_count, random_multipoly
from algramsey.suites._base import VerificationSuite, format_params
from algramsey.suites._registry import register
from algramsey.tensor import max_flattening_rank, random_semidiagonal, tensor_from_poly, verify_semidiag_bound
from algramsey.utils import make_rng

POLY_PRIMES = (5, 7, 13)
MAX_VERTICES = 20
SEMIDIAGONAL_PRIME = 7
SEMIDIAGONAL_MAX_SIZE = 8


@register
class TensorSuite(VerificationSuite):
    """Every flattening of a polynomial tensor has rank <= C(n+d, d); semi-diagonal tensors have mfrank >= |A|/(r-1)."""

    title = "Tensor rank bounds"
    bound_name = "frank_i(T) <= C(n+d, d); mfrank(T) >= |A|/(r-1)"

    def rows(self):
        for trial in range(self.sweep.tensor_trials):
            rng = make_rng(self.seed, "tensor", trial)
            p = POLY_PRIMES[int(rng.integers(len(POLY_PRIMES)))]
            n, d, r = (int(x) for x in rng.integers(1, 4, size=3))
            N = int(rng.integers(2, MAX_VERTICES + 1))
            field = FieldPrime(p)
            f = random_multipoly(field, r, n, d, rng)
            V = rng.integers(0, p, size=(N, n), dtype=np.int64)
            report = max_flattening_rank(tensor_from_poly(f, V, budget=self.budgets.tensor_entries))
            ceiling = monomial_count(n, d)
            yield self.row(
                "frank <= C(n+d,d)",
                format_params(trial=trial, p=p, n=n, d=d, r=r, N=N),
                report.max,
                ceiling,
                report.max <= ceiling,
            )
        for trial in range(self.sweep.semidiagonal_trials):
            rng = make_rng(self.seed, "semidiagonal", trial)
            r = int(rng.integers(2, 5))
            size = int(rng.integers(1, SEMIDIAGONAL_MAX_SIZE + 1))
            bound = verify_semidiag_bound(random_semidiagonal(SEMIDIAGONAL_PRIME, r, size, rng))
            yield self.row(
                "mfrank >= |A|/(r-1)",
                format_params(trial=trial, p=SEMIDIAGONAL_PRIME, r=r, size=size),
                bound.mfrank,
                bound.floor,
                bound.holds,
            )
