"""Exception hierarchy shared by every algramsey module.

Each family carries the exit code the command line reports for it:
0 success, 1 usage, 2 validation, 3 verification, 4 budget.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_VERIFICATION = 3
EXIT_BUDGET = 4


class AlgRamseyError(Exception):
    """Base class for all algramsey failures."""

    exit_code = EXIT_USAGE


# ---------------------------------------------------------------------------
# validation (bad input or violated hypothesis)
# ---------------------------------------------------------------------------


class ValidationError(AlgRamseyError, ValueError):
    exit_code = EXIT_VALIDATION


class InversionOfZero(ValidationError):
    pass


class NonResidueInput(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class DuplicateVertex(ValidationError):
    pass


class AsymmetricPredicate(ValidationError):
    pass


class DegreeCapViolated(ValidationError):
    pass


class BadFormulaAtom(ValidationError):
    pass


class RepeatedVertexInTuple(ValidationError):
    pass


class EmptyPart(ValidationError):
    pass


class OverlappingParts(ValidationError):
    pass


class AxisMismatch(ValidationError):
    pass


class NotSemidiagonal(ValidationError):
    pass


class BadPrime(ValidationError):
    pass


class BadParameters(ValidationError):
    pass


class AlphaOutOfRange(ValidationError):
    pass


class EpsilonOutOfRange(ValidationError):
    pass


class EmptyHypergraph(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class TooDense(ValidationError):
    pass


class DensityTooLow(ValidationError):
    pass


class DegenerateInstance(ValidationError):
    pass


# ---------------------------------------------------------------------------
# budgets
# ---------------------------------------------------------------------------


class BudgetExceeded(AlgRamseyError):
    """A computation needs more work than its budget allows.

    Args:
        message: Human readable description.
        needed: Exact amount of work the request would need, when known.
        budget: The budget that was exceeded.
    """

    exit_code = EXIT_BUDGET

    def __init__(self, message: str, needed: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.needed = needed
        self.budget = budget


class Overflow(BudgetExceeded, ArithmeticError):
    pass


class StepBudgetExceeded(BudgetExceeded):
    """An iterative procedure hit its step cap; `partial` holds the best result so far."""

    def __init__(self, message: str, partial=None, needed=None, budget=None):
        super().__init__(message, needed=needed, budget=budget)
        self.partial = partial


class ResampleBudgetExceeded(StepBudgetExceeded):
    pass


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


class VerificationFailed(AlgRamseyError):
    """A produced object failed its contract; `report` holds the best attempt."""

    exit_code = EXIT_VERIFICATION

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class PostconditionFailed(VerificationFailed):
    pass


class InternalInconsistency(VerificationFailed):
    pass
