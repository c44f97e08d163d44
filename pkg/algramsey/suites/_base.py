from abc import ABC, abstractmethod

from pydantic import Field

from algramsey.config import Budgets, CamelModel, SweepConfig
from algramsey.utils import Observable

CSV_COLUMNS = ["suite", "check", "params", "observed", "bound", "passed"]


class SuiteRow(CamelModel):
    """One checked item of a sweep."""

    suite: str
    check: str = Field(..., description="What is bounded, e.g. 'frank <= C(n+d,d)'.")
    params: str = Field(..., description="Instance parameters as key=value pairs.")
    observed: str
    bound: str
    passed: bool

    def as_csv(self) -> dict[str, str]:
        return {
            "suite": self.suite,
            "check": self.check,
            "params": self.params,
            "observed": self.observed,
            "bound": self.bound,
            "passed": "pass" if self.passed else "FAIL",
        }


def format_params(**params) -> str:
    return " ".join(f"{key}={value}" for key, value in params.items())


class VerificationSuite(Observable, ABC):
    """
    Interface for all bound sweeps run by `algramsey verify`.

    A suite draws its instances from `seed`, sizes them from `sweep`, and returns one row per check.
    Observers receive ("row", row JSON) after every check.
    """

    title: str = ""
    bound_name: str = ""

    def __init__(self, sweep: SweepConfig | None = None, budgets: Budgets | None = None, seed: int = 0):
        super().__init__()
        self.sweep = sweep or SweepConfig()
        self.budgets = budgets or Budgets()
        self.seed = seed

    @property
    def name(self) -> str:
        return type(self).__module__.rsplit(".", 1)[-1]

    @abstractmethod
    def rows(self):
        """Yield SuiteRow items in a fixed order."""
        raise NotImplementedError

    def run(self) -> list[SuiteRow]:
        collected = []
        for row in self.rows():
            collected.append(row)
            self._notify("row", row.model_dump(by_alias=True))
        return collected

    def row(self, check: str, params: str, observed, bound, passed: bool) -> SuiteRow:
        return SuiteRow(
            suite=self.name, check=check, params=params, observed=str(observed), bound=str(bound), passed=bool(passed)
        )
