from algramsey.suites._base import SuiteRow, VerificationSuite
from algramsey.suites._registry import get_suite, get_suites, register
