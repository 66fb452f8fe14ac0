"""Verification certificates: the per-check records every ``verify_*`` function returns."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    """One compared quantity.

    ``tolerance`` is None for exact (integer / rational) comparisons.
    """

    case: dict[str, Any]
    expected: Any
    actual: Any
    passed: bool
    tolerance: float | None = None

    @property
    def exact(self) -> bool:
        return self.tolerance is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "case": _jsonable(self.case),
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "exact": self.exact,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class Certificate:
    """Outcome of verifying one identity for one parameter set.

    Truthy iff every check passed. ``info`` holds auxiliary values (targets, gaps,
    local factors) that are reported but not themselves pass/fail.
    """

    equation: str
    params: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def add(self, case, expected, actual, *, tolerance=None, passed=None) -> bool:
        if passed is None:
            if tolerance is None:
                passed = expected == actual
            else:
                passed = abs(expected - actual) <= tolerance
        self.checks.append(Check(dict(case), expected, actual, bool(passed), tolerance))
        return bool(passed)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "equation": self.equation,
            "params": _jsonable(self.params),
            "passed": self.passed,
            "info": _jsonable(self.info),
            "checks": [c.to_dict() for c in self.checks],
        }


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if hasattr(value, "__int__") and not hasattr(value, "denominator"):
        return int(value)
    return str(value)
