"""Pass/fail records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .linalg import ExactMatrix, fraction_str


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: Any = None

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = to_jsonable(self.witness)
        if self.detail is not None:
            out["detail"] = to_jsonable(self.detail)
        return out


def matrix_check(name: str, got: ExactMatrix, want: ExactMatrix) -> Check:
    """Exact equality with the first differing entry (1-based) as witness."""
    if got.shape != want.shape:
        return Check(name, False, {"shape": [list(got.shape), list(want.shape)]})
    diff = got.first_difference(want)
    if diff is None:
        return Check(name, True)
    i, j, a, b = diff
    return Check(name, False, {"row": i + 1, "col": j + 1, "got": a, "expected": b})


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            **({"data": to_jsonable(self.data)} if self.data else {}),
        }


def to_jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in x]
    try:
        import numpy as np

        if isinstance(x, np.generic):
            return x.item()
    except ImportError:  # pragma: no cover
        pass
    return str(x)
