"""Report-valued verification results and their JSON encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .rational import RatMat

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


def encode(obj: Any) -> Any:
    """Turn exact objects into plain JSON values.

    Rationals become ``[num, den]`` pairs so nothing is ever written as a float.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, RatMat):
        return {
            "rows": obj.shape[0],
            "cols": obj.shape[1],
            "entries": [[encode(x) for x in r] for r in obj.rows],
        }
    if isinstance(obj, bytes):
        return obj.decode()
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return [encode(x) for x in sorted(obj)]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot encode {type(obj).__name__}")


@dataclass
class Check:
    name: str
    passed: bool
    witness: dict | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "status": PASS if self.passed else FAIL}
        if self.detail:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = encode(self.witness)
        return d


@dataclass
class Report:
    """An ordered list of checks; passes iff every check passes."""

    name: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness: dict | None = None, detail: str = "") -> Check:
        c = Check(name, bool(passed), witness, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "status": PASS if self.passed else FAIL,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.data:
            d["data"] = encode(self.data)
        return d
