"""Validation reports.

Checkers never raise on mathematical violations; they return a ``Report``
listing one ``CheckResult`` per verified condition, each with the witnesses
(basis pairs, triples, offending components) that locate the failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    detail: str = ""
    informational: bool = False

    def to_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed, "witnesses": list(self.witnesses)}
        if self.detail:
            d["detail"] = self.detail
        if self.informational:
            d["informational"] = True
        return d


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, name, passed, witnesses=None, detail="", informational=False) -> CheckResult:
        res = CheckResult(name, bool(passed), list(witnesses or []), detail, informational)
        self.checks.append(res)
        return res

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}
