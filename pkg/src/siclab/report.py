"""Uniform pass/fail records carried by certificates."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One named boolean check with its numeric evidence."""

    name: str
    passed: bool
    detail: dict

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


@dataclass
class CertReport:
    """A list of checks plus a headline result payload."""

    title: str
    checks: list[Check] = field(default_factory=list)
    results: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, **detail) -> None:
        self.checks.append(Check(name=name, passed=bool(passed), detail=detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]
