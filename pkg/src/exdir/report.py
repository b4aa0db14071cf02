"""Pass/fail reports shared by the verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def _fmt(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return str(x)


@dataclass
class Check:
    name: str
    ok: bool
    measured: object = None
    threshold: object = None
    where: object = None

    def line(self) -> str:
        s = f"{'PASS' if self.ok else 'FAIL'} {self.name}"
        if self.measured is not None:
            s += f" measured={_fmt(self.measured)}"
        if self.threshold is not None:
            s += f" threshold={_fmt(self.threshold)}"
        if self.where is not None:
            s += f" at={self.where}"
        return s

    def to_dict(self):
        return {"name": self.name, "ok": self.ok, "measured": _fmt(self.measured),
                "threshold": _fmt(self.threshold), "where": _fmt(self.where)}


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, name, ok, measured=None, threshold=None, where=None):
        self.checks.append(Check(name, bool(ok), measured, threshold, where))
        return ok

    def extend(self, other: "Report", prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.measured, c.threshold, c.where))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def names_failed(self):
        return {c.name for c in self.failures()}

    def __str__(self):
        return "\n".join(c.line() for c in self.checks)

    def to_dict(self):
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}
