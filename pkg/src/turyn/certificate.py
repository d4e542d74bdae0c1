"""Line-oriented check reports shared by the builders and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

# how the expected value of a check is known
CLOSED_FORM = "closed-form"   # a stated formula or published count
ENUMERATION = "enumeration"   # an independent exhaustive computation
DEFINITION = "definition"     # holds by construction


@dataclass(frozen=True)
class Check:
    name: str
    expected: Any
    computed: Any
    basis: str = CLOSED_FORM
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"check: {self.name} expected={_fmt(self.expected)} computed={_fmt(self.computed)} [{self.basis}] {status}"
        if self.note:
            text += f"  # {self.note}"
        return text


def _fmt(value: Any) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}:{v}" for k, v in sorted(value.items())) + "}"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    return str(value)


@dataclass
class Certificate:
    subject: str
    facts: list[tuple[str, Any]] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    def fact(self, key: str, value: Any) -> None:
        self.facts.append((key, value))

    def check(self, name: str, expected: Any, computed: Any, basis: str = CLOSED_FORM, note: str = "") -> bool:
        c = Check(name, expected, computed, basis, note)
        self.checks.append(c)
        return c.passed

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        out = [f"subject: {self.subject}"]
        out += [f"{k}: {_fmt(v)}" for k, v in self.facts]
        out += [c.line() for c in self.checks]
        out.append(f"status: {'PASS' if self.ok else 'FAIL'}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
