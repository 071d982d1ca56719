from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of one verification suite."""

    name: str
    passed: bool = True
    checked: int = 0
    counterexample: object = None
    details: dict = field(default_factory=dict)

    def fail(self, counterexample):
        if self.passed:
            self.passed = False
            self.counterexample = counterexample

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = f"{status}\t{self.name}\tchecked={self.checked}"
        if not self.passed:
            s += f"\tcounterexample={self.counterexample!r}"
        return s

    def __bool__(self):
        return self.passed
