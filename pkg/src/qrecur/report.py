"""Pass/fail reporting shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckItem:
    check: str
    subject: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.check}  {self.subject}"
        if not self.passed and self.detail:
            text += f"  ({self.detail})"
        return text


@dataclass
class CheckReport:
    title: str
    items: list[CheckItem] = field(default_factory=list)

    def add(self, check: str, subject: str, passed: bool, detail: str = "") -> None:
        self.items.append(CheckItem(check, subject, passed, detail))

    def extend(self, other: "CheckReport") -> None:
        self.items.extend(other.items)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.passed]

    def format_lines(self, verbose: bool = False) -> list[str]:
        lines = [f"== {self.title}: {len(self.items)} checks =="]
        for item in self.items:
            if verbose or not item.passed:
                lines.append(item.line())
        n_fail = len(self.failures())
        lines.append(
            f"== {self.title}: "
            + ("all passed ==" if n_fail == 0 else f"{n_fail} FAILED ==")
        )
        return lines
