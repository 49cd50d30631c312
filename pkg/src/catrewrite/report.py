from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: object = None, detail: str = "") -> Check:
        c = Check(name, bool(passed), None if passed else witness, detail)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": _plain(c.witness), "detail": c.detail}
                for c in self.checks
            ],
        }

    def render(self) -> str:
        width = max([len(c.name) for c in self.checks] + [5])
        lines = [self.title, "-" * max(len(self.title), width + 20)]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            extra = "" if c.passed or c.witness is None else f"  witness={_plain(c.witness)}"
            if c.detail:
                extra += f"  {c.detail}"
            lines.append(f"{c.name:<{width}}  {status}{extra}")
        return "\n".join(lines)


def _plain(value: object) -> object:
    if value is None or isinstance(value, (str, int, bool)):
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)
