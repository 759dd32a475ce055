"""Check reports with a text rendering and a JSON mirror."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Verdict:
    name: str
    passed: bool
    defects: list[str] = field(default_factory=list)
    informational: bool = False


@dataclass
class Report:
    command: str
    verdicts: list[Verdict] = field(default_factory=list)
    results: dict[str, object] = field(default_factory=dict)
    timing: dict[str, float] | None = None

    def check(self, name: str, passed: bool, defects=(), informational: bool = False) -> Verdict:
        v = Verdict(name, bool(passed), [str(d) for d in defects], informational)
        self.verdicts.append(v)
        return v

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.verdicts if not v.informational)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> dict:
        doc = {
            "command": self.command,
            "status": "pass" if self.ok else "fail",
            "exit_code": self.exit_code,
            "verdicts": [
                {"name": v.name, "passed": v.passed, "informational": v.informational, "defects": v.defects}
                for v in self.verdicts
            ],
            "results": self.results,
        }
        if self.timing is not None:
            doc["timing"] = self.timing
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"== {self.command}"]
        for name, value in self.results.items():
            if isinstance(value, list):
                lines.append(f"{name}:")
                lines.extend(f"  [{k + 1}] {x}" for k, x in enumerate(value))
            else:
                lines.append(f"{name}: {value}")
        for v in self.verdicts:
            tag = "PASS" if v.passed else ("INFO" if v.informational else "FAIL")
            lines.append(f"[{tag}] {v.name}")
            lines.extend(f"    {d}" for d in v.defects)
        if self.timing is not None:
            for k, t in self.timing.items():
                lines.append(f"time {k}: {t:.3f}s")
        if self.verdicts:
            lines.append(f"status: {'pass' if self.ok else 'fail'}")
        return "\n".join(lines)
