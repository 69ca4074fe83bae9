import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from core.config import JSON_INDENT, SCHEMA_VERSION


class Status(Enum):
    """Enum for report status types."""

    PASS = "pass"
    FAIL = "fail"
    NO_COLLAPSE = "no-collapse"
    COLLAPSE = "collapse-with-witness"
    SOLVED = "solved"
    NO_SOLUTION = "no-solution"
    UNDECIDED_BUDGET = "undecided-budget"
    INCONSISTENT = "inconsistent"
    REJECTED = "rejected"

    @classmethod
    def is_success(cls, status: str) -> bool:
        """Check if status is a positive verdict."""
        return status in [cls.PASS.value, cls.NO_COLLAPSE.value, cls.SOLVED.value]

    @classmethod
    def is_rejection(cls, status: str) -> bool:
        """Check if status reports a mathematical rejection (exit code 2)."""
        return status in [cls.REJECTED.value, cls.FAIL.value, cls.COLLAPSE.value]

    @classmethod
    def is_decided(cls, status: str) -> bool:
        """Everything except a budget cut-off is a definite answer."""
        return status != cls.UNDECIDED_BUDGET.value

    def label(self, degree: Optional[int] = None) -> str:
        """Wire string; a no-collapse verdict names its truncation degree."""
        if self is Status.NO_COLLAPSE and degree is not None:
            return f"{self.value}-up-to-{degree}"
        return self.value


def _canonical(value: Any) -> Any:
    """Tuples to lists, keys to strings; scalars are already strings."""
    if isinstance(value, dict):
        return {str(k): _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    return value


@dataclass(frozen=True)
class Report:
    command: str
    status: Status
    payload: Dict[str, Any] = field(default_factory=dict)
    messages: List[str] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION
    degree: Optional[int] = None

    @property
    def status_label(self) -> str:
        return self.status.label(self.degree)

    @property
    def exit_code(self) -> int:
        """0 success or negative-but-valid verdict, 2 mathematical rejection."""
        return 2 if Status.is_rejection(self.status.value) else 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "status": self.status_label,
            "messages": list(self.messages),
            **_canonical(self.payload),
        }

    def to_json(self) -> str:
        """Deterministic rendering: sorted keys, fixed indentation."""
        return json.dumps(
            self.to_dict(), indent=JSON_INDENT, sort_keys=True, ensure_ascii=False
        )

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status_label}"]
        lines += [f"  {m}" for m in self.messages]
        for key in sorted(self.payload):
            value = json.dumps(_canonical(self.payload[key]), sort_keys=True)
            lines.append(f"  {key}: {value}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()
