"""
Exception types and validation reports.

Axiom failures are never raised: checkers collect them into a ValidationReport.
Exceptions are reserved for malformed input, exhausted resource budgets and
violated preconditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class VolutError(Exception):
    """Base class for all volut errors."""


class StructuralError(VolutError, ValueError):
    """Malformed data: dangling ids, missing components, mismatched endpoints."""


class ResourceCapExceeded(VolutError, RuntimeError):
    """A configured size or search budget would be exceeded."""

    def __init__(self, what: str, limit: int, required: int | None = None, log: list[str] | None = None):
        self.what = what
        self.limit = limit
        self.required = required
        self.log = log or []
        needed = f" (needs {required})" if required is not None else ""
        super().__init__(f"{what} exceeds the cap of {limit}{needed}")


class PreconditionError(VolutError, ValueError):
    """An operation's precondition fails; ``witness`` names where."""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: Any = None

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "message": self.message, "witness": jsonable(self.witness)}


@dataclass
class ValidationReport:
    """All violations found by a checker, plus how much was examined."""

    subject: str = ""
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def add(self, kind: str, message: str, witness: Any = None) -> None:
        self.violations.append(Violation(kind, message, witness))

    def merge(self, other: ValidationReport) -> ValidationReport:
        self.violations.extend(other.violations)
        self.checked += other.checked
        self.sampled = self.sampled or other.sampled
        return self

    def witnesses(self, kind: str | None = None) -> list[Any]:
        return [v.witness for v in self.violations if kind is None or v.kind == kind]

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checked": self.checked,
            "sampled": self.sampled,
            "violations": [v.to_dict() for v in self.violations],
        }

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        sampled = ", sampled" if self.sampled else ""
        return f"{self.subject or 'check'}: {status} ({self.checked} checked{sampled})"


def jsonable(value: Any) -> Any:
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)
