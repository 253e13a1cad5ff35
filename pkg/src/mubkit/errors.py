"""Exception types and the verification report shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class MubkitError(ValueError):
    """Base class. ``exit_code`` is what the CLI returns when this escapes."""

    exit_code = 1


class InputError(MubkitError):
    """Bad parameters or malformed input (CLI exit code 2)."""

    exit_code = 2


class NonPrime(InputError):
    pass


class NotPrimePower(InputError):
    pass


class SizeCapExceeded(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class WrongCount(InputError):
    pass


class SingularGram(MubkitError):
    pass


class NotOrthogonal(MubkitError):
    pass


class NotUnimodular(MubkitError):
    pass


class ZeroEntry(MubkitError):
    pass


class NotCommuting(MubkitError):
    pass


class NotNormal(MubkitError):
    pass


class DegenerateAfterRetries(MubkitError):
    pass


class NotIndexed(MubkitError):
    pass


class NotNice(MubkitError):
    pass


class VerificationRequired(MubkitError):
    pass


class NotHadamard(MubkitError):
    pass


class BadNet(MubkitError):
    pass


class NotTraceless(MubkitError):
    pass


class NotUnitary(MubkitError):
    pass


class NotDaggerClosed(MubkitError):
    pass


@dataclass
class Report:
    """Outcome of a verification: passes iff ``failures`` is empty.

    ``metrics`` carries the worst observed deviations so callers can print
    them without re-running the check.
    """

    check: str
    failures: list[str] = field(default_factory=list)
    metrics: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def merge(self, other: "Report", prefix: str = "") -> None:
        self.failures.extend(prefix + f for f in other.failures)
        for k, v in other.metrics.items():
            self.metrics[prefix + k] = v

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{self.check}: {status}"]
        for k in sorted(self.metrics):
            lines.append(f"  {k} = {self.metrics[k]}")
        for f in self.failures[:50]:
            lines.append(f"  - {f}")
        if len(self.failures) > 50:
            lines.append(f"  ... {len(self.failures) - 50} more")
        return "\n".join(lines)
