"""Exception hierarchy shared by every cport module.

The CLI maps these onto exit statuses: input problems (``DomainError``,
``ValidationError``) exit 2, ``NullVectorError`` exits 3 and
``UnknownReferenceError`` exits 4.
"""

from __future__ import annotations

from collections.abc import Iterable


class CPortError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(CPortError, ValueError):
    """An argument lies outside the domain of an operation."""


class NullVectorError(DomainError):
    """An operation that needs a non-zero C-Port Vector received a null one."""

    def __init__(self, message: str = "angle undefined for null C-Port Vector") -> None:
        super().__init__(message)


class ValidationError(CPortError):
    """One or more invariant violations, collected rather than fail-fast."""

    def __init__(self, problems: Iterable[str] | str, source: str | None = None) -> None:
        if isinstance(problems, str):
            problems = [problems]
        self.problems: list[str] = list(problems)
        self.source = source
        head = f"{source}: " if source else ""
        if len(self.problems) == 1:
            msg = head + self.problems[0]
        else:
            msg = head + f"{len(self.problems)} problems\n" + "\n".join(
                f"  - {p}" for p in self.problems
            )
        super().__init__(msg)


class ParseError(ValidationError):
    """Input is not syntactically well-formed (bad UTF-8, JSON or CSV shape)."""


class UnknownReferenceError(CPortError, LookupError):
    """A service code, port id or similar reference does not exist."""

