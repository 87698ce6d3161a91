from __future__ import annotations

from typing import Any, Mapping


class AlgebraError(Exception):
    """Base exception carrying a short message plus console detail and context."""

    def __init__(
        self,
        message: str,
        console_message: str | None = None,
        *,
        hint: str | None = None,
        context: Mapping[str, Any] | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.console_message = console_message or message
        self.hint = hint
        self.context = dict(context or {})


class SignatureMismatch(AlgebraError):
    pass


class LengthMismatch(AlgebraError):
    pass


class ZeroElement(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class UnknownGenerator(AlgebraError):
    pass


class InvalidSignature(AlgebraError):
    pass


class InvalidMonomial(AlgebraError):
    pass
