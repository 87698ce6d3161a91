from __future__ import annotations

from algebra.exception import AlgebraError


class ExpressionError(AlgebraError):
    """Raised for text that does not describe an element of the signature."""


class ExpressionSyntaxError(ExpressionError):
    @property
    def position(self) -> int | None:
        return self.context.get("position")


class UnknownSymbol(ExpressionError):
    pass


class BadExponent(ExpressionError):
    pass
