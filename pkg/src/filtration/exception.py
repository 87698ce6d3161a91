from __future__ import annotations

from algebra.exception import AlgebraError


class FiltrationError(AlgebraError):
    pass


class BadWeights(FiltrationError):
    """The weight list cannot be read or does not fit the signature."""


class InvalidFiltration(FiltrationError):
    pass


class InvertibleNotDegreeZero(InvalidFiltration):
    """An invertible generator carries positive weight."""


class NegativeWeight(InvalidFiltration):
    pass


class InfiniteGradedPiece(FiltrationError):
    pass


class NotContainingOne(FiltrationError):
    pass


class SequenceTooShort(FiltrationError):
    pass
