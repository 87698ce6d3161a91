from __future__ import annotations

from algebra.exception import AlgebraError


class MorphismError(AlgebraError):
    pass


class MissingImage(MorphismError):
    pass


class RelationViolated(MorphismError):
    pass


class InverseFails(MorphismError):
    pass


class ImageNotInvertible(MorphismError):
    pass


class UnvalidatedMap(MorphismError):
    pass


class SingularMatrix(MorphismError):
    pass


class IndexOutOfRange(MorphismError):
    pass


class BadPolynomial(MorphismError):
    pass


class BadParameters(MorphismError):
    pass
