from __future__ import annotations

from algebra.exception import AlgebraError


class ClosureError(AlgebraError):
    pass


class DegreeExceedsCap(ClosureError):
    pass


class ScalarSeed(ClosureError):
    pass


class CharacteristicPositive(ClosureError):
    pass


class UnsupportedSignature(ClosureError):
    pass


class SelectionFailed(ClosureError):
    """No variable satisfies the degree-reduction selection rule."""


class InputNotDegreeOne(ClosureError):
    pass


class ZeroLinearPart(ClosureError):
    pass


class SingularSystem(ClosureError):
    pass


class CoverageIncomplete(ClosureError):
    pass


class CertificateFormatError(ClosureError):
    pass
