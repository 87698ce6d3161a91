from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Mapping, Sequence

from algebra.element import Element, combine, commutator, multiply
from algebra.exception import NotInvertible, SignatureMismatch
from algebra.signature import AlgebraSignature
from morphism.exception import (
    ImageNotInvertible,
    InverseFails,
    MissingImage,
    MorphismError,
    RelationViolated,
    UnvalidatedMap,
)

if TYPE_CHECKING:
    from morphism.families import AutFamilyParams

logger = logging.getLogger(__name__)


class ViolationKind(str, Enum):
    MISSING_IMAGE = "missing-image"
    RELATION = "relation-violated"
    NOT_INVERTIBLE = "not-invertible"
    INVERSE = "inverse-fails"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    generators: tuple[str, ...]
    residual: Element | None = None

    def describe(self) -> str:
        names = ", ".join(self.generators)
        if self.kind == ViolationKind.RELATION:
            return f"relation ({names}) leaves residual {self.residual}"
        if self.kind == ViolationKind.MISSING_IMAGE:
            return f"no image for {names}"
        if self.kind == ViolationKind.NOT_INVERTIBLE:
            return f"image of invertible generator {names} is not a unit"
        return f"declared inverse fails on {names}"


@dataclass
class ValidationReport:
    map_name: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_for_violation(self) -> None:
        if self.ok:
            return
        first = self.violations[0]
        error = {
            ViolationKind.MISSING_IMAGE: MissingImage,
            ViolationKind.RELATION: RelationViolated,
            ViolationKind.NOT_INVERTIBLE: ImageNotInvertible,
            ViolationKind.INVERSE: InverseFails,
        }[first.kind]
        raise error(
            f"{self.map_name} is not a valid endomorphism: {first.describe()}.",
            console_message="; ".join(v.describe() for v in self.violations),
            context={"map": self.map_name, "generators": first.generators},
        )


class EndoMap:
    """
    Endomorphism given by generator images, optionally with declared inverse
    images. Maps built from a family remember their parameters, which is how
    certificates serialize them.
    """

    def __init__(
        self,
        name: str,
        signature: AlgebraSignature,
        images: Mapping[str | int, Element] | Sequence[Element | None],
        inverse_images: Mapping[str | int, Element] | Sequence[Element | None] | None = None,
        params: "AutFamilyParams | None" = None,
    ) -> None:
        self.name = name
        self.signature = signature
        self.images = self._normalize(images)
        self.inverse_images = None if inverse_images is None else self._normalize(inverse_images)
        self.params = params
        self._validated = False

    def _normalize(self, images) -> tuple[Element | None, ...]:
        sig = self.signature
        slots: list[Element | None] = [None] * sig.size
        if isinstance(images, Mapping):
            for ref, image in images.items():
                slots[sig.generator(ref).index] = image
        else:
            if len(images) != sig.size:
                raise MissingImage(
                    f"{self.name}: {len(images)} images for {sig.size} generators.",
                    context={"map": self.name},
                )
            slots = list(images)
        for image in slots:
            if image is not None and image.signature != sig:
                raise SignatureMismatch(
                    f"{self.name}: an image lives in {image.signature.text()}, not {sig.text()}.",
                    context={"map": self.name},
                )
        return tuple(slots)

    @property
    def is_validated(self) -> bool:
        return self._validated

    @property
    def is_automorphism(self) -> bool:
        return self.inverse_images is not None

    def validated(self) -> "EndoMap":
        validate_endomorphism(self).raise_for_violation()
        return self

    def inverse(self) -> "EndoMap":
        if self.inverse_images is None:
            raise MorphismError(f"{self.name} carries no inverse images.")
        return EndoMap(f"{self.name}^-1", self.signature, self.inverse_images, self.images).validated()

    def __call__(self, f: Element) -> Element:
        return apply_endomorphism(self, f)

    def __repr__(self) -> str:
        return f"EndoMap({self.name})"


def substitute(images: Sequence[Element | None], f: Element) -> Element:
    """Homomorphic image of f when generator k is sent to images[k]."""
    sig = f.signature
    powers: dict[tuple[int, int], Element] = {}

    def power(index: int, exponent: int) -> Element:
        key = (index, exponent)
        if key not in powers:
            image = images[index]
            if image is None:
                raise MissingImage(
                    f"No image for {sig.generators[index].name}.",
                    context={"generator": sig.generators[index].name},
                )
            powers[key] = image ** exponent
        return powers[key]

    coeffs, parts = [], []
    for mono, coeff in f.terms.items():
        term = Element.one(sig)
        for index, exponent in enumerate(mono):
            if exponent:
                term = multiply(term, power(index, exponent))
        coeffs.append(coeff)
        parts.append(term)
    if not parts:
        return Element.zero(sig)
    return combine(coeffs, parts)


def validate_endomorphism(m: EndoMap) -> ValidationReport:
    """
    Check that every defining relation of the signature maps to zero and, when
    inverse images are declared, that they invert the map on generators.
    """
    sig = m.signature
    report = ValidationReport(m.name)
    names = [g.name for g in sig.generators]

    for g, image in zip(sig.generators, m.images):
        if image is None:
            report.violations.append(Violation(ViolationKind.MISSING_IMAGE, (g.name,)))
    if not report.ok:
        return report

    for g, image in zip(sig.generators, m.images):
        if g.invertible and not image.is_unit():
            report.violations.append(Violation(ViolationKind.NOT_INVERTIBLE, (g.name,)))

    weyl = set(sig.rewrite_pairs)
    for i in range(sig.size):
        for j in range(i + 1, sig.size):
            expected = 1 if (i, j) in weyl else 0
            residual = commutator(m.images[i], m.images[j]) - expected
            if not residual.is_zero():
                report.violations.append(
                    Violation(ViolationKind.RELATION, (names[i], names[j]), residual)
                )

    if report.ok and m.inverse_images is not None:
        for g in sig.generators:
            target = Element.generator(sig, g.index)
            inverse = m.inverse_images[g.index]
            try:
                forward = None if inverse is None else substitute(m.images, inverse)
                backward = substitute(m.inverse_images, m.images[g.index])
            except (NotInvertible, MissingImage):
                forward = backward = None
            if forward != target or backward != target:
                report.violations.append(Violation(ViolationKind.INVERSE, (g.name,)))

    if report.ok:
        m._validated = True
    else:
        logger.debug("%s rejected: %s", m.name, "; ".join(v.describe() for v in report.violations))
    return report


def apply_endomorphism(m: EndoMap, f: Element) -> Element:
    """Substitute the generator images of a validated map into f."""
    if not m.is_validated:
        raise UnvalidatedMap(
            f"{m.name} has not been validated.",
            hint="Call validate_endomorphism (or EndoMap.validated()) first.",
            context={"map": m.name},
        )
    if f.signature != m.signature:
        raise SignatureMismatch(
            f"{m.name} acts on {m.signature.text()}, element lives in {f.signature.text()}.",
            context={"map": m.name},
        )
    return substitute(m.images, f)


def difference(m: EndoMap, f: Element) -> Element:
    """m(f) - f."""
    return apply_endomorphism(m, f) - f
