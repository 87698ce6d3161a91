from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property

from algebra.element import NEG_INFINITY, Element
from algebra.exception import ZeroElement
from algebra.signature import AlgebraSignature, AtomKind, Monomial
from filtration.exception import BadWeights, InvertibleNotDegreeZero, NegativeWeight

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightFiltration:
    """
    F_i is spanned by the normal-form monomials whose weight, the weighted sum
    of exponents, is at most i.
    """

    signature: AlgebraSignature
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != self.signature.size:
            raise BadWeights(
                f"{len(self.weights)} weights for {self.signature.size} generators.",
                hint="Give one weight per generator, in generator order.",
                context={"algebra": self.signature.text(), "weights": self.weights},
            )

    @staticmethod
    def trivial(sig: AlgebraSignature) -> "WeightFiltration":
        return WeightFiltration(sig, (0,) * sig.size)

    @staticmethod
    def bernstein(sig: AlgebraSignature) -> "WeightFiltration":
        """Weight 1 on every generator except the invertible ones."""
        return WeightFiltration(sig, tuple(0 if g.invertible else 1 for g in sig.generators))

    @staticmethod
    def parse(sig: AlgebraSignature, text: str) -> "WeightFiltration":
        """`bernstein`, `standard`, `trivial` or a comma list of integers."""
        spelled = text.strip().lower()
        if spelled in ("bernstein", "standard"):
            return WeightFiltration.bernstein(sig)
        if spelled == "trivial":
            return WeightFiltration.trivial(sig)
        try:
            weights = tuple(int(w) for w in spelled.split(","))
        except ValueError:
            raise BadWeights(
                f"Cannot read weights '{text}'.",
                hint="Use 'bernstein', 'trivial' or a comma separated list like 1,0.",
            ) from None
        return WeightFiltration(sig, weights)

    def weight(self, mono: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, mono))

    def text(self) -> str:
        return ",".join(str(w) for w in self.weights)

    @cached_property
    def graded_signature(self) -> AlgebraSignature:
        """
        Signature of gr: a Weyl atom whose pairs all have positive total weight
        loses its commutation correction.
        """
        atoms = []
        for factor, atom in enumerate(self.signature.atoms):
            if atom.kind == AtomKind.WEYL:
                offset = self.signature.offset(factor)
                w = self.weights[offset:offset + atom.width]
                positive = all(w[2 * k] + w[2 * k + 1] >= 1 for k in range(atom.rank))
                atom = replace(atom, graded=positive)
            atoms.append(atom)
        return self.signature.with_atoms(atoms)


def validate_filtration(w: WeightFiltration) -> WeightFiltration:
    """
    Check the filtration axioms. Nonnegative weights make every Weyl rewrite
    weight-nonincreasing, so only signs and invertible generators need care.
    """
    for g, weight in zip(w.signature.generators, w.weights):
        if weight < 0:
            raise NegativeWeight(
                f"Generator {g.name} has negative weight {weight}.",
                context={"generator": g.name, "weight": weight},
            )
        if g.invertible and weight != 0:
            raise InvertibleNotDegreeZero(
                f"Invertible generator {g.name} has weight {weight}.",
                console_message=(
                    f"Invertible generator {g.name} has weight {weight}; since "
                    f"1 = {g.name}*{g.name}^-1, its leading form would have to be a unit of positive degree."
                ),
                hint="Give every Laurent generator weight 0.",
                context={"generator": g.name, "weight": weight},
            )
    logger.debug("Filtration (%s) on %s is valid", w.text(), w.signature.text())
    return w


def weight_degree(w: WeightFiltration, f: Element) -> int | float:
    """Smallest i with f in F_i; NEG_INFINITY for zero."""
    if f.is_zero():
        return NEG_INFINITY
    return max(w.weight(m) for m in f.terms)


def leading_form(w: WeightFiltration, f: Element) -> Element:
    """The top-weight terms of f, as an element of the graded signature."""
    if f.is_zero():
        raise ZeroElement("The zero element has no leading form.")
    top = weight_degree(w, f)
    return Element(w.graded_signature, {m: c for m, c in f.terms.items() if w.weight(m) == top})


def tensor_weights(wa: WeightFiltration, wb: WeightFiltration) -> WeightFiltration:
    """Weights on A (x) B with H_i the span of pure tensors of combined weight <= i."""
    return WeightFiltration(wa.signature.tensor(wb.signature), wa.weights + wb.weights)


def homogeneous_monomials(w: WeightFiltration, degree: int) -> list[Monomial]:
    return [m for m in w.signature.monomials(degree) if w.weight(m) == degree]
