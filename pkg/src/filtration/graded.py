from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

from algebra.element import Element, multiply
from filtration.exception import InfiniteGradedPiece
from filtration.weights import WeightFiltration, homogeneous_monomials, tensor_weights, validate_filtration

logger = logging.getLogger(__name__)

UNBOUNDED = math.inf

Dimension = int | float


def graded_piece_dimensions(w: WeightFiltration, cap: int) -> list[Dimension]:
    """
    dim gr_i for i = 0..cap. A piece that contains a nonzero monomial and is
    closed under a weight 0 generator is UNBOUNDED.
    """
    validate_filtration(w)
    sig = w.signature
    flat = [i for i, weight in enumerate(w.weights) if weight == 0]
    graded = [i for i in range(sig.size) if i not in flat]
    dims: list[Dimension] = [0] * (cap + 1)
    # positive weights bound the total degree by the weight
    for mono in sig.iter_monomials_in(graded, cap):
        weight = w.weight(mono)
        if weight <= cap:
            dims[weight] += 1
    if flat:
        dims = [UNBOUNDED if d else 0 for d in dims]
    return dims


def graded_dimensions(w: WeightFiltration, cap: int) -> list[int]:
    """dim gr_i for i = 0..cap, counted over the normal-form basis."""
    validate_filtration(w)
    for g, weight in zip(w.signature.generators, w.weights):
        if weight == 0:
            raise InfiniteGradedPiece(
                f"Generator {g.name} has weight 0, so gr_0 is infinite dimensional.",
                hint="Graded dimensions need positive weights on every generator.",
                context={"generator": g.name},
            )
    return [int(d) for d in graded_piece_dimensions(w, cap)]


def dimension_text(d: Dimension) -> str | int:
    return "unbounded" if d == UNBOUNDED else int(d)


def _times(a: Dimension, b: Dimension) -> Dimension:
    return 0 if not a or not b else a * b


def convolve(a: list[Dimension], b: list[Dimension], cap: int) -> list[Dimension]:
    return [sum(_times(a[j], b[i - j]) for j in range(i + 1)) for i in range(cap + 1)]


@dataclass(frozen=True)
class ConvolutionRow:
    degree: int
    tensor: Dimension
    convolution: Dimension

    @property
    def ok(self) -> bool:
        return self.tensor == self.convolution


@dataclass
class ConvolutionReport:
    left: str
    right: str
    cap: int
    rows: list[ConvolutionRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)

    def toJSON(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "cap": self.cap,
            "ok": self.ok,
            "rows": [
                {
                    "degree": r.degree,
                    "tensor": dimension_text(r.tensor),
                    "convolution": dimension_text(r.convolution),
                    "ok": r.ok,
                }
                for r in self.rows
            ],
        }


def gr_dimension_check(wa: WeightFiltration, wb: WeightFiltration, cap: int) -> ConvolutionReport:
    """
    Compare dim gr_H(A (x) B)_i, counted directly on the tensor product, with
    the convolution of the factor dimensions.
    """
    left = graded_piece_dimensions(wa, cap)
    right = graded_piece_dimensions(wb, cap)
    tensor = graded_piece_dimensions(tensor_weights(wa, wb), cap)
    expected = convolve(left, right, cap)
    report = ConvolutionReport(wa.signature.text(), wb.signature.text(), cap)
    for i in range(cap + 1):
        report.rows.append(ConvolutionRow(i, tensor[i], expected[i]))
    logger.info("gr check %s x %s up to %d: %s", report.left, report.right, cap, "pass" if report.ok else "FAIL")
    return report


@dataclass
class GradedReport:
    algebra: str
    weights: tuple[int, ...]
    dims: list[int]
    domain_samples: int = 0
    zero_products: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.zero_products

    def toJSON(self) -> dict:
        return {
            "algebra": self.algebra,
            "weights": list(self.weights),
            "dims": self.dims,
            "domain_samples": self.domain_samples,
            "zero_products": [list(p) for p in self.zero_products],
            "ok": self.ok,
        }


def _random_homogeneous(w: WeightFiltration, degree: int, rng: random.Random) -> Element:
    sig = w.graded_signature
    terms = {m: rng.randint(1, 9) for m in homogeneous_monomials(w, degree)}
    return Element(sig, terms)


def graded_report(w: WeightFiltration, cap: int, samples: int = 3, seed: int = 0) -> GradedReport:
    """Graded dimensions plus a domain check on random homogeneous pairs."""
    dims = graded_dimensions(w, cap)
    report = GradedReport(w.signature.text(), w.weights, dims)
    rng = random.Random(seed)
    for a in range(cap + 1):
        for b in range(cap + 1 - a):
            for _ in range(samples):
                f = _random_homogeneous(w, a, rng)
                g = _random_homogeneous(w, b, rng)
                if f.is_zero() or g.is_zero():
                    continue
                report.domain_samples += 1
                if multiply(f, g).is_zero():
                    report.zero_products.append((a, b))
    return report
