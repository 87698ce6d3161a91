from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence

from sympy import Rational

from algebra import linalg
from algebra.element import Element, linear_sum
from algebra.signature import AlgebraSignature
from expression.parser import parse_element
from morphism.endomap import EndoMap
from morphism.exception import BadParameters, BadPolynomial, IndexOutOfRange, SingularMatrix


class AutFamily(str, Enum):
    SHIFT = "shift"                # g -> g + c
    LINEAR = "linear"              # z -> M z + t on the polynomial variables
    WEYL_SCALING = "weyl-scaling"  # x_i -> c x_i, y_i -> y_i / c
    PERMUTATION = "permutation"    # f_sigma
    WEYL_LINEAR = "weyl-linear"    # phi_M, y-side by (M^-1)^T
    WEYL_SWAP = "weyl-swap"        # tau_i: x_i -> y_i, y_i -> -x_i
    ALPHA_H = "alpha-h"            # y_i -> y_i + h(x_i)
    BETA_IC = "beta-ic"            # x_i -> x_i + c y_i
    TRIANGULAR = "triangular"      # z_i -> z_i + h(other polynomial variables)
    TENSOR_LIFT = "tensor-lift"    # inner map on one factor, identity elsewhere


def _rational(value: Any) -> Rational:
    if isinstance(value, Rational):
        return value
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, (int, str)):
        return Rational(value)
    raise BadParameters(f"Cannot read {value!r} as a rational scalar.")


@dataclass(frozen=True)
class AutFamilyParams:
    """
    Parameters of a named automorphism family. Indices are 1-based: `index`
    counts Weyl pairs (or polynomial variables for families acting on them),
    `factor` counts tensor factors.
    """

    family: AutFamily
    index: int | None = None
    generator: str | None = None
    scalar: Rational | None = None
    matrix: tuple[tuple[Rational, ...], ...] | None = None
    translation: tuple[Rational, ...] | None = None
    polynomial: str | None = None
    permutation: tuple[int, ...] | None = None
    factor: int | None = None
    inner: "AutFamilyParams | None" = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", AutFamily(self.family))
        if self.scalar is not None:
            object.__setattr__(self, "scalar", _rational(self.scalar))
        if self.matrix is not None:
            object.__setattr__(
                self, "matrix", tuple(tuple(_rational(v) for v in row) for row in self.matrix)
            )
        if self.translation is not None:
            object.__setattr__(self, "translation", tuple(_rational(v) for v in self.translation))
        if self.permutation is not None:
            object.__setattr__(self, "permutation", tuple(int(v) for v in self.permutation))

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if f.name == "family":
                data[f.name] = value.value
            elif f.name == "scalar":
                data[f.name] = str(value)
            elif f.name == "matrix":
                data[f.name] = [[str(v) for v in row] for row in value]
            elif f.name == "translation":
                data[f.name] = [str(v) for v in value]
            elif f.name == "permutation":
                data[f.name] = list(value)
            elif f.name == "inner":
                data[f.name] = value.to_json()
            else:
                data[f.name] = value
        return data

    @staticmethod
    def from_json(data: dict[str, Any]) -> "AutFamilyParams":
        kwargs = dict(data)
        try:
            kwargs["family"] = AutFamily(kwargs["family"])
        except (KeyError, ValueError):
            raise BadParameters(f"Unknown automorphism family in {data!r}.") from None
        if "inner" in kwargs:
            kwargs["inner"] = AutFamilyParams.from_json(kwargs["inner"])
        known = {f.name for f in fields(AutFamilyParams)}
        unknown = set(kwargs) - known
        if unknown:
            raise BadParameters(f"Unknown parameter(s) {sorted(unknown)} for {kwargs['family'].value}.")
        return AutFamilyParams(**kwargs)

    def label(self) -> str:
        parts = [
            f"{k}={v}" for k, v in self.to_json().items() if k not in ("family", "inner")
        ]
        if self.inner is not None:
            parts.append(self.inner.label())
        return f"{self.family.value}({', '.join(parts)})"


# -- helpers -----------------------------------------------------------------


def _gen(sig: AlgebraSignature, index: int) -> Element:
    return Element.generator(sig, index)


def _weyl_pair(sig: AlgebraSignature, i: int | None) -> tuple[int, int]:
    i = 1 if i is None else i
    if not 1 <= i <= len(sig.weyl_pairs):
        raise IndexOutOfRange(
            f"Weyl index {i} out of range for {sig.text()}.",
            context={"index": i, "pairs": len(sig.weyl_pairs)},
        )
    return sig.weyl_pairs[i - 1]


def _nonzero_scalar(sig: AlgebraSignature, value: Rational | None, default: int) -> Any:
    c = sig.field.coerce(default if value is None else value)
    if not c:
        raise BadParameters(
            f"Scalar {value if value is not None else default} vanishes in {sig.field.label}.",
            context={"scalar": str(value)},
        )
    return c


def _square(matrix: Sequence[Sequence[Any]] | None, n: int, family: AutFamily) -> Sequence[Sequence[Any]]:
    if matrix is None or len(matrix) != n or any(len(row) != n for row in matrix):
        raise BadParameters(
            f"{family.value} needs an {n}x{n} matrix.",
            context={"size": n},
        )
    return matrix


def _inverse_matrix(sig: AlgebraSignature, matrix: Sequence[Sequence[Any]]) -> list[list[Any]]:
    if not linalg.is_invertible(sig.field, matrix):
        raise SingularMatrix(
            "Matrix is not invertible over the scalar field.",
            context={"matrix": [[str(v) for v in row] for row in matrix], "field": sig.field.label},
        )
    return linalg.invert(sig.field, matrix)


def _linear_form(sig: AlgebraSignature, indices: Sequence[int], coeffs: Sequence[Any], constant: Any = 0) -> Element:
    form = linear_sum(zip(coeffs, (_gen(sig, i) for i in indices)), sig)
    return form + Element.scalar(sig, constant)


def _polynomial(sig: AlgebraSignature, text: str | None, allowed: set[int], what: str) -> Element:
    if text is None:
        raise BadPolynomial(f"{what} needs a polynomial.")
    h = parse_element(text, sig)
    for mono in h.terms:
        if any(e and i not in allowed for i, e in enumerate(mono)):
            allowed_names = ", ".join(sig.generators[i].name for i in sorted(allowed)) or "scalars only"
            raise BadPolynomial(
                f"{what}: polynomial '{text}' leaves the allowed generators.",
                hint=f"Allowed generators: {allowed_names}.",
                context={"polynomial": text},
            )
    return h


def _embed(sig: AlgebraSignature, factor: int, element: Element) -> Element:
    offset = sig.offset(factor)
    width = sig.atoms[factor].width
    terms = {}
    for mono, coeff in element.terms.items():
        full = [0] * sig.size
        full[offset:offset + width] = mono
        terms[tuple(full)] = coeff
    return Element(sig, terms)


# -- family builders ---------------------------------------------------------


def builtin_family(sig: AlgebraSignature, p: AutFamilyParams) -> EndoMap:
    """Build, validate and return the named automorphism with its inverse."""
    images = [_gen(sig, i) for i in range(sig.size)]
    inverse = list(images)
    family = p.family

    if family == AutFamily.SHIFT:
        if p.generator is None:
            raise BadParameters("shift needs a generator.")
        g = sig.generator(p.generator)
        if g.invertible:
            raise BadParameters(
                f"Shifting the invertible generator {g.name} is not an automorphism.",
                context={"generator": g.name},
            )
        c = sig.field.coerce(1 if p.scalar is None else p.scalar)
        images[g.index] = images[g.index] + c
        inverse[g.index] = inverse[g.index] - c

    elif family == AutFamily.LINEAR:
        variables = sig.polynomial_variables
        n = len(variables)
        matrix = _square(p.matrix, n, family)
        shift = p.translation or (0,) * n
        if len(shift) != n:
            raise BadParameters(f"linear needs a translation of length {n}.")
        m_inv = _inverse_matrix(sig, matrix)
        field = sig.field
        for row, var in enumerate(variables):
            images[var] = _linear_form(sig, variables, matrix[row], shift[row])
            back = sum((m_inv[row][j] * field.coerce(shift[j]) for j in range(n)), field.zero)
            inverse[var] = _linear_form(sig, variables, m_inv[row], -back)

    elif family == AutFamily.WEYL_SCALING:
        xi, yi = _weyl_pair(sig, p.index)
        c = _nonzero_scalar(sig, p.scalar, 2)
        c_inv = sig.field.inverse(c)
        images[xi], images[yi] = images[xi].scale(c), images[yi].scale(c_inv)
        inverse[xi], inverse[yi] = inverse[xi].scale(c_inv), inverse[yi].scale(c)

    elif family == AutFamily.PERMUTATION:
        if sig.weyl_pairs:
            blocks = [list(pair) for pair in sig.weyl_pairs]
        else:
            blocks = [[v] for v in sig.polynomial_variables]
        perm = p.permutation
        if perm is None or sorted(perm) != list(range(1, len(blocks) + 1)):
            raise BadParameters(
                f"permutation needs a rearrangement of 1..{len(blocks)}.",
                context={"permutation": perm},
            )
        for i, target in enumerate(perm):
            for src, dst in zip(blocks[i], blocks[target - 1]):
                images[src] = _gen(sig, dst)
                inverse[dst] = _gen(sig, src)

    elif family == AutFamily.WEYL_LINEAR:
        pairs = sig.weyl_pairs
        n = len(pairs)
        matrix = _square(p.matrix, n, family)
        m_inv = _inverse_matrix(sig, matrix)
        xs = [x for x, _ in pairs]
        ys = [y for _, y in pairs]
        for k, (x, y) in enumerate(pairs):
            images[x] = _linear_form(sig, xs, matrix[k])
            # N = (M^-1)^T
            images[y] = _linear_form(sig, ys, [m_inv[l][k] for l in range(n)])
            inverse[x] = _linear_form(sig, xs, m_inv[k])
            inverse[y] = _linear_form(sig, ys, [matrix[l][k] for l in range(n)])

    elif family == AutFamily.WEYL_SWAP:
        xi, yi = _weyl_pair(sig, p.index)
        images[xi], images[yi] = _gen(sig, yi), -_gen(sig, xi)
        inverse[xi], inverse[yi] = -_gen(sig, yi), _gen(sig, xi)

    elif family == AutFamily.ALPHA_H:
        xi, yi = _weyl_pair(sig, p.index)
        h = _polynomial(sig, p.polynomial, {xi}, "alpha-h")
        images[yi] = images[yi] + h
        inverse[yi] = inverse[yi] - h

    elif family == AutFamily.BETA_IC:
        xi, yi = _weyl_pair(sig, p.index)
        c = _nonzero_scalar(sig, p.scalar, 1)
        images[xi] = images[xi] + _gen(sig, yi).scale(c)
        inverse[xi] = inverse[xi] - _gen(sig, yi).scale(c)

    elif family == AutFamily.TRIANGULAR:
        if p.generator is None:
            raise BadParameters("triangular needs a generator.")
        g = sig.generator(p.generator)
        if g.index not in sig.polynomial_variables:
            raise BadParameters(
                f"triangular acts on polynomial variables, not {g.name}.",
                context={"generator": g.name},
            )
        others = set(sig.polynomial_variables) - {g.index}
        h = _polynomial(sig, p.polynomial, others, "triangular")
        images[g.index] = images[g.index] + h
        inverse[g.index] = inverse[g.index] - h

    elif family == AutFamily.TENSOR_LIFT:
        if p.factor is None or p.inner is None:
            raise BadParameters("tensor-lift needs a factor and inner parameters.")
        if not 1 <= p.factor <= len(sig.atoms):
            raise IndexOutOfRange(
                f"Factor {p.factor} out of range for {sig.text()}.",
                context={"factor": p.factor},
            )
        factor = p.factor - 1
        inner = builtin_family(sig.factor_signature(factor), p.inner)
        offset = sig.offset(factor)
        for k, (img, inv) in enumerate(zip(inner.images, inner.inverse_images)):
            images[offset + k] = _embed(sig, factor, img)
            inverse[offset + k] = _embed(sig, factor, inv)

    else:  # pragma: no cover - the enum is closed
        raise BadParameters(f"Unsupported family {family}.")

    return EndoMap(p.label(), sig, images, inverse, params=p).validated()
