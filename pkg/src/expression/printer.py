from __future__ import annotations

from algebra.element import Element
from algebra.signature import AlgebraSignature, Monomial


def format_monomial(signature: AlgebraSignature, mono: Monomial) -> str:
    """`x1^2*y1` style text; the unit monomial prints as the empty string."""
    parts = []
    for gen, e in zip(signature.generators, mono):
        if e == 0:
            continue
        parts.append(gen.name if e == 1 else f"{gen.name}^{e}")
    return "*".join(parts)


def format_element(f: Element) -> str:
    """
    Canonical text: terms in descending degree-lexicographic order, explicit
    '*', exponents via '^', rational coefficients as a/b, zero as "0".
    """
    if f.is_zero():
        return "0"
    field = f.field
    pieces = []
    for mono, coeff in f.sorted_terms():
        negative, magnitude = field.split_sign(coeff)
        mono_text = format_monomial(f.signature, mono)
        if not mono_text:
            body = magnitude
        elif magnitude == "1":
            body = mono_text
        else:
            body = f"{magnitude}*{mono_text}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)
