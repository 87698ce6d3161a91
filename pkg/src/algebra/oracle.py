from __future__ import annotations

from typing import Sequence

from algebra.element import Element, combine
from algebra.signature import AlgebraSignature, Monomial


def monomial_word(mono: Monomial) -> list[int]:
    """Letters of a normal-form monomial, each generator index repeated by its exponent."""
    return [i for i, e in enumerate(mono) for _ in range(e)]


def normal_order_word(sig: AlgebraSignature, word: Sequence[int]) -> dict[Monomial, int]:
    """
    Normal form of a word in the generators by adjacent swaps only: y_i x_i
    becomes x_i y_i - 1, every other out-of-order pair simply commutes.
    """
    rewrite = set(sig.rewrite_pairs)
    result: dict[Monomial, int] = {}
    pending = [(1, list(word))]
    while pending:
        coeff, letters = pending.pop()
        for k in range(len(letters) - 1):
            left, right = letters[k], letters[k + 1]
            if left <= right:
                continue
            swapped = letters[:k] + [right, left] + letters[k + 2:]
            pending.append((coeff, swapped))
            if (right, left) in rewrite:
                pending.append((-coeff, letters[:k] + letters[k + 2:]))
            break
        else:
            mono = [0] * sig.size
            for letter in letters:
                mono[letter] += 1
            key = tuple(mono)
            result[key] = result.get(key, 0) + coeff
    return {m: c for m, c in result.items() if c}


def oracle_product(f: Element, g: Element) -> Element:
    """f * g computed letter by letter through normal_order_word."""
    f._check(g)
    sig = f.signature
    parts, coeffs = [], []
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            expanded = normal_order_word(sig, monomial_word(m1) + monomial_word(m2))
            parts.append(Element(sig, expanded))
            coeffs.append(c1 * c2)
    if not parts:
        return Element.zero(sig)
    return combine(coeffs, parts)
