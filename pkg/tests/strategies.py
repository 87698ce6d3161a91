"""Shared hypothesis strategies for elements of small signatures."""
from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import strategies as st

ROOT = Path(__file__).resolve().parents[1]
SRC_DIR = ROOT / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from algebra.element import Element
from algebra.signature import AlgebraSignature

POLY_2 = AlgebraSignature.from_text("poly:2")
WEYL_1 = AlgebraSignature.from_text("weyl:1")
WEYL_2 = AlgebraSignature.from_text("weyl:2")
MIXED = AlgebraSignature.from_text("poly:1 x weyl:1")
LAURENT_2 = AlgebraSignature.from_text("laurent:2")


def scalars(max_numerator: int = 9, max_denominator: int = 4):
    return st.fractions(
        min_value=-max_numerator, max_value=max_numerator, max_denominator=max_denominator
    )


def monomials(sig: AlgebraSignature, max_degree: int = 3):
    if sig.laurent_variables:
        return st.tuples(*[st.integers(-3, 3) for _ in range(sig.size)])
    return st.sampled_from(sig.monomials(max_degree))


def elements(sig: AlgebraSignature, max_degree: int = 3, max_terms: int = 4):
    return st.dictionaries(monomials(sig, max_degree), scalars(), max_size=max_terms).map(
        lambda terms: Element(sig, terms)
    )


def nonzero_elements(sig: AlgebraSignature, max_degree: int = 3, max_terms: int = 4):
    return elements(sig, max_degree, max_terms).filter(lambda f: not f.is_zero())


def nonscalar_elements(sig: AlgebraSignature, max_degree: int = 3, max_terms: int = 4):
    return elements(sig, max_degree, max_terms).filter(lambda f: not f.is_scalar())
