from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from sympy import Symbol, expand, interpolate

from algebra.element import Element, multiply
from algebra.signature import AlgebraSignature
from closure.span import SpanBasis
from filtration.exception import NotContainingOne, SequenceTooShort
from util.math import finite_differences

logger = logging.getLogger(__name__)

_n = Symbol("n")


@dataclass(frozen=True)
class GrowthReport:
    dims: tuple[int, ...]
    degree: int | None
    polynomial: str | None

    @property
    def verdict(self) -> str:
        if self.degree is None:
            return "sequence too short to detect polynomial growth"
        return f"polynomial growth of degree {self.degree}"

    def toJSON(self) -> dict:
        return {
            "dims": list(self.dims),
            "gk_degree": self.degree,
            "polynomial": self.polynomial,
            "verdict": self.verdict,
        }


def growth_sequence(sig: AlgebraSignature, gens: Sequence[Element], N: int) -> GrowthReport:
    """
    dims[k] = dim V^k for k = 0..N, V the span of `gens`.

    Since 1 is in V, V^k = V^(k-1) + F*V where F spans the rows that first
    appeared in V^(k-1); only that frontier is multiplied out each step.
    """
    probe = SpanBasis(sig, None)
    for g in gens:
        probe.insert(g)
    if not probe.contains(Element.one(sig)):
        raise NotContainingOne(
            "The generating subspace must contain 1.",
            hint="Add 1 to the generators.",
            context={"generators": [str(g) for g in gens]},
        )

    basis = SpanBasis(sig, None)
    frontier = [basis.insert(Element.one(sig))]
    dims = [basis.dimension]
    for k in range(1, N + 1):
        fresh = []
        for f in frontier:
            for g in gens:
                row = basis.insert(multiply(f, g))
                if row is not None:
                    fresh.append(row)
        frontier = fresh
        dims.append(basis.dimension)
        logger.debug("dim V^%d = %d", k, basis.dimension)

    try:
        degree = gk_estimate(dims)
    except SequenceTooShort:
        degree, polynomial = None, None
    else:
        tail = list(range(len(dims) // 2, len(dims)))
        polynomial = str(expand(interpolate([(k, dims[k]) for k in tail], _n)))
    return GrowthReport(tuple(dims), degree, polynomial)


def gk_estimate(dims: Sequence[int]) -> int:
    """
    Smallest d whose (d+1)-th finite differences vanish on the last half of
    the sequence. A candidate d needs at least 2*(d+2) terms.
    """
    dims = list(dims)
    d = 0
    while True:
        if len(dims) < 2 * (d + 2):
            raise SequenceTooShort(
                f"{len(dims)} terms cannot confirm growth degree {d}.",
                hint=f"Provide at least {2 * (d + 2)} terms.",
                context={"length": len(dims), "candidate": d},
            )
        tail = dims[len(dims) // 2:]
        if not any(finite_differences(tail, d + 1)):
            return d
        d += 1
