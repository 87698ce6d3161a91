from __future__ import annotations

from typing import Any, Mapping

from algebra.element import Element, combine, total_degree
from algebra.exception import SignatureMismatch
from algebra.signature import AlgebraSignature, Monomial
from closure.exception import ClosureError, DegreeExceedsCap

Provenance = dict[int, Any]


class SpanBasis:
    """
    Reduced echelon basis of a subspace of elements of total degree <= cap.

    Each row is normalized so that its degree-lexicographic leading monomial
    (the pivot) has coefficient 1 and no other row mentions that monomial.
    With `track_provenance`, every row also remembers the linear combination
    of certificate steps it equals.
    """

    def __init__(self, signature: AlgebraSignature, cap: int | None, track_provenance: bool = False) -> None:
        self.signature = signature
        self.cap = cap
        self.track_provenance = track_provenance
        self._rows: dict[Monomial, Element] = {}
        self._provenance: dict[Monomial, Provenance] = {}

    @property
    def dimension(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[Monomial]:
        """Pivot monomials in ascending degree-lexicographic order."""
        return sorted(self._rows, key=AlgebraSignature.order_key)

    def rows(self) -> list[Element]:
        return [self._rows[p] for p in self.pivots]

    def row(self, pivot: Monomial) -> Element:
        return self._rows[pivot]

    def provenance(self, pivot: Monomial) -> Provenance:
        return dict(self._provenance.get(pivot, {}))

    def _check(self, f: Element) -> None:
        if f.signature != self.signature:
            raise SignatureMismatch(
                "Element and basis belong to different signatures.",
                context={"basis": self.signature.text(), "element": f.signature.text()},
            )
        if self.cap is not None and total_degree(f) > self.cap:
            raise DegreeExceedsCap(
                f"Element of degree {total_degree(f)} exceeds the cap {self.cap}.",
                context={"cap": self.cap, "element": str(f)},
            )

    def coordinates(self, f: Element) -> dict[Monomial, Any]:
        return {m: c for m, c in f.terms.items() if m in self._rows}

    def reduce(self, f: Element) -> tuple[Element, dict[Monomial, Any]]:
        """(f minus its projection onto the span, coefficient per pivot)."""
        self._check(f)
        coords = self.coordinates(f)
        if not coords:
            return f, coords
        pivots = list(coords)
        residual = combine(
            [1] + [-coords[p] for p in pivots],
            [f] + [self._rows[p] for p in pivots],
        )
        return residual, coords

    def contains(self, f: Element) -> bool:
        return self.reduce(f)[0].is_zero()

    def insert(self, f: Element, provenance: Mapping[int, Any] | None = None) -> Element | None:
        """
        Add f to the span. Returns the new normalized row, or None when f was
        already in the span.
        """
        residual, coords = self.reduce(f)
        if residual.is_zero():
            return None
        field = self.signature.field
        pivot = residual.leading_monomial()
        scale = field.inverse(residual.coefficient(pivot))
        row = residual.scale(scale)

        row_prov: Provenance = {}
        if self.track_provenance:
            if provenance is None:
                raise ClosureError("Provenance tracking needs the derivation of every inserted element.")
            acc: dict[int, Any] = {k: field.coerce(v) for k, v in provenance.items()}
            for p, c in coords.items():
                for step, v in self._provenance[p].items():
                    acc[step] = acc.get(step, field.zero) - c * v
            row_prov = {k: v * scale for k, v in acc.items() if v}

        for other, existing in list(self._rows.items()):
            c = existing.coefficient(pivot)
            if not c:
                continue
            self._rows[other] = combine([1, -c], [existing, row])
            if self.track_provenance:
                merged = dict(self._provenance[other])
                for step, v in row_prov.items():
                    merged[step] = merged.get(step, field.zero) - c * v
                self._provenance[other] = {k: v for k, v in merged.items() if v}

        self._rows[pivot] = row
        if self.track_provenance:
            self._provenance[pivot] = row_prov
        return row

    def express(self, f: Element) -> Provenance:
        """Step combination equal to f, for f in the span of a tracked basis."""
        if not self.track_provenance:
            raise ClosureError("This basis does not track provenance.")
        residual, coords = self.reduce(f)
        if not residual.is_zero():
            raise ClosureError(f"{f} is not in the span.", context={"element": str(f)})
        field = self.signature.field
        acc: dict[int, Any] = {}
        for p, c in coords.items():
            for step, v in self._provenance[p].items():
                acc[step] = acc.get(step, field.zero) + c * v
        return {k: v for k, v in sorted(acc.items()) if v}


def reduce_against(basis: SpanBasis, f: Element) -> tuple[Element, tuple[Any, ...]]:
    """Residual of f and its coordinates along the rows in ascending pivot order."""
    residual, coords = basis.reduce(f)
    field = basis.signature.field
    return residual, tuple(coords.get(p, field.zero) for p in basis.pivots)
