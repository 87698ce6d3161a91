from __future__ import annotations

from functools import lru_cache
from math import comb, factorial
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from algebra.exception import LengthMismatch, NotInvertible, SignatureMismatch, ZeroElement
from algebra.signature import AlgebraSignature, Monomial

NEG_INFINITY = float("-inf")


@lru_cache(maxsize=1 << 16)
def _monomial_product(
    pairs: tuple[tuple[int, int], ...], left: Monomial, right: Monomial
) -> tuple[tuple[int, Monomial], ...]:
    """
    Normal form of left * right as (integer coefficient, monomial) pairs.

    For each Weyl pair the middle factor y^b x^c is rewritten with
    y^b x^c = sum_k (-1)^k k! C(b,k) C(c,k) x^(c-k) y^(b-k); distinct pairs
    and all other generators commute, so the expansions multiply out.
    """
    expansions: list[tuple[int, list[int]]] = [(1, [a + b for a, b in zip(left, right)])]
    for xi, yi in pairs:
        b, c = left[yi], right[xi]
        if b == 0 or c == 0:
            continue
        grown = []
        for coeff, mono in expansions:
            for k in range(min(b, c) + 1):
                factor = (-1) ** k * factorial(k) * comb(b, k) * comb(c, k)
                shifted = list(mono)
                shifted[xi] -= k
                shifted[yi] -= k
                grown.append((coeff * factor, shifted))
        expansions = grown
    return tuple((coeff, tuple(mono)) for coeff, mono in expansions)


class Element:
    """
    Immutable exact linear combination of normal-form monomials.

    Terms map exponent vectors to nonzero scalars of the signature's field.
    Equality is equality of term maps.
    """

    __slots__ = ("signature", "_terms", "_hash")

    def __init__(self, signature: AlgebraSignature, terms: Mapping[Sequence[int], Any] | None = None) -> None:
        field = signature.field
        canonical: dict[Monomial, Any] = {}
        for mono, coeff in (terms or {}).items():
            mono = signature.check_monomial(mono)
            value = field.coerce(coeff)
            if mono in canonical:
                value = canonical[mono] + value
            canonical[mono] = value
        self.signature = signature
        self._terms = {m: c for m, c in canonical.items() if c}
        self._hash = None

    @classmethod
    def _from_canonical(cls, signature: AlgebraSignature, terms: dict[Monomial, Any]) -> "Element":
        element = cls.__new__(cls)
        element.signature = signature
        element._terms = terms
        element._hash = None
        return element

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, signature: AlgebraSignature) -> "Element":
        return cls._from_canonical(signature, {})

    @classmethod
    def scalar(cls, signature: AlgebraSignature, value: Any) -> "Element":
        c = signature.field.coerce(value)
        return cls._from_canonical(signature, {signature.unit_monomial: c} if c else {})

    @classmethod
    def one(cls, signature: AlgebraSignature) -> "Element":
        return cls.scalar(signature, 1)

    @classmethod
    def generator(cls, signature: AlgebraSignature, ref: str | int) -> "Element":
        gen = signature.generator(ref)
        return cls._from_canonical(signature, {signature.unit(gen.index): signature.field.one})

    @classmethod
    def monomial(cls, signature: AlgebraSignature, mono: Sequence[int], coeff: Any = 1) -> "Element":
        return cls(signature, {tuple(mono): coeff})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Any]:
        return MappingProxyType(self._terms)

    @property
    def field(self):
        return self.signature.field

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(not any(m) for m in self._terms)

    def coefficient(self, mono: Sequence[int]) -> Any:
        return self._terms.get(tuple(mono), self.field.zero)

    def support(self) -> list[Monomial]:
        """Monomials in descending degree-lexicographic order."""
        return sorted(self._terms, key=AlgebraSignature.order_key, reverse=True)

    def sorted_terms(self) -> list[tuple[Monomial, Any]]:
        return [(m, self._terms[m]) for m in self.support()]

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ZeroElement("The zero element has no leading monomial.")
        return max(self._terms, key=AlgebraSignature.order_key)

    def as_monomial(self) -> Monomial | None:
        """The monomial if self is exactly one monomial with coefficient 1."""
        if len(self._terms) != 1:
            return None
        (mono, coeff), = self._terms.items()
        return mono if coeff == self.field.one else None

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Element") -> None:
        if other.signature != self.signature:
            raise SignatureMismatch(
                "Elements belong to different signatures.",
                context={"left": self.signature.text(), "right": other.signature.text()},
            )

    def _lift(self, other: Any) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return other
        return Element.scalar(self.signature, other)

    def scale(self, c: Any) -> "Element":
        c = self.field.coerce(c)
        if not c:
            return Element.zero(self.signature)
        return Element._from_canonical(self.signature, {m: v * c for m, v in self._terms.items()})

    def __add__(self, other: Any) -> "Element":
        return combine([1, 1], [self, self._lift(other)])

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Element":
        return combine([1, -1], [self, self._lift(other)])

    def __rsub__(self, other: Any) -> "Element":
        return combine([1, -1], [self._lift(other), self])

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def __mul__(self, other: Any) -> "Element":
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other: Any) -> "Element":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "Element":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Element.one(self.signature)
        base = self
        while exponent:
            if exponent & 1:
                result = multiply(result, base)
            exponent >>= 1
            if exponent:
                base = multiply(base, base)
        return result

    def is_unit(self) -> bool:
        """Units here are nonzero scalars times monomials in Laurent generators."""
        if len(self._terms) != 1:
            return False
        (mono,) = self._terms
        laurent = set(self.signature.laurent_variables)
        return all(e == 0 or i in laurent for i, e in enumerate(mono))

    def inverse(self) -> "Element":
        if not self.is_unit():
            raise NotInvertible(
                "Only scalar multiples of Laurent monomials are invertible.",
                context={"element": str(self)},
            )
        (mono, coeff), = self._terms.items()
        return Element._from_canonical(
            self.signature, {tuple(-e for e in mono): self.field.inverse(coeff)}
        )

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Element):
            return self.signature == other.signature and self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            key = self.field.key
            self._hash = hash(
                (self.signature, frozenset((m, key(c)) for m, c in self._terms.items()))
            )
        return self._hash

    def __str__(self) -> str:
        from expression.printer import format_element

        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({self.signature.text()}: {self})"


def multiply(f: Element, g: Element) -> Element:
    """Exact product of f and g in normal form."""
    f._check(g)
    sig = f.signature
    pairs = sig.rewrite_pairs
    field = sig.field
    acc: dict[Monomial, Any] = {}
    for m1, c1 in f._terms.items():
        for m2, c2 in g._terms.items():
            c12 = c1 * c2
            for k, mono in _monomial_product(pairs, m1, m2):
                value = c12 if k == 1 else c12 * field(k)
                acc[mono] = acc[mono] + value if mono in acc else value
    return Element._from_canonical(sig, {m: c for m, c in acc.items() if c})


def combine(coeffs: Sequence[Any], elems: Sequence[Element]) -> Element:
    """The linear combination sum coeffs[i] * elems[i], canonicalized."""
    if len(coeffs) != len(elems):
        raise LengthMismatch(
            f"{len(coeffs)} coefficients for {len(elems)} elements.",
            context={"coefficients": len(coeffs), "elements": len(elems)},
        )
    if not elems:
        raise LengthMismatch("Cannot combine an empty list without a signature.")
    first = elems[0]
    for e in elems[1:]:
        first._check(e)
    field = first.field
    acc: dict[Monomial, Any] = {}
    for coeff, element in zip(coeffs, elems):
        c = field.coerce(coeff)
        if not c:
            continue
        for mono, value in element._terms.items():
            term = value * c
            acc[mono] = acc[mono] + term if mono in acc else term
    return Element._from_canonical(first.signature, {m: v for m, v in acc.items() if v})


def linear_sum(terms: Iterable[tuple[Any, Element]], signature: AlgebraSignature) -> Element:
    pairs = list(terms)
    if not pairs:
        return Element.zero(signature)
    return combine([c for c, _ in pairs], [e for _, e in pairs])


def commutator(f: Element, g: Element) -> Element:
    """f*g - g*f."""
    return combine([1, -1], [multiply(f, g), multiply(g, f)])


def is_central(f: Element) -> bool:
    """True iff f commutes with every generator of its signature."""
    sig = f.signature
    return all(commutator(f, Element.generator(sig, g.index)).is_zero() for g in sig.generators)


def total_degree(f: Element) -> int | float:
    """Largest sum of (absolute) exponents over the terms; NEG_INFINITY for zero."""
    if f.is_zero():
        return NEG_INFINITY
    return max(AlgebraSignature.degree(m) for m in f._terms)


def partial_degree(f: Element, gen: str | int) -> int:
    """Largest exponent of `gen` across the terms of f."""
    if f.is_zero():
        raise ZeroElement(
            "The zero element has no partial degree.",
            context={"generator": gen},
        )
    index = f.signature.generator(gen).index
    return max(m[index] for m in f._terms)
