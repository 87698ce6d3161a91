from __future__ import annotations

import re
from fractions import Fraction
from typing import Any

from sympy import Rational
from sympy.ntheory import isprime
from sympy.polys.domains import GF, QQ

from algebra.exception import InvalidSignature, NotInvertible

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class ScalarField:
    """
    Exact coefficient field of a signature: Q in characteristic 0, F_p for a
    prime p. Elements are the underlying sympy domain elements; this wrapper
    only adds conversion, printing and hashing helpers.
    """

    def __init__(self, characteristic: int = 0) -> None:
        if characteristic < 0 or (characteristic != 0 and not isprime(characteristic)):
            raise InvalidSignature(
                f"Unsupported field characteristic {characteristic}.",
                hint="Use 0 for Q or a prime p for F_p.",
                context={"characteristic": characteristic},
            )
        self.characteristic = characteristic
        self.domain = QQ if characteristic == 0 else GF(characteristic, symmetric=False)
        self.zero = self.domain.zero
        self.one = self.domain.one

    @staticmethod
    def from_label(label: str) -> "ScalarField":
        """Parse the CLI spelling: `q` or `f<p>`."""
        text = label.strip().lower()
        if text in ("q", "qq", "0"):
            return ScalarField(0)
        if text.startswith("f") and text[1:].isdigit():
            return ScalarField(int(text[1:]))
        raise InvalidSignature(
            f"Unknown field '{label}'.",
            hint="Expected 'q' or 'f<p>' with p prime, e.g. 'f2'.",
        )

    @property
    def label(self) -> str:
        return "q" if self.characteristic == 0 else f"f{self.characteristic}"

    def __call__(self, value: int) -> Any:
        return self.domain(int(value))

    def rational(self, numerator: int, denominator: int = 1) -> Any:
        if denominator == 0 or (self.characteristic and denominator % self.characteristic == 0):
            raise NotInvertible(
                f"Denominator {denominator} is zero in {self.label}.",
                context={"numerator": numerator, "denominator": denominator},
            )
        if self.characteristic == 0:
            return self.domain(int(numerator), int(denominator))
        return self.domain.quo(self.domain(int(numerator)), self.domain(int(denominator)))

    def coerce(self, value: Any) -> Any:
        """Accept ints, Fractions, sympy Rationals, canonical text or domain elements."""
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, int):
            return self(value)
        if isinstance(value, Fraction):
            return self.rational(value.numerator, value.denominator)
        if isinstance(value, Rational):
            return self.rational(int(value.p), int(value.q))
        if isinstance(value, str):
            return self.parse(value)
        return self.domain.convert(value)

    def parse(self, text: str) -> Any:
        match = _RATIONAL_RE.match(text)
        if match is None:
            raise ValueError(f"not a rational literal: {text!r}")
        return self.rational(int(match.group(1)), int(match.group(2) or 1))

    def is_zero(self, c: Any) -> bool:
        return not c

    def inverse(self, c: Any) -> Any:
        if not c:
            raise NotInvertible("Zero has no inverse.")
        return self.domain.quo(self.one, c)

    def numerator_denominator(self, c: Any) -> tuple[int, int]:
        if self.characteristic == 0:
            return int(self.domain.numer(c)), int(self.domain.denom(c))
        return int(c) % self.characteristic, 1

    def text(self, c: Any) -> str:
        num, den = self.numerator_denominator(c)
        return str(num) if den == 1 else f"{num}/{den}"

    def split_sign(self, c: Any) -> tuple[bool, str]:
        """(negative, text of the absolute value); F_p residues are never negative."""
        num, den = self.numerator_denominator(c)
        magnitude = str(abs(num)) if den == 1 else f"{abs(num)}/{den}"
        return num < 0, magnitude

    def key(self, c: Any) -> tuple[int, int]:
        return self.numerator_denominator(c)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScalarField) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("ScalarField", self.characteristic))

    def __repr__(self) -> str:
        return f"ScalarField({self.label})"
