from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator, Sequence

from algebra.exception import InvalidMonomial, InvalidSignature, UnknownGenerator
from algebra.scalar import ScalarField
from util.math import compositions

Monomial = tuple[int, ...]


class AtomKind(str, Enum):
    POLYNOMIAL = "poly"
    LAURENT = "laurent"
    WEYL = "weyl"


class GeneratorKind(Enum):
    COMMUTATIVE = "commutative"
    INVERTIBLE = "invertible"
    WEYL_X = "weyl-x"
    WEYL_Y = "weyl-y"


@dataclass(frozen=True)
class Atom:
    kind: AtomKind
    rank: int
    # Weyl only: the associated graded atom, same generators, relation dropped.
    graded: bool = False

    @property
    def width(self) -> int:
        return 2 * self.rank if self.kind == AtomKind.WEYL else self.rank

    def text(self) -> str:
        prefix = "gr-weyl" if self.graded else self.kind.value
        return f"{prefix}:{self.rank}"


def PolynomialRing(m: int) -> Atom:
    return Atom(AtomKind.POLYNOMIAL, m)


def LaurentRing(m: int) -> Atom:
    return Atom(AtomKind.LAURENT, m)


def Weyl(n: int) -> Atom:
    return Atom(AtomKind.WEYL, n)


@dataclass(frozen=True)
class Generator:
    index: int              # position in the exponent vector
    name: str
    kind: GeneratorKind
    factor: int             # atom position, 0-based
    number: int             # the k in z<k>, x<k>, y<k>
    partner: int | None = None

    @property
    def invertible(self) -> bool:
        return self.kind == GeneratorKind.INVERTIBLE


@dataclass(frozen=True)
class AlgebraSignature:
    """
    Ordered tensor product of atoms over Q (characteristic 0) or F_p.

    Exponent vectors list the atoms in order; a Weyl atom contributes the
    interleaved block x1, y1, x2, y2, ... so that reading a monomial left to
    right gives its normal form x1^a1 y1^b1 x2^a2 y2^b2 ...
    """

    atoms: tuple[Atom, ...]
    characteristic: int = 0

    def __post_init__(self) -> None:
        if not self.atoms:
            raise InvalidSignature("A signature needs at least one atom.")
        for atom in self.atoms:
            if atom.rank < 0 or (atom.kind == AtomKind.WEYL and atom.rank < 1):
                raise InvalidSignature(
                    f"Invalid atom {atom.text()}.",
                    hint="Polynomial and Laurent ranks are >= 0, Weyl ranks >= 1.",
                )
            if atom.graded and atom.kind != AtomKind.WEYL:
                raise InvalidSignature(f"Only Weyl atoms have a graded form, got {atom.text()}.")
        # Validates the characteristic.
        ScalarField(self.characteristic)

    @staticmethod
    def from_text(text: str, characteristic: int = 0) -> "AlgebraSignature":
        """Parse `poly:2`, `weyl:1`, `poly:1 x weyl:1`, ..."""
        atoms = []
        for chunk in text.split(" x "):
            kind_text, sep, rank_text = chunk.strip().partition(":")
            try:
                kind = AtomKind(kind_text.strip().lower())
                rank = int(rank_text)
            except ValueError:
                raise InvalidSignature(
                    f"Cannot read atom '{chunk.strip()}'.",
                    hint="Atoms are poly:<m>, laurent:<m> or weyl:<n>, joined by ' x '.",
                    context={"algebra": text},
                ) from None
            if not sep:
                raise InvalidSignature(f"Atom '{chunk.strip()}' lacks a rank.", context={"algebra": text})
            atoms.append(Atom(kind, rank))
        return AlgebraSignature(tuple(atoms), characteristic)

    def text(self) -> str:
        return " x ".join(atom.text() for atom in self.atoms)

    @cached_property
    def field(self) -> ScalarField:
        return ScalarField(self.characteristic)

    @cached_property
    def generators(self) -> tuple[Generator, ...]:
        gens: list[Generator] = []
        counters = {"z": 0, "x": 0}
        for factor, atom in enumerate(self.atoms):
            if atom.kind == AtomKind.WEYL:
                for _ in range(atom.rank):
                    counters["x"] += 1
                    k = counters["x"]
                    base = len(gens)
                    gens.append(Generator(base, f"x{k}", GeneratorKind.WEYL_X, factor, k, base + 1))
                    gens.append(Generator(base + 1, f"y{k}", GeneratorKind.WEYL_Y, factor, k, base))
            else:
                kind = GeneratorKind.INVERTIBLE if atom.kind == AtomKind.LAURENT else GeneratorKind.COMMUTATIVE
                for _ in range(atom.rank):
                    counters["z"] += 1
                    gens.append(Generator(len(gens), f"z{counters['z']}", kind, factor, counters["z"]))
        return tuple(gens)

    @property
    def size(self) -> int:
        return len(self.generators)

    @cached_property
    def _by_name(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    def generator(self, ref: str | int) -> Generator:
        if isinstance(ref, int):
            if 0 <= ref < self.size:
                return self.generators[ref]
        elif ref in self._by_name:
            return self._by_name[ref]
        raise UnknownGenerator(
            f"Unknown generator '{ref}'.",
            hint=f"Generators of {self.text()}: {', '.join(self._by_name) or 'none'}.",
            context={"generator": ref},
        )

    @cached_property
    def polynomial_variables(self) -> tuple[int, ...]:
        return tuple(g.index for g in self.generators if g.kind == GeneratorKind.COMMUTATIVE)

    @cached_property
    def laurent_variables(self) -> tuple[int, ...]:
        return tuple(g.index for g in self.generators if g.kind == GeneratorKind.INVERTIBLE)

    @cached_property
    def weyl_pairs(self) -> tuple[tuple[int, int], ...]:
        """(x_i, y_i) exponent positions for every Weyl index i, graded or not."""
        return tuple((g.index, g.partner) for g in self.generators if g.kind == GeneratorKind.WEYL_X)

    @cached_property
    def rewrite_pairs(self) -> tuple[tuple[int, int], ...]:
        """Weyl pairs subject to y_i x_i = x_i y_i - 1."""
        return tuple(
            (g.index, g.partner)
            for g in self.generators
            if g.kind == GeneratorKind.WEYL_X and not self.atoms[g.factor].graded
        )

    @property
    def is_polynomial(self) -> bool:
        return all(atom.kind == AtomKind.POLYNOMIAL for atom in self.atoms)

    @property
    def is_weyl(self) -> bool:
        return all(atom.kind == AtomKind.WEYL and not atom.graded for atom in self.atoms)

    @property
    def is_commutative(self) -> bool:
        return not self.rewrite_pairs

    def offset(self, factor: int) -> int:
        return sum(atom.width for atom in self.atoms[:factor])

    def factor_signature(self, factor: int) -> "AlgebraSignature":
        if not 0 <= factor < len(self.atoms):
            raise InvalidSignature(
                f"Factor {factor + 1} does not exist in {self.text()}.",
                context={"factor": factor + 1},
            )
        return AlgebraSignature((self.atoms[factor],), self.characteristic)

    def tensor(self, other: "AlgebraSignature") -> "AlgebraSignature":
        if other.characteristic != self.characteristic:
            raise InvalidSignature(
                "Tensor factors must share the base field.",
                context={"left": self.field.label, "right": other.field.label},
            )
        return AlgebraSignature(self.atoms + other.atoms, self.characteristic)

    def with_atoms(self, atoms: Sequence[Atom]) -> "AlgebraSignature":
        return AlgebraSignature(tuple(atoms), self.characteristic)

    # -- monomials ---------------------------------------------------------

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * self.size

    def check_monomial(self, mono: Sequence[int]) -> Monomial:
        mono = tuple(int(e) for e in mono)
        if len(mono) != self.size:
            raise InvalidMonomial(
                f"Monomial has {len(mono)} exponents, {self.text()} has {self.size} generators.",
                context={"monomial": mono},
            )
        for g, e in zip(self.generators, mono):
            if e < 0 and not g.invertible:
                raise InvalidMonomial(
                    f"Negative exponent on {g.name}.",
                    hint="Only Laurent generators take negative exponents.",
                    context={"monomial": mono},
                )
        return mono

    def unit(self, index: int) -> Monomial:
        return tuple(1 if i == index else 0 for i in range(self.size))

    @staticmethod
    def degree(mono: Monomial) -> int:
        return sum(abs(e) for e in mono)

    @staticmethod
    def order_key(mono: Monomial) -> tuple[int, Monomial]:
        """Degree-lexicographic key; larger keys come first in printed output."""
        return (sum(abs(e) for e in mono), mono)

    def monomials(self, max_degree: int) -> list[Monomial]:
        """Every normal-form monomial of total degree <= max_degree, ascending."""
        if self.laurent_variables:
            raise InvalidSignature(
                "Laurent signatures have infinitely many monomials of bounded degree.",
                context={"algebra": self.text()},
            )
        result = [
            mono
            for degree in range(max_degree + 1)
            for mono in compositions(degree, self.size)
        ]
        return sorted(result, key=self.order_key)

    def iter_monomials_in(self, indices: Sequence[int], max_degree: int) -> Iterator[Monomial]:
        """Monomials supported on `indices`, ascending in degree-lex order."""
        found = []
        for degree in range(max_degree + 1):
            for exps in compositions(degree, len(indices)):
                mono = [0] * self.size
                for i, e in zip(indices, exps):
                    mono[i] = e
                found.append(tuple(mono))
        yield from sorted(found, key=self.order_key)
