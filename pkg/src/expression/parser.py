from __future__ import annotations

import re
from dataclasses import dataclass

from algebra.element import Element
from algebra.exception import NotInvertible, UnknownGenerator
from algebra.signature import AlgebraSignature
from expression.exception import BadExponent, ExpressionSyntaxError, UnknownSymbol

# expr   := [('+'|'-')] term {('+'|'-') term}
# term   := factor {'*' factor}
# factor := base ['^' [('+'|'-')] integer]
# base   := integer ['/' integer] | symbol | '(' expr ')'
_TOKEN_RE = re.compile(r"\s*(?:(?P<number>\d+)|(?P<symbol>[A-Za-z]\w*)|(?P<op>[-+*^/()]))")


@dataclass(frozen=True)
class Token:
    kind: str           # "number", "symbol", "op" or "end"
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(
                f"Unexpected character {text[start]!r} at position {start}.",
                context={"position": start, "text": text},
            )
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """Recursive-descent reader that normalizes products as it goes."""

    def __init__(self, text: str, signature: AlgebraSignature) -> None:
        self.text = text
        self.signature = signature
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _accept(self, *ops: str) -> Token | None:
        if self.current.kind == "op" and self.current.text in ops:
            return self._advance()
        return None

    def _fail(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
        token = token or self.current
        found = token.text or "end of input"
        return ExpressionSyntaxError(
            f"{message} at position {token.position} (found {found!r}).",
            context={"position": token.position, "text": self.text},
        )

    def parse(self) -> Element:
        if self.current.kind == "end":
            raise self._fail("Empty expression")
        try:
            result = self._expr()
        except RecursionError:
            raise ExpressionSyntaxError(
                "Expression is nested too deeply.",
                hint="Flatten the parentheses.",
                context={"text": self.text[:80]},
            ) from None
        if self.current.kind != "end":
            raise self._fail("Unexpected token")
        return result

    def _expr(self) -> Element:
        sign = self._accept("+", "-")
        result = self._term()
        if sign is not None and sign.text == "-":
            result = -result
        while True:
            op = self._accept("+", "-")
            if op is None:
                return result
            term = self._term()
            result = result + term if op.text == "+" else result - term

    def _term(self) -> Element:
        result = self._factor()
        while self._accept("*"):
            result = result * self._factor()
        return result

    def _factor(self) -> Element:
        start = self.current
        base = self._base()
        if not self._accept("^"):
            return base
        sign = self._accept("+", "-")
        token = self._advance()
        if token.kind != "number":
            raise self._fail("Expected an integer exponent", token)
        exponent = int(token.text)
        if sign is not None and sign.text == "-":
            exponent = -exponent
        if exponent < 0 and not base.is_unit():
            raise BadExponent(
                f"Negative exponent {exponent} at position {token.position}.",
                hint="Only units, scalars times Laurent monomials, may carry negative exponents.",
                context={"position": start.position, "text": self.text},
            )
        return base ** exponent

    def _base(self) -> Element:
        token = self._advance()
        if token.kind == "number":
            numerator, denominator = int(token.text), 1
            if self._accept("/"):
                den = self._advance()
                if den.kind != "number":
                    raise self._fail("Expected a denominator", den)
                denominator = int(den.text)
            try:
                value = self.signature.field.rational(numerator, denominator)
            except NotInvertible as e:
                raise ExpressionSyntaxError(
                    e.message, context={"position": token.position, "text": self.text}
                ) from None
            return Element.scalar(self.signature, value)
        if token.kind == "symbol":
            try:
                gen = self.signature.generator(token.text)
            except UnknownGenerator as e:
                raise UnknownSymbol(
                    f"Unknown symbol '{token.text}' at position {token.position}.",
                    hint=e.hint,
                    context={"position": token.position, "symbol": token.text},
                ) from None
            return Element.generator(self.signature, gen.index)
        if token.kind == "op" and token.text == "(":
            inner = self._expr()
            if not self._accept(")"):
                raise self._fail("Expected ')'")
            return inner
        raise self._fail("Expected a number, symbol or '('", token)


def parse_element(text: str, signature: AlgebraSignature) -> Element:
    """Read an expression and return its normal form in `signature`."""
    return Parser(text, signature).parse()
