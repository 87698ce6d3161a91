from __future__ import annotations

import sys
import unittest
from pathlib import Path

from hypothesis import given, settings

ROOT = Path(__file__).resolve().parents[1]
SRC_DIR = ROOT / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from algebra.element import Element
from algebra.signature import AlgebraSignature
from expression.exception import BadExponent, ExpressionSyntaxError, UnknownSymbol
from expression.parser import parse_element
from expression.printer import format_element, format_monomial
from tests.strategies import LAURENT_2, MIXED, POLY_2, WEYL_1, WEYL_2, elements


class TestParse(unittest.TestCase):
    def test_normalizes_products(self):
        self.assertEqual(format_element(parse_element("y1*x1", WEYL_1)), "x1*y1 - 1")

    def test_powers_of_sums(self):
        self.assertEqual(format_element(parse_element("(z1+z2)^2", POLY_2)), "z1^2 + 2*z1*z2 + z2^2")

    def test_negative_exponent_outside_laurent(self):
        with self.assertRaises(BadExponent):
            parse_element("z1^-1", POLY_2)

    def test_negative_exponent_on_laurent(self):
        f = parse_element("z1^-2*z2", LAURENT_2)
        self.assertEqual(f.support(), [(-2, 1)])

    def test_negative_exponent_on_parenthesized_unit(self):
        self.assertEqual(parse_element("(z1)^-1", LAURENT_2), parse_element("z1^-1", LAURENT_2))
        self.assertEqual(parse_element("(2*z1*z2^-1)^-2", LAURENT_2).support(), [(-2, 2)])
        with self.assertRaises(BadExponent):
            parse_element("(z1 + z2)^-1", LAURENT_2)
        with self.assertRaises(BadExponent):
            parse_element("(z1)^-1", POLY_2)

    def test_deep_nesting_is_a_syntax_error(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse_element("(" * 2000 + "z1" + ")" * 2000, POLY_2)
        self.assertEqual(parse_element("(((z1)))", POLY_2), parse_element("z1", POLY_2))

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbol):
            parse_element("x1 + 1", POLY_2)

    def test_syntax_error_position(self):
        with self.assertRaises(ExpressionSyntaxError) as ctx:
            parse_element("z1 + * z2", POLY_2)
        self.assertIsNotNone(ctx.exception.position)

    def test_unbalanced_parenthesis(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse_element("(z1 + z2", POLY_2)

    def test_empty_text(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse_element("   ", POLY_2)

    def test_rationals_and_leading_sign(self):
        expected = Element(POLY_2, {(1, 0): "-1/2", (0, 0): "1/2"})
        self.assertEqual(parse_element("-1/2*z1 + 3/6", POLY_2), expected)

    def test_prime_field_coefficients(self):
        sig = AlgebraSignature.from_text("poly:1", 3)
        self.assertEqual(format_element(parse_element("4*z1 + 3", sig)), "z1")


class TestFormat(unittest.TestCase):
    def test_zero(self):
        self.assertEqual(format_element(Element.zero(POLY_2)), "0")

    def test_half(self):
        self.assertEqual(format_element(Element(POLY_2, {(1, 0): "1/2"})), "1/2*z1")

    def test_degree_lex_order(self):
        f = parse_element("1 + z2 + z1 + z1*z2 + z2^3", POLY_2)
        self.assertEqual(format_element(f), "z2^3 + z1*z2 + z1 + z2 + 1")

    def test_unit_monomial(self):
        self.assertEqual(format_monomial(WEYL_1, (0, 0)), "")
        self.assertEqual(format_monomial(WEYL_1, (2, 1)), "x1^2*y1")


class TestRoundTrip(unittest.TestCase):
    @settings(max_examples=200, deadline=None)
    @given(elements(POLY_2))
    def test_polynomial(self, f):
        self.assertEqual(parse_element(format_element(f), POLY_2), f)

    @settings(max_examples=200, deadline=None)
    @given(elements(WEYL_2))
    def test_weyl(self, f):
        self.assertEqual(parse_element(format_element(f), WEYL_2), f)

    @settings(max_examples=200, deadline=None)
    @given(elements(MIXED))
    def test_tensor(self, f):
        self.assertEqual(parse_element(format_element(f), MIXED), f)

    @settings(max_examples=200, deadline=None)
    @given(elements(LAURENT_2))
    def test_laurent(self, f):
        self.assertEqual(parse_element(format_element(f), LAURENT_2), f)

    def test_canonical_text_is_fixed(self):
        for text in ("x1*y1 - 1", "-3*x1^2 + 1/2*y1", "0"):
            self.assertEqual(format_element(parse_element(text, WEYL_1)), text)


if __name__ == "__main__":
    unittest.main()
