from __future__ import annotations

import sys
import unittest
from pathlib import Path

from hypothesis import assume, given, settings
from hypothesis import strategies as st

ROOT = Path(__file__).resolve().parents[1]
SRC_DIR = ROOT / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from algebra.element import NEG_INFINITY, Element, linear_sum, multiply
from algebra.signature import AlgebraSignature
from expression.parser import parse_element
from filtration.exception import (
    BadWeights,
    InfiniteGradedPiece,
    InvalidFiltration,
    InvertibleNotDegreeZero,
    NegativeWeight,
    NotContainingOne,
    SequenceTooShort,
)
from filtration.graded import (
    UNBOUNDED,
    convolve,
    gr_dimension_check,
    graded_dimensions,
    graded_piece_dimensions,
    graded_report,
)
from filtration.growth import gk_estimate, growth_sequence
from filtration.weights import (
    WeightFiltration,
    homogeneous_monomials,
    leading_form,
    tensor_weights,
    validate_filtration,
    weight_degree,
)
from tests.strategies import MIXED, POLY_2, WEYL_1, WEYL_2, nonscalar_elements, nonzero_elements

POLY_1 = AlgebraSignature.from_text("poly:1")
LAURENT_1 = AlgebraSignature.from_text("laurent:1")


def e(text: str, sig: AlgebraSignature) -> Element:
    return parse_element(text, sig)


def generating_space(sig: AlgebraSignature) -> list[Element]:
    return [Element.one(sig)] + [Element.generator(sig, g.index) for g in sig.generators]


class TestWeights(unittest.TestCase):
    def test_laurent_weight_must_vanish(self):
        with self.assertRaises(InvertibleNotDegreeZero) as ctx:
            validate_filtration(WeightFiltration(LAURENT_1, (1,)))
        self.assertIn("z1^-1", ctx.exception.console_message)
        validate_filtration(WeightFiltration(LAURENT_1, (0,)))

    def test_bernstein_on_weyl(self):
        w = validate_filtration(WeightFiltration.bernstein(WEYL_1))
        self.assertEqual(w.weights, (1, 1))
        self.assertEqual(WeightFiltration.bernstein(AlgebraSignature.from_text("laurent:1 x poly:1")).weights, (0, 1))

    def test_negative_weight(self):
        with self.assertRaises(NegativeWeight):
            validate_filtration(WeightFiltration(POLY_2, (1, -1)))

    def test_wrong_length(self):
        with self.assertRaises(BadWeights):
            WeightFiltration(POLY_2, (1,))

    def test_parse(self):
        self.assertEqual(WeightFiltration.parse(POLY_2, "1,0").weights, (1, 0))
        self.assertEqual(WeightFiltration.parse(WEYL_1, "bernstein").weights, (1, 1))
        self.assertEqual(WeightFiltration.parse(WEYL_1, "trivial").weights, (0, 0))
        with self.assertRaises(BadWeights):
            WeightFiltration.parse(POLY_2, "heavy")

    def test_unreadable_weights_are_not_a_verdict(self):
        self.assertNotIsInstance(BadWeights("x"), InvalidFiltration)
        self.assertIsInstance(NegativeWeight("x"), InvalidFiltration)
        self.assertIsInstance(InvertibleNotDegreeZero("x"), InvalidFiltration)

    def test_weight_degree(self):
        self.assertEqual(weight_degree(WeightFiltration.bernstein(WEYL_1), e("x1*y1 - 1", WEYL_1)), 2)
        self.assertEqual(weight_degree(WeightFiltration(POLY_2, (1, 0)), e("z1 + z2^5", POLY_2)), 1)
        self.assertEqual(weight_degree(WeightFiltration.bernstein(WEYL_1), Element.zero(WEYL_1)), NEG_INFINITY)

    def test_graded_signature(self):
        self.assertEqual(WeightFiltration.bernstein(WEYL_1).graded_signature.text(), "gr-weyl:1")
        self.assertEqual(WeightFiltration(WEYL_1, (1, 0)).graded_signature.text(), "gr-weyl:1")
        self.assertEqual(WeightFiltration.trivial(WEYL_1).graded_signature.text(), "weyl:1")


class TestLeadingForm(unittest.TestCase):
    def test_correction_drops(self):
        w = WeightFiltration.bernstein(WEYL_1)
        lf = leading_form(w, e("y1*x1", WEYL_1))
        self.assertEqual(lf, Element(w.graded_signature, {(1, 1): 1}))

    def test_weighted_polynomial(self):
        w = WeightFiltration(POLY_2, (1, 0))
        self.assertEqual(leading_form(w, e("z1*z2^3 + z2^9", POLY_2)), e("z1*z2^3", POLY_2))

    def test_scalar(self):
        w = WeightFiltration.bernstein(WEYL_1)
        self.assertEqual(leading_form(w, Element.scalar(WEYL_1, 5)), Element.scalar(w.graded_signature, 5))

    def test_graded_product_commutes(self):
        w = WeightFiltration.bernstein(WEYL_1)
        x, y = leading_form(w, e("x1", WEYL_1)), leading_form(w, e("y1", WEYL_1))
        self.assertEqual(multiply(y, x), multiply(x, y))

    @settings(max_examples=100, deadline=None)
    @given(nonzero_elements(WEYL_2), nonzero_elements(WEYL_2))
    def test_leading_forms_multiply(self, f, g):
        w = WeightFiltration.bernstein(WEYL_2)
        self.assertEqual(leading_form(w, multiply(f, g)), multiply(leading_form(w, f), leading_form(w, g)))

    @settings(max_examples=200, deadline=None)
    @given(nonzero_elements(WEYL_1), nonzero_elements(WEYL_1))
    def test_leading_forms_multiply_on_one_pair(self, f, g):
        w = WeightFiltration.bernstein(WEYL_1)
        self.assertEqual(leading_form(w, multiply(f, g)), multiply(leading_form(w, f), leading_form(w, g)))

    @settings(max_examples=100, deadline=None)
    @given(
        st.sampled_from([(WEYL_1, (1, 1)), (WEYL_1, (2, 1)), (POLY_2, (1, 0)), (MIXED, (1, 1, 2))]),
        st.data(),
    )
    def test_powers_climb_the_filtration(self, case, data):
        sig, weights = case
        w = WeightFiltration(sig, weights)
        z = data.draw(nonscalar_elements(sig, 2))
        assume(weight_degree(w, z) >= 1)
        degrees = [weight_degree(w, z ** k) for k in range(5)]
        self.assertEqual(degrees[0], 0)
        for lower, upper in zip(degrees, degrees[1:]):
            self.assertLess(lower, upper)

    @settings(max_examples=50, deadline=None)
    @given(nonscalar_elements(POLY_2, 2), st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.sampled_from([1, 2, -1]))
    def test_polynomials_in_f_have_proportional_degree(self, f, lower, top):
        w = WeightFiltration(POLY_2, (1, 2))
        n = len(lower)
        total = linear_sum([(c, f ** i) for i, c in enumerate(lower)] + [(top, f ** n)], POLY_2)
        self.assertEqual(weight_degree(w, total), n * weight_degree(w, f))


class TestGraded(unittest.TestCase):
    def test_tensor_weights_concatenate(self):
        w = tensor_weights(WeightFiltration(POLY_1, (1,)), WeightFiltration.bernstein(WEYL_1))
        self.assertEqual(w.signature, MIXED)
        self.assertEqual(w.weights, (1, 1, 1))
        self.assertEqual(len([m for m in MIXED.monomials(2) if w.weight(m) <= 2]), 10)

    def test_trivial_tensor(self):
        w = tensor_weights(WeightFiltration.trivial(POLY_1), WeightFiltration.trivial(WEYL_1))
        self.assertEqual(w.weights, (0, 0, 0))

    def test_trivial_tensor_has_all_mass_in_degree_zero(self):
        trivial = WeightFiltration.trivial(POLY_1)
        report = gr_dimension_check(trivial, trivial, 4)
        self.assertTrue(report.ok)
        self.assertEqual([r.tensor for r in report.rows], [UNBOUNDED, 0, 0, 0, 0])
        self.assertEqual([r.convolution for r in report.rows], [UNBOUNDED, 0, 0, 0, 0])
        rows = report.toJSON()["rows"]
        self.assertEqual(rows[0]["tensor"], "unbounded")
        self.assertEqual(rows[1]["convolution"], 0)

    def test_trivial_weyl_tensor_passes(self):
        report = gr_dimension_check(WeightFiltration.trivial(POLY_1), WeightFiltration.trivial(WEYL_1), 3)
        self.assertTrue(report.ok)
        self.assertEqual(report.rows[0].tensor, UNBOUNDED)

    def test_one_flat_factor(self):
        flat = WeightFiltration.trivial(POLY_1)
        graded = WeightFiltration(POLY_1, (1,))
        self.assertEqual(graded_piece_dimensions(flat, 2), [UNBOUNDED, 0, 0])
        self.assertEqual(graded_piece_dimensions(graded, 2), [1, 1, 1])
        report = gr_dimension_check(flat, graded, 3)
        self.assertTrue(report.ok)
        self.assertEqual([r.tensor for r in report.rows], [UNBOUNDED] * 4)

    def test_laurent_pieces(self):
        sig = AlgebraSignature.from_text("laurent:1 x poly:1")
        self.assertEqual(graded_piece_dimensions(WeightFiltration.bernstein(sig), 2), [UNBOUNDED] * 3)

    def test_dimensions(self):
        self.assertEqual(graded_dimensions(WeightFiltration.bernstein(WEYL_1), 4), [1, 2, 3, 4, 5])
        self.assertEqual(homogeneous_monomials(WeightFiltration.bernstein(WEYL_1), 1), [(0, 1), (1, 0)])

    def test_weight_zero_piece_is_infinite(self):
        with self.assertRaises(InfiniteGradedPiece):
            graded_dimensions(WeightFiltration(POLY_2, (1, 0)), 3)

    def test_convolve(self):
        self.assertEqual(convolve([1, 1, 1], [1, 2, 3], 2), [1, 3, 6])

    def test_tensor_check_weyl(self):
        report = gr_dimension_check(WeightFiltration(POLY_1, (1,)), WeightFiltration.bernstein(WEYL_1), 4)
        self.assertTrue(report.ok)
        self.assertEqual(report.rows[2].tensor, 6)
        self.assertEqual(report.rows[2].convolution, 6)

    def test_tensor_check_polynomial(self):
        w = WeightFiltration(POLY_1, (1,))
        report = gr_dimension_check(w, w, 6)
        self.assertTrue(report.ok)
        self.assertEqual([r.tensor for r in report.rows], [i + 1 for i in range(7)])

    def test_tensor_check_up_to_eight(self):
        report = gr_dimension_check(WeightFiltration(POLY_1, (1,)), WeightFiltration.bernstein(WEYL_1), 8)
        self.assertTrue(report.ok)
        self.assertEqual(report.toJSON()["rows"][8]["tensor"], 45)

    def test_graded_report_is_domain(self):
        report = graded_report(WeightFiltration.bernstein(WEYL_1), 3)
        self.assertTrue(report.ok)
        self.assertGreater(report.domain_samples, 0)
        self.assertEqual(report.dims, [1, 2, 3, 4])


class TestGrowth(unittest.TestCase):
    def test_gk_estimates(self):
        self.assertEqual(gk_estimate([1, 3, 6, 10, 15, 21, 28, 36]), 2)
        self.assertEqual(gk_estimate([1, 1, 1, 1]), 0)

    def test_short_sequence(self):
        with self.assertRaises(SequenceTooShort):
            gk_estimate([1, 3, 6])

    def test_growth_of_standard_algebras(self):
        expected = {"poly:2": 2, "weyl:1": 2, "poly:1 x weyl:1": 3, "poly:0": 0}
        for text, degree in expected.items():
            sig = AlgebraSignature.from_text(text)
            self.assertEqual(growth_sequence(sig, generating_space(sig), 12).degree, degree, text)

    def test_dims_and_polynomial(self):
        report = growth_sequence(POLY_2, generating_space(POLY_2), 8)
        self.assertEqual(report.dims[:4], (1, 3, 6, 10))
        self.assertEqual(report.polynomial, "n**2/2 + 3*n/2 + 1")

    def test_tensor_dimensions(self):
        report = growth_sequence(MIXED, generating_space(MIXED), 3)
        self.assertEqual(report.dims, (1, 4, 10, 20))
        self.assertIsNone(report.degree)

    def test_needs_one(self):
        with self.assertRaises(NotContainingOne):
            growth_sequence(POLY_2, [e("z1", POLY_2)], 4)


if __name__ == "__main__":
    unittest.main()
