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

from algebra.element import Element, multiply, total_degree
from algebra.signature import AlgebraSignature
from closure.scripted import select_variable
from config import PoolPreset
from expression.parser import parse_element
from filtration.weights import WeightFiltration, weight_degree
from morphism.endomap import (
    EndoMap,
    ViolationKind,
    apply_endomorphism,
    difference,
    validate_endomorphism,
)
from morphism.exception import (
    BadParameters,
    BadPolynomial,
    MissingImage,
    RelationViolated,
    SingularMatrix,
    UnvalidatedMap,
)
from morphism.families import AutFamily, AutFamilyParams, builtin_family
from morphism.pools import pool_params, pool_preset, scaling_constant
from tests.strategies import MIXED, POLY_2, WEYL_1, WEYL_2, elements, nonscalar_elements, scalars


FAMILY_CASES = [
    (POLY_2, AutFamilyParams(AutFamily.SHIFT, generator="z1")),
    (POLY_2, AutFamilyParams(AutFamily.LINEAR, matrix=[[1, 1], [0, 1]], translation=[1, 0])),
    (POLY_2, AutFamilyParams(AutFamily.TRIANGULAR, generator="z2", polynomial="z1^2")),
    (WEYL_1, AutFamilyParams(AutFamily.WEYL_SCALING, index=1, scalar=3)),
    (WEYL_2, AutFamilyParams(AutFamily.PERMUTATION, permutation=(2, 1))),
    (WEYL_2, AutFamilyParams(AutFamily.WEYL_LINEAR, matrix=[[1, 2], [0, 1]])),
    (WEYL_2, AutFamilyParams(AutFamily.WEYL_SWAP, index=2)),
    (WEYL_1, AutFamilyParams(AutFamily.ALPHA_H, index=1, polynomial="x1^2 + 1")),
    (WEYL_2, AutFamilyParams(AutFamily.BETA_IC, index=2, scalar=3)),
    (
        MIXED,
        AutFamilyParams(
            AutFamily.TENSOR_LIFT, factor=2, inner=AutFamilyParams(AutFamily.ALPHA_H, index=1, polynomial="x1")
        ),
    ),
]


def degree_zero_elements(sig: AlgebraSignature):
    """Polynomials in the first generator only."""
    exponents = st.integers(0, 4).map(lambda k: (k,) + (0,) * (sig.size - 1))
    return st.dictionaries(exponents, scalars(), max_size=4).map(lambda terms: Element(sig, terms))


def e(text: str, sig: AlgebraSignature) -> Element:
    return parse_element(text, sig)


def family(sig: AlgebraSignature, name: AutFamily, **kwargs) -> EndoMap:
    return builtin_family(sig, AutFamilyParams(name, **kwargs))


class TestValidate(unittest.TestCase):
    def test_swap_is_an_automorphism(self):
        m = EndoMap("swap", WEYL_1, {"x1": e("y1", WEYL_1), "y1": e("-x1", WEYL_1)})
        self.assertTrue(validate_endomorphism(m).ok)

    def test_scaling_is_an_automorphism(self):
        m = EndoMap("scale", WEYL_1, [e("2*x1", WEYL_1), e("1/2*y1", WEYL_1)])
        self.assertTrue(validate_endomorphism(m).ok)

    def test_relation_violation_reports_residual(self):
        m = EndoMap("bad", WEYL_1, [e("x1", WEYL_1), e("x1", WEYL_1)])
        report = validate_endomorphism(m)
        self.assertFalse(report.ok)
        violation = report.violations[0]
        self.assertEqual(violation.kind, ViolationKind.RELATION)
        self.assertEqual(violation.residual, Element.scalar(WEYL_1, -1))
        with self.assertRaises(RelationViolated):
            report.raise_for_violation()

    def test_missing_image(self):
        m = EndoMap("partial", POLY_2, {"z1": e("z2", POLY_2)})
        report = validate_endomorphism(m)
        self.assertEqual(report.violations[0].kind, ViolationKind.MISSING_IMAGE)
        with self.assertRaises(MissingImage):
            report.raise_for_violation()

    def test_laurent_images_must_be_units(self):
        sig = AlgebraSignature.from_text("laurent:1")
        m = EndoMap("shift", sig, [e("z1 + 1", sig)])
        self.assertEqual(validate_endomorphism(m).violations[0].kind, ViolationKind.NOT_INVERTIBLE)

    def test_wrong_inverse(self):
        m = EndoMap("scale", POLY_2, [e("2*z1", POLY_2), e("z2", POLY_2)], [e("2*z1", POLY_2), e("z2", POLY_2)])
        self.assertEqual(validate_endomorphism(m).violations[0].kind, ViolationKind.INVERSE)

    def test_apply_needs_validation(self):
        m = EndoMap("shift", POLY_2, [e("z1 + 1", POLY_2), e("z2", POLY_2)])
        with self.assertRaises(UnvalidatedMap):
            apply_endomorphism(m, e("z1", POLY_2))


class TestApply(unittest.TestCase):
    def test_alpha_on_number_operator(self):
        alpha = family(WEYL_1, AutFamily.ALPHA_H, index=1, polynomial="x1^2")
        self.assertEqual(apply_endomorphism(alpha, e("x1*y1", WEYL_1)), e("x1*y1 + x1^3", WEYL_1))

    def test_shift_square(self):
        shift = family(POLY_2, AutFamily.SHIFT, generator="z1")
        self.assertEqual(apply_endomorphism(shift, e("z1^2", POLY_2)), e("z1^2 + 2*z1 + 1", POLY_2))

    def test_scaling_fixes_number_operator(self):
        phi = family(WEYL_1, AutFamily.WEYL_LINEAR, matrix=[[2]])
        self.assertEqual(apply_endomorphism(phi, e("x1*y1", WEYL_1)), e("x1*y1", WEYL_1))

    def test_differences(self):
        shift = family(POLY_2, AutFamily.SHIFT, generator="z1")
        self.assertEqual(difference(shift, e("z1^3", POLY_2)), e("3*z1^2 + 3*z1 + 1", POLY_2))
        tau = family(POLY_2, AutFamily.TRIANGULAR, generator="z2", polynomial="z1^3")
        self.assertEqual(difference(tau, e("z2", POLY_2)), e("z1^3", POLY_2))
        scaling = family(WEYL_1, AutFamily.WEYL_SCALING, index=1)
        self.assertEqual(difference(scaling, e("x1 + y1", WEYL_1)), e("x1 - 1/2*y1", WEYL_1))

    def test_every_family_is_multiplicative(self):
        for sig, params in FAMILY_CASES:
            phi = builtin_family(sig, params)

            @settings(max_examples=100, deadline=None)
            @given(elements(sig, 2), elements(sig, 2))
            def check(f, g):
                self.assertEqual(phi(multiply(f, g)), multiply(phi(f), phi(g)))

            with self.subTest(family=params.family.value):
                check()

    def test_cases_cover_every_family(self):
        self.assertEqual({params.family for _, params in FAMILY_CASES}, set(AutFamily))

    @settings(max_examples=100, deadline=None)
    @given(nonscalar_elements(POLY_2, 3))
    def test_selected_shift_lowers_degree(self, f):
        assume(total_degree(f) >= 2)
        i = select_variable(f)
        shift = family(POLY_2, AutFamily.SHIFT, generator=POLY_2.generators[i].name)
        g = difference(shift, f)
        self.assertFalse(g.is_scalar())
        self.assertLessEqual(total_degree(g), total_degree(f) - 1)

    def test_weight_preserving_maps_keep_degree_zero(self):
        cases = [
            (POLY_2, (0, 1), [
                AutFamilyParams(AutFamily.SHIFT, generator="z1"),
                AutFamilyParams(AutFamily.SHIFT, generator="z2"),
                AutFamilyParams(AutFamily.LINEAR, matrix=[[2, 0], [0, 1]]),
                AutFamilyParams(AutFamily.TRIANGULAR, generator="z2", polynomial="z1^2"),
            ]),
            (WEYL_1, (0, 1), [
                AutFamilyParams(AutFamily.ALPHA_H, index=1, polynomial="x1^3 + x1"),
                AutFamilyParams(AutFamily.WEYL_SCALING, index=1, scalar=5),
            ]),
        ]
        for sig, weights, maps in cases:
            w = WeightFiltration(sig, weights)
            for params in maps:
                phi = builtin_family(sig, params)

                @settings(max_examples=50, deadline=None)
                @given(degree_zero_elements(sig))
                def check(f):
                    self.assertLessEqual(weight_degree(w, f), 0)
                    self.assertLessEqual(weight_degree(w, phi(f)), 0)

                with self.subTest(algebra=sig.text(), family=params.family.value):
                    check()

    def test_beta_leaves_degree_zero(self):
        w = WeightFiltration(WEYL_1, (0, 1))
        beta = family(WEYL_1, AutFamily.BETA_IC, index=1, scalar=1)
        self.assertEqual(weight_degree(w, e("x1", WEYL_1)), 0)
        self.assertEqual(weight_degree(w, beta(e("x1", WEYL_1))), 1)

    @settings(max_examples=40, deadline=None)
    @given(elements(WEYL_2, 3))
    def test_inverse_undoes_map(self, f):
        phi = family(WEYL_2, AutFamily.WEYL_LINEAR, matrix=[[1, 2], [0, 1]])
        self.assertEqual(phi.inverse()(phi(f)), f)


class TestFamilies(unittest.TestCase):
    def test_identity_matrix(self):
        phi = family(WEYL_2, AutFamily.WEYL_LINEAR, matrix=[[1, 0], [0, 1]])
        self.assertEqual(list(phi.images), [Element.generator(WEYL_2, i) for i in range(4)])

    def test_scalar_weyl_linear_matches_scaling(self):
        phi = family(WEYL_1, AutFamily.WEYL_LINEAR, matrix=[[2]])
        self.assertEqual(list(phi.images), [e("2*x1", WEYL_1), e("1/2*y1", WEYL_1)])

    def test_beta(self):
        beta = family(WEYL_1, AutFamily.BETA_IC, index=1, scalar=3)
        self.assertEqual(list(beta.images), [e("x1 + 3*y1", WEYL_1), e("y1", WEYL_1)])
        self.assertTrue(beta.is_validated)

    def test_affine_linear(self):
        m = family(POLY_2, AutFamily.LINEAR, matrix=[[2, 0], [0, 1]], translation=[1, 0])
        self.assertEqual(m(e("z1", POLY_2)), e("2*z1 + 1", POLY_2))
        self.assertEqual(m.inverse()(e("2*z1 + 1", POLY_2)), e("z1", POLY_2))

    def test_singular_matrix(self):
        with self.assertRaises(SingularMatrix):
            family(POLY_2, AutFamily.LINEAR, matrix=[[1, 1], [1, 1]])

    def test_alpha_needs_polynomial_in_x(self):
        with self.assertRaises(BadPolynomial):
            family(WEYL_1, AutFamily.ALPHA_H, index=1, polynomial="y1")

    def test_shift_rejects_laurent_generator(self):
        sig = AlgebraSignature.from_text("laurent:1")
        with self.assertRaises(BadParameters):
            family(sig, AutFamily.SHIFT, generator="z1")

    def test_tensor_lift(self):
        inner = AutFamilyParams(AutFamily.WEYL_SWAP, index=1)
        lift = family(MIXED, AutFamily.TENSOR_LIFT, factor=2, inner=inner)
        self.assertEqual(lift(e("z1*x1", MIXED)), e("z1*y1", MIXED))

    def test_params_json(self):
        params = AutFamilyParams(
            AutFamily.TENSOR_LIFT, factor=1, inner=AutFamilyParams(AutFamily.LINEAR, matrix=[[2]], translation=["1/2"])
        )
        data = params.to_json()
        self.assertEqual(data["inner"]["matrix"], [["2"]])
        self.assertEqual(AutFamilyParams.from_json(data), params)

    def test_unknown_parameter(self):
        with self.assertRaises(BadParameters):
            AutFamilyParams.from_json({"family": "shift", "generator": "z1", "colour": "red"})


class TestPools(unittest.TestCase):
    def test_scaling_constant(self):
        self.assertEqual(scaling_constant(POLY_2.field), 2)
        self.assertIsNone(scaling_constant(AlgebraSignature.from_text("poly:1", 2).field))

    def test_affine_pool_in_one_variable(self):
        families = [p.family for p in pool_params(AlgebraSignature.from_text("poly:1"), PoolPreset.AFFINE)]
        self.assertEqual(families, [AutFamily.SHIFT, AutFamily.LINEAR])

    def test_presets_validate(self):
        for text, preset in (
            ("poly:2", PoolPreset.TRIANGULAR),
            ("weyl:2", PoolPreset.WEYL_STANDARD),
            ("poly:1 x weyl:1", PoolPreset.STANDARD),
        ):
            for m in pool_preset(AlgebraSignature.from_text(text), preset):
                self.assertTrue(m.is_validated, m.name)

    def test_single_atom_presets_reject_tensors(self):
        with self.assertRaises(BadParameters):
            pool_params(MIXED, PoolPreset.AFFINE)

    def test_laurent_has_no_default_pool(self):
        self.assertEqual(pool_params(AlgebraSignature.from_text("laurent:2"), PoolPreset.STANDARD), [])


if __name__ == "__main__":
    unittest.main()
