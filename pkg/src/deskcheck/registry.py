from __future__ import annotations

import random
from dataclasses import replace
from enum import Enum
from typing import Iterable

from algebra.element import Element, linear_sum, multiply
from algebra.oracle import oracle_product
from algebra.signature import AlgebraSignature, LaurentRing
from closure.certificate import ClosureCertificate, verify_certificate
from closure.saturation import SaturationStatus, saturate
from closure.scripted import scripted_closure
from config import PoolPreset
from deskcheck.check import CheckOutcome, DeskCheck
from expression.parser import parse_element
from filtration.exception import InvertibleNotDegreeZero
from filtration.graded import gr_dimension_check
from filtration.growth import growth_sequence
from filtration.weights import WeightFiltration, leading_form, validate_filtration, weight_degree
from morphism.pools import pool_preset

POLY_2 = AlgebraSignature.from_text("poly:2")
WEYL_1 = AlgebraSignature.from_text("weyl:1")
WEYL_2 = AlgebraSignature.from_text("weyl:2")
MIXED = AlgebraSignature.from_text("poly:1 x weyl:1")


def random_element(sig: AlgebraSignature, rng: random.Random, max_degree: int = 3, max_terms: int = 4) -> Element:
    """Small random element with rational coefficients; may be zero."""
    monomials = sig.monomials(max_degree)
    chosen = rng.sample(monomials, min(len(monomials), rng.randint(1, max_terms)))
    return Element(sig, {m: sig.field.rational(rng.randint(-5, 5), rng.randint(1, 3)) for m in chosen})


def random_nonscalar(sig: AlgebraSignature, rng: random.Random, max_degree: int = 3) -> Element:
    while True:
        f = random_element(sig, rng, max_degree)
        if not f.is_scalar():
            return f


def _generating_space(sig: AlgebraSignature) -> list[Element]:
    return [Element.one(sig)] + [Element.generator(sig, g.index) for g in sig.generators]


# -- checks ------------------------------------------------------------------


def check_normal_ordering() -> CheckOutcome:
    rng = random.Random(1)
    compared = 0
    mismatches = []
    for sig in (WEYL_1, WEYL_2):
        monomials = sig.monomials(6)
        for m1 in monomials:
            for m2 in monomials:
                if sig.degree(m1) + sig.degree(m2) > 6:
                    continue
                f, g = Element.monomial(sig, m1), Element.monomial(sig, m2)
                compared += 1
                if multiply(f, g) != oracle_product(f, g):
                    mismatches.append(f"{f} * {g}")
        for _ in range(100):
            f, g = random_element(sig, rng), random_element(sig, rng)
            compared += 1
            if multiply(f, g) != oracle_product(f, g):
                mismatches.append(f"{f} * {g}")
    return CheckOutcome(not mismatches, {"products": compared, "mismatches": mismatches[:5]})


def _closure_outcome(seeds: Iterable[Element], cap: int, expected: int) -> CheckOutcome:
    failures = []
    count = 0
    for seed in seeds:
        count += 1
        cert = scripted_closure(seed, cap)
        verdict = verify_certificate(cert)
        if len(cert.coverage) != expected or not verdict.ok:
            failures.append(str(seed))
    return CheckOutcome(not failures, {"seeds": count, "covered": expected, "failures": failures})


def check_polynomial_closure() -> CheckOutcome:
    rng = random.Random(2)
    seeds = [parse_element("z1^2*z2+z1", POLY_2)] + [random_nonscalar(POLY_2, rng) for _ in range(25)]
    return _closure_outcome(seeds, 4, 15)


def check_fixpoint_law() -> CheckOutcome:
    sig = AlgebraSignature.from_text("poly:1")
    pool = pool_preset(sig, PoolPreset.AFFINE)
    dims = {}
    ok = True
    for d in (2, 3):
        result = saturate([parse_element(f"z1^{d}", sig)], pool, cap=d + 3)
        dims[d] = result.dimension
        ok &= result.status == SaturationStatus.FIXPOINT and result.dimension == d + 1
    return CheckOutcome(ok, {"dimensions": dims})


def check_weyl_closure() -> CheckOutcome:
    seeds = [parse_element(text, WEYL_1) for text in ("x1", "x1+y1", "x1*y1")]
    return _closure_outcome(seeds, 3, 10)


def check_frobenius_confinement() -> CheckOutcome:
    sig = AlgebraSignature.from_text("poly:2", 2)
    result = saturate([parse_element("z1^2", sig)], pool_preset(sig, PoolPreset.TRIANGULAR), cap=6)
    even = all(all(e % 2 == 0 for e in m) for row in result.basis.rows() for m in row.terms)
    full = len(sig.monomials(6))
    proper = result.dimension < full
    return CheckOutcome(even and proper, {"status": result.status.value, "dimension": result.dimension, "full": full})


def check_tensor_gr() -> CheckOutcome:
    poly = AlgebraSignature.from_text("poly:1")
    report = gr_dimension_check(WeightFiltration(poly, (1,)), WeightFiltration.bernstein(WEYL_1), 8)
    degree_two = report.rows[2].tensor
    return CheckOutcome(report.ok and degree_two == 6, {"degree 2": degree_two, "table": [r.tensor for r in report.rows]})


def check_leading_forms() -> CheckOutcome:
    rng = random.Random(7)
    w = WeightFiltration.bernstein(WEYL_1)
    tested = 0
    failures = []
    while tested < 200:
        f, g = random_element(WEYL_1, rng), random_element(WEYL_1, rng)
        if f.is_zero() or g.is_zero():
            continue
        tested += 1
        if leading_form(w, multiply(f, g)) != multiply(leading_form(w, f), leading_form(w, g)):
            failures.append(f"{f} ; {g}")
    return CheckOutcome(not failures, {"pairs": tested, "failures": failures[:5]})


def check_gk_additivity() -> CheckOutcome:
    expected = {"poly:2": 2, "weyl:1": 2, "poly:1 x weyl:1": 3, "poly:0": 0}
    found = {}
    for text in expected:
        sig = AlgebraSignature.from_text(text)
        found[text] = growth_sequence(sig, _generating_space(sig), 12).degree
    return CheckOutcome(found == expected, {"gk": found})


def check_leading_power_mechanism() -> CheckOutcome:
    rng = random.Random(9)
    sig = POLY_2
    w = WeightFiltration(sig, (1, 2))
    tested = 0
    failures = []
    while tested < 50:
        f = random_nonscalar(sig, rng, 2)
        m = weight_degree(w, f)
        n = rng.randint(1, 4)
        coeffs = [rng.randint(-3, 3) for _ in range(n)] + [rng.choice([-2, -1, 1, 2, 3])]
        total = linear_sum(((c, f ** i) for i, c in enumerate(coeffs)), sig)
        tested += 1
        if total.is_zero() or weight_degree(w, total) != n * m:
            failures.append(str(f))
    return CheckOutcome(not failures, {"samples": tested, "failures": failures[:5]})


def check_invertible_weights() -> CheckOutcome:
    sig = AlgebraSignature((LaurentRing(1),))
    rejected = False
    try:
        validate_filtration(WeightFiltration(sig, (1,)))
    except InvertibleNotDegreeZero:
        rejected = True
    validate_filtration(WeightFiltration(sig, (0,)))
    return CheckOutcome(rejected, {"weight 1 rejected": rejected, "weight 0 accepted": True})


def _tampered(text: str) -> ClosureCertificate:
    cert = ClosureCertificate.loads(text)
    for k, step in enumerate(cert.steps):
        if step.coefficients:
            coefficients = (step.coefficients[0] + step.result.field.one,) + step.coefficients[1:]
            cert.steps[k] = replace(step, coefficients=coefficients)
            break
    return cert


def check_round_trip() -> CheckOutcome:
    rng = random.Random(11)
    failures = []
    for sig in (POLY_2, WEYL_1, MIXED, AlgebraSignature.from_text("laurent:2")):
        for _ in range(200):
            if sig.laurent_variables:
                terms = {tuple(rng.randint(-3, 3) for _ in range(sig.size)): rng.randint(-4, 4) for _ in range(3)}
                e = Element(sig, terms)
            else:
                e = random_element(sig, rng)
            if parse_element(str(e), sig) != e:
                failures.append(str(e))
    seed = parse_element("z1^2*z2+z1", POLY_2)
    first, second = scripted_closure(seed, 3).dumps(), scripted_closure(seed, 3).dumps()
    tamper_caught = not verify_certificate(_tampered(first)).ok
    ok = not failures and first == second and tamper_caught
    return CheckOutcome(ok, {"round trip failures": failures[:5], "deterministic": first == second, "tamper caught": tamper_caught})


class DeskChecks(Enum):
    NORMAL_ORDERING = DeskCheck("normal-ordering", "multiply agrees with the adjacent-swap oracle in A_1 and A_2", check_normal_ordering)
    POLYNOMIAL_CLOSURE = DeskCheck("polynomial-closure", "scripted certificates cover degree <= 4 in Q[z1,z2]", check_polynomial_closure)
    FIXPOINT_LAW = DeskCheck("fixpoint-law", "seed z^d saturates to dimension d+1 under the affine pool", check_fixpoint_law)
    WEYL_CLOSURE = DeskCheck("weyl-closure", "scripted certificates cover degree <= 3 in A_1", check_weyl_closure)
    FROBENIUS = DeskCheck("frobenius", "over F_2 the closure of z1^2 stays in even exponents", check_frobenius_confinement)
    TENSOR_GR = DeskCheck("tensor-gr", "gr of Q[z] x A_1 is the tensor product of the gr's", check_tensor_gr)
    LEADING_FORMS = DeskCheck("leading-forms", "leading forms multiply under the Bernstein filtration", check_leading_forms)
    GK_ADDITIVITY = DeskCheck("gk-additivity", "growth degrees 2, 2, 3, 0", check_gk_additivity)
    LEADING_POWERS = DeskCheck("leading-powers", "polynomials in f have weight degree n * deg f", check_leading_power_mechanism)
    INVERTIBLE_WEIGHTS = DeskCheck("invertible-weights", "Laurent generators must have weight 0", check_invertible_weights)
    ROUND_TRIP = DeskCheck("round-trip", "parse/format round trip, deterministic and tamper-evident certificates", check_round_trip)


def resolve(names: Iterable[str]) -> list[DeskCheck]:
    by_name = {c.value.name: c.value for c in DeskChecks}
    names = list(names)
    if not names:
        return list(by_name.values())
    unknown = [n for n in names if n not in by_name]
    if unknown:
        raise KeyError(f"Unknown desk check(s): {', '.join(unknown)}")
    return [by_name[n] for n in names]
