from __future__ import annotations

import logging
from typing import Any, Callable, Sequence

from sympy import Rational

import config
from algebra import linalg
from algebra.element import Element, partial_degree, total_degree
from algebra.signature import AlgebraSignature, Monomial
from closure.certificate import CertificateBuilder, CertStep, ClosureCertificate
from closure.exception import (
    CharacteristicPositive,
    InputNotDegreeOne,
    ScalarSeed,
    SelectionFailed,
    SingularSystem,
    UnsupportedSignature,
    ZeroLinearPart,
)
from closure.saturation import certificate_from_saturation, saturate
from config import PoolPreset
from expression.printer import format_monomial
from morphism.families import AutFamily, AutFamilyParams
from morphism.pools import pool_preset

logger = logging.getLogger(__name__)


def _rational(sig: AlgebraSignature, c: Any) -> Rational:
    return Rational(*sig.field.numerator_denominator(sig.field.coerce(c)))


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _pencil_scalars(count: int) -> list[int]:
    start = config.ACTIVE_CONFIG.engine.vandermonde_start
    return list(range(start, start + count))


def _with_exponents(mono: Monomial, updates: dict[int, int]) -> Monomial:
    out = list(mono)
    for index, e in updates.items():
        out[index] = e
    return tuple(out)


def check_signature(sig: AlgebraSignature) -> None:
    if sig.characteristic != 0:
        raise CharacteristicPositive(
            f"Scripted closure works in characteristic 0, not over {sig.field.label}.",
            hint="Use saturate for positive characteristic experiments.",
        )
    if not (sig.is_polynomial or sig.is_weyl) or sig.size == 0:
        raise UnsupportedSignature(
            f"Scripted closure needs a polynomial or Weyl signature, got {sig.text()}.",
            context={"algebra": sig.text()},
        )


def check_seed(seed: Element) -> None:
    check_signature(seed.signature)
    if seed.is_scalar():
        raise ScalarSeed("The seed is a scalar; its span is already stable.", context={"seed": str(seed)})


def select_variable(f: Element) -> int:
    """
    Generator to shift next. Prefer a generator of partial degree >= 2;
    otherwise one of partial degree 1 whose cofactor is not a scalar.
    """
    sig = f.signature
    candidates = sig.polynomial_variables if sig.is_polynomial else [i for pair in sig.weyl_pairs for i in pair]
    for i in candidates:
        if partial_degree(f, i) >= 2:
            return i
    for i in candidates:
        if partial_degree(f, i) != 1:
            continue
        if any(m[i] == 1 and any(e for j, e in enumerate(m) if j != i) for m in f.terms):
            return i
    raise SelectionFailed(
        f"No generator of {f} satisfies the selection rule.",
        context={"element": str(f)},
    )


def _reduce_to_degree_one(builder: CertificateBuilder, start: int) -> int:
    sig = builder.signature
    current = start
    while total_degree(builder.result(current)) >= 2:
        f = builder.result(current)
        i = select_variable(f)
        params = AutFamilyParams(AutFamily.SHIFT, generator=sig.generators[i].name)
        step = builder.difference(params, current)
        g = builder.result(step)
        if g.is_scalar() or total_degree(g) >= total_degree(f):
            raise SelectionFailed(
                f"Shifting {sig.generators[i].name} does not lower the degree of {f}.",
                context={"element": str(f), "result": str(g)},
            )
        logger.debug("shift %s: degree %s -> %s", sig.generators[i].name, total_degree(f), total_degree(g))
        current = step
    return current


def reduce_to_degree_one(seed: Element) -> tuple[Element, list[CertStep]]:
    """Shift-difference the seed down to total degree one; returns the trace."""
    check_seed(seed)
    builder = CertificateBuilder(seed.signature, seed, 1)
    final = _reduce_to_degree_one(builder, builder.seed())
    return builder.result(final), list(builder.steps)


def _polynomial_linear_part(builder: CertificateBuilder, f_id: int) -> None:
    sig = builder.signature
    field = sig.field
    f = builder.result(f_id)
    variables = sig.polynomial_variables
    m = len(variables)
    coeffs = [f.coefficient(sig.unit(v)) for v in variables]
    k0 = next(k for k, a in enumerate(coeffs) if a)
    pivot = variables[k0]
    name = sig.generators[pivot].name

    if f == Element.generator(sig, pivot):
        z_id = f_id
    else:
        # z_k0 -> (z_k0 - b - sum_{j != k0} a_j z_j) / a_k0 sends f to z_k0
        inv = field.inverse(coeffs[k0])
        matrix: list[list[Any]] = _identity(m)
        matrix[k0] = [inv if j == k0 else -coeffs[j] * inv for j in range(m)]
        translation = [0] * m
        translation[k0] = -f.coefficient(sig.unit_monomial) * inv
        params = AutFamilyParams(
            AutFamily.LINEAR,
            matrix=tuple(tuple(_rational(sig, v) for v in row) for row in matrix),
            translation=tuple(_rational(sig, v) for v in translation),
        )
        z_id = builder.apply(params, f_id)
    builder.cover(sig.unit(pivot), z_id)

    one = builder.difference(AutFamilyParams(AutFamily.SHIFT, generator=name), z_id)
    builder.cover(sig.unit_monomial, one)

    for k, var in enumerate(variables):
        if k == k0:
            continue
        perm = list(range(1, m + 1))
        perm[k0], perm[k] = perm[k], perm[k0]
        builder.cover(sig.unit(var), builder.apply(AutFamilyParams(AutFamily.PERMUTATION, permutation=perm), z_id))


def _weyl_linear_part(builder: CertificateBuilder, f_id: int) -> None:
    sig = builder.signature
    field = sig.field
    f = builder.result(f_id)
    pairs = sig.weyl_pairs
    n = len(pairs)
    a = [f.coefficient(sig.unit(x)) for x, _ in pairs]
    b = [f.coefficient(sig.unit(y)) for _, y in pairs]
    i0 = next(k for k in range(n) if a[k] or b[k])
    index = i0 + 1
    swap = AutFamilyParams(AutFamily.WEYL_SWAP, index=index)

    current = f_id
    leading = a[i0]
    if not leading:
        current = builder.apply(swap, current)
        leading = -b[i0]

    # f1 = tau(f) - f = a x + (-1/2) b y, f2 = 2 tau(f1) - f1 = 3 a x
    scaling = AutFamilyParams(AutFamily.WEYL_SCALING, index=index, scalar=2)
    f1 = builder.difference(scaling, current)
    f2 = builder.combine([builder.apply(scaling, f1), f1], [2, -1])
    x_id = builder.combine([f2], [field.inverse(field(3) * leading)])
    y_id = builder.apply(swap, x_id)
    xi, yi = pairs[i0]
    builder.cover(sig.unit(xi), x_id)
    builder.cover(sig.unit(yi), y_id)

    one = builder.difference(AutFamilyParams(AutFamily.ALPHA_H, index=index, polynomial="1"), y_id)
    builder.cover(sig.unit_monomial, one)

    for k, (xk, yk) in enumerate(pairs):
        if k == i0:
            continue
        perm = list(range(1, n + 1))
        perm[i0], perm[k] = perm[k], perm[i0]
        params = AutFamilyParams(AutFamily.PERMUTATION, permutation=perm)
        builder.cover(sig.unit(xk), builder.apply(params, x_id))
        builder.cover(sig.unit(yk), builder.apply(params, y_id))


def _linear_part(builder: CertificateBuilder, f_id: int) -> None:
    f = builder.result(f_id)
    degree = total_degree(f)
    if degree <= 0:
        raise ZeroLinearPart(f"{f} has no linear part.", context={"element": str(f)})
    if degree != 1:
        raise InputNotDegreeOne(f"{f} has degree {degree}, expected 1.", context={"element": str(f)})
    if builder.signature.is_polynomial:
        _polynomial_linear_part(builder, f_id)
    else:
        _weyl_linear_part(builder, f_id)


def linear_part(f: Element) -> tuple[list[CertStep], dict[Monomial, int]]:
    """Steps deriving 1 and every generator from a degree-one element."""
    check_signature(f.signature)
    builder = CertificateBuilder(f.signature, f, 1)
    _linear_part(builder, builder.seed())
    return list(builder.steps), dict(builder.coverage)


def vandermonde_extract(
    images: Sequence[Element],
    targets: Sequence[Monomial],
    known: Sequence[Element] = (),
) -> list[list[Any]]:
    """
    Coefficients over images + known expressing each target monomial, found
    by row reducing the images together with already certified elements.
    """
    generators = list(images) + list(known)
    if not generators:
        raise SingularSystem("No images to extract from.")
    sig = generators[0].signature
    field = sig.field
    monomials = set(targets)
    for g in generators:
        monomials.update(g.terms)
    order = sorted(monomials, key=AlgebraSignature.order_key, reverse=True)
    row_of = {m: r for r, m in enumerate(order)}

    width = len(generators) + len(targets)
    rows: list[list[Any]] = [[0] * width for _ in order]
    for col, g in enumerate(generators):
        for mono, c in g.terms.items():
            rows[row_of[mono]][col] = c
    for t, mono in enumerate(targets):
        rows[row_of[mono]][len(generators) + t] = 1

    reduced, pivots = linalg.rref(field, rows, width)
    blocked = [p - len(generators) for p in pivots if p >= len(generators)]
    if blocked:
        raise SingularSystem(
            f"Pencil images do not determine {format_monomial(sig, targets[blocked[0]]) or '1'}.",
            hint="Use more distinct pencil scalars.",
            context={"images": len(images), "targets": len(targets)},
        )
    solutions = []
    for t in range(len(targets)):
        coeffs = [field.zero] * len(generators)
        for r, p in enumerate(pivots):
            coeffs[p] = reduced[r][len(generators) + t]
        solutions.append(coeffs)
    return solutions


def _extract_pencil(
    builder: CertificateBuilder,
    source: Monomial,
    targets: list[Monomial],
    family: Callable[[int], AutFamilyParams],
    known: Sequence[Monomial] = (),
) -> None:
    """Apply the pencil maps family(c) to source and certify every target."""
    if all(builder.covered(t) for t in targets):
        return
    source_id = builder.coverage[source]
    image_ids = [
        source_id if c == 0 else builder.apply(family(c), source_id)
        for c in _pencil_scalars(len(targets))
    ]
    known_ids = [builder.coverage[m] for m in known]
    solutions = vandermonde_extract(
        [builder.result(i) for i in image_ids],
        targets,
        [builder.result(i) for i in known_ids],
    )
    for target, coeffs in zip(targets, solutions):
        if not builder.covered(target):
            builder.cover(target, builder.combine(image_ids + known_ids, coeffs))


def _polynomial_monomials(builder: CertificateBuilder) -> None:
    sig = builder.signature
    cap = builder.cap
    variables = sig.polynomial_variables
    m = len(variables)
    last, pen = variables[-1], variables[-2]
    last_id = builder.coverage[sig.unit(last)]

    # z_m -> z_m + mu gives every monomial mu in z_1..z_{m-1}
    for mu in sig.iter_monomials_in(variables[:-1], cap):
        if AlgebraSignature.degree(mu) < 2:
            continue
        params = AutFamilyParams(
            AutFamily.TRIANGULAR, generator=sig.generators[last].name, polynomial=format_monomial(sig, mu)
        )
        builder.cover(mu, builder.difference(params, last_id))

    # z_{m-1} -> z_{m-1} + c z_m spreads z_{m-1}^e over z_{m-1}^(e-j) z_m^j
    def mixing(c: int) -> AutFamilyParams:
        matrix = _identity(m)
        matrix[m - 2][m - 1] = c
        return AutFamilyParams(AutFamily.LINEAR, matrix=matrix)

    for source in sig.iter_monomials_in(variables[:-1], cap):
        e = source[pen]
        if e == 0:
            continue
        targets = [_with_exponents(source, {pen: e - j, last: j}) for j in range(e + 1)]
        _extract_pencil(builder, source, targets, mixing)


def _weyl_monomials(builder: CertificateBuilder) -> None:
    sig = builder.signature
    cap = builder.cap
    pairs = sig.weyl_pairs
    n = len(pairs)
    xs = [x for x, _ in pairs]
    x1_name = sig.generators[xs[0]].name
    y1_id = builder.coverage[sig.unit(pairs[0][1])]

    # (alpha_h - Id)(y1) = h for h = x1^d
    for d in range(2, cap + 1):
        params = AutFamilyParams(AutFamily.ALPHA_H, index=1, polynomial=f"{x1_name}^{d}")
        builder.cover(_with_exponents(sig.unit_monomial, {xs[0]: d}), builder.difference(params, y1_id))

    # x_k -> x_k + c x_{k+1} reaches every monomial in the x generators
    for k in range(n - 1):
        def mixing(c: int, k: int = k) -> AutFamilyParams:
            matrix = _identity(n)
            matrix[k][k + 1] = c
            return AutFamilyParams(AutFamily.WEYL_LINEAR, matrix=matrix)

        pen, nxt = xs[k], xs[k + 1]
        for source in sig.iter_monomials_in(xs[:k + 1], cap):
            e = source[pen]
            if e == 0:
                continue
            targets = [_with_exponents(source, {pen: e - j, nxt: j}) for j in range(e + 1)]
            _extract_pencil(builder, source, targets, mixing)

    # x_i -> x_i + c y_i, with the lower degree terms of (x_i + c y_i)^e
    # absorbed by monomials certified earlier in ascending degree
    for i, (xi, yi) in enumerate(pairs):
        def beta(c: int, i: int = i) -> AutFamilyParams:
            return AutFamilyParams(AutFamily.BETA_IC, index=i + 1, scalar=c)

        for source in sig.monomials(cap):
            e = source[xi]
            if e == 0 or any(source[y] for _, y in pairs[i:]):
                continue
            targets = [_with_exponents(source, {xi: e - j, yi: j}) for j in range(e + 1)]
            known = [
                _with_exponents(source, {xi: a, yi: total - a})
                for total in range(e)
                for a in range(total + 1)
            ]
            _extract_pencil(builder, source, targets, beta, known)


def scripted_closure(seed: Element, cap: int) -> ClosureCertificate:
    """
    Certificate that the Aut-stable span of the seed contains every monomial
    of degree <= cap, built from shift differences, the linear part and
    pencil extraction.
    """
    check_seed(seed)
    sig = seed.signature
    if sig.is_polynomial and len(sig.polynomial_variables) < 2:
        raise UnsupportedSignature(
            "Polynomial closure needs at least two variables.",
            console_message=(
                "In one variable the powers (k + kz)^d span proper stable subspaces, "
                "so no seed reaches every monomial."
            ),
            context={"algebra": sig.text()},
        )

    builder = CertificateBuilder(sig, seed, cap)
    start = builder.seed()
    try:
        linear = _reduce_to_degree_one(builder, start)
    except SelectionFailed as e:
        logger.warning("%s Falling back to saturation.", e.message)
        return _saturation_fallback(seed, cap)

    _linear_part(builder, linear)
    if sig.is_polynomial:
        _polynomial_monomials(builder)
    else:
        _weyl_monomials(builder)
    cert = builder.build()
    logger.info("Scripted closure of %s: %d steps, %d monomials", seed, len(cert.steps), len(cert.coverage))
    return cert


def _saturation_fallback(seed: Element, cap: int) -> ClosureCertificate:
    pool = pool_preset(seed.signature, PoolPreset.STANDARD)
    result = saturate([seed], pool, cap, record=True)
    return certificate_from_saturation(result)
