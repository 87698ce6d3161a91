from __future__ import annotations

import logging

from algebra.scalar import ScalarField
from algebra.signature import AlgebraSignature, AtomKind
from config import PoolPreset
from morphism.endomap import EndoMap
from morphism.exception import BadParameters
from morphism.families import AutFamily, AutFamilyParams, builtin_family

logger = logging.getLogger(__name__)


def scaling_constant(field: ScalarField) -> int | None:
    """Smallest integer c >= 2 that is a unit different from 1, if any."""
    return 2 if field.characteristic != 2 else None


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _transposition(n: int, i: int, j: int) -> tuple[int, ...]:
    perm = list(range(1, n + 1))
    perm[i], perm[j] = perm[j], perm[i]
    return tuple(perm)


def affine_params(sig: AlgebraSignature) -> list[AutFamilyParams]:
    variables = sig.polynomial_variables
    m = len(variables)
    c = scaling_constant(sig.field)
    params = []
    for k, var in enumerate(variables):
        params.append(AutFamilyParams(AutFamily.SHIFT, generator=sig.generators[var].name))
        if c is not None:
            matrix = _identity(m)
            matrix[k][k] = c
            params.append(AutFamilyParams(AutFamily.LINEAR, matrix=matrix))
    for i in range(m):
        for j in range(i + 1, m):
            params.append(AutFamilyParams(AutFamily.PERMUTATION, permutation=_transposition(m, i, j)))
    return params


def triangular_params(sig: AlgebraSignature) -> list[AutFamilyParams]:
    params = affine_params(sig)
    names = [sig.generators[v].name for v in sig.polynomial_variables]
    for target in names:
        for other in names:
            if other == target:
                continue
            for h in (other, f"{other}^2"):
                params.append(AutFamilyParams(AutFamily.TRIANGULAR, generator=target, polynomial=h))
    return params


def weyl_standard_params(sig: AlgebraSignature) -> list[AutFamilyParams]:
    field = sig.field
    c = scaling_constant(field)
    n = len(sig.weyl_pairs)
    params = []
    for i, (xi, yi) in enumerate(sig.weyl_pairs, start=1):
        x, y = sig.generators[xi].name, sig.generators[yi].name
        if c is not None:
            params.append(AutFamilyParams(AutFamily.WEYL_SCALING, index=i, scalar=c))
        params.append(AutFamilyParams(AutFamily.WEYL_SWAP, index=i))
        for h in ("1", x, f"{x}^2"):
            params.append(AutFamilyParams(AutFamily.ALPHA_H, index=i, polynomial=h))
        for beta in (1, 2):
            if field(beta):
                params.append(AutFamilyParams(AutFamily.BETA_IC, index=i, scalar=beta))
        params.append(AutFamilyParams(AutFamily.SHIFT, generator=x))
        params.append(AutFamilyParams(AutFamily.SHIFT, generator=y))
    for i in range(n - 1):
        params.append(AutFamilyParams(AutFamily.PERMUTATION, permutation=_transposition(n, i, i + 1)))
        matrix = _identity(n)
        matrix[i][i + 1] = 1
        params.append(AutFamilyParams(AutFamily.WEYL_LINEAR, matrix=matrix))
    return params


_BUILDERS = {
    PoolPreset.AFFINE: affine_params,
    PoolPreset.TRIANGULAR: triangular_params,
    PoolPreset.WEYL_STANDARD: weyl_standard_params,
}


def _factor_default(atom_kind: AtomKind) -> PoolPreset | None:
    if atom_kind == AtomKind.POLYNOMIAL:
        return PoolPreset.TRIANGULAR
    if atom_kind == AtomKind.WEYL:
        return PoolPreset.WEYL_STANDARD
    return None


def pool_params(sig: AlgebraSignature, preset: PoolPreset | str) -> list[AutFamilyParams]:
    preset = PoolPreset(preset)
    if preset != PoolPreset.STANDARD:
        if len(sig.atoms) > 1:
            raise BadParameters(
                f"Preset {preset.value} needs a single-atom signature, got {sig.text()}.",
                hint="Use the 'standard' preset for tensor products.",
            )
        return _BUILDERS[preset](sig)

    if len(sig.atoms) == 1:
        default = _factor_default(sig.atoms[0].kind)
        return [] if default is None else _BUILDERS[default](sig)
    params = []
    for factor, atom in enumerate(sig.atoms, start=1):
        default = _factor_default(atom.kind)
        if default is None:
            continue
        inner = _BUILDERS[default](sig.factor_signature(factor - 1))
        params.extend(AutFamilyParams(AutFamily.TENSOR_LIFT, factor=factor, inner=p) for p in inner)
    return params


def pool_preset(sig: AlgebraSignature, preset: PoolPreset | str) -> list[EndoMap]:
    """Validated automorphisms of the named preset, in a fixed order."""
    maps = [builtin_family(sig, p) for p in pool_params(sig, preset)]
    logger.info("Pool %s on %s: %d maps", PoolPreset(preset).value, sig.text(), len(maps))
    return maps
