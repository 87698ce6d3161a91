from __future__ import annotations

from typing import Any, Sequence

from sympy.polys.matrices import DomainMatrix

from algebra.scalar import ScalarField


def domain_matrix(field: ScalarField, rows: Sequence[Sequence[Any]], ncols: int | None = None) -> DomainMatrix:
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    data = [[field.coerce(v) for v in row] for row in rows]
    return DomainMatrix(data, (nrows, ncols), field.domain)


def entries(matrix: DomainMatrix) -> list[list[Any]]:
    nrows, ncols = matrix.shape
    return [[matrix[i, j].element for j in range(ncols)] for i in range(nrows)]


def is_invertible(field: ScalarField, rows: Sequence[Sequence[Any]]) -> bool:
    n = len(rows)
    if any(len(row) != n for row in rows):
        return False
    return n == 0 or bool(domain_matrix(field, rows, n).det())


def invert(field: ScalarField, rows: Sequence[Sequence[Any]]) -> list[list[Any]]:
    """Exact inverse; the caller checks invertibility first."""
    return entries(domain_matrix(field, rows, len(rows)).inv())


def rref(field: ScalarField, rows: Sequence[Sequence[Any]], ncols: int) -> tuple[list[list[Any]], tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    reduced, pivots = domain_matrix(field, rows, ncols).rref()
    return entries(reduced), tuple(pivots)
