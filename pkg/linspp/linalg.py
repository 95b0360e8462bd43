"""Exact rational linear algebra on top of sympy's DomainMatrix over QQ."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from linspp.costs import Rational

Row = Sequence[Rational]


def _qq(value: Rational) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(value: object) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))  # type: ignore[attr-defined]


def domain_matrix(rows: Sequence[Row], ncols: int) -> DomainMatrix:
    data = [[_qq(x) for x in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ).to_sparse()


def rref(rows: Sequence[Row], ncols: int) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if not rows:
        return [], ()
    reduced, pivots = domain_matrix(rows, ncols).rref()
    dense = reduced.to_dense().to_list()
    return [[_fraction(x) for x in dense[i]] for i in range(len(pivots))], tuple(pivots)


def rank(rows: Sequence[Row], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Row], ncols: int) -> list[list[Fraction]]:
    """Kernel basis: one vector per free column, 1 there and 0 on the other free columns."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -reduced[i][free]
        basis.append(vec)
    return basis


def mat_vec(rows: Sequence[Row], vec: Row) -> list[Fraction]:
    return [
        sum((Fraction(a) * b for a, b in zip(row, vec, strict=True)), Fraction(0)) for row in rows
    ]


def solve(rows: Sequence[Row], rhs: Row, ncols: int) -> list[Fraction] | None:
    """One solution of rows · x = rhs with free variables at 0, or None."""
    augmented = [[*row, b] for row, b in zip(rows, rhs, strict=True)]
    reduced, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][ncols]
    return x


def dependencies(
    rows: Sequence[Row], ncols: int
) -> tuple[tuple[int, ...], dict[int, list[Fraction]]]:
    """Independent rows and, for every other row, its coefficients over them.

    Returns ``(basis_rows, combos)`` where row j equals
    ``sum(combos[j][i] * rows[basis_rows[i]])``.
    """
    if not rows:
        return (), {}
    transposed = [[row[c] for row in rows] for c in range(ncols)]
    reduced, pivots = rref(transposed, len(rows))
    combos = {}
    pivot_set = set(pivots)
    for j in range(len(rows)):
        if j not in pivot_set:
            combos[j] = [reduced[i][j] for i in range(len(pivots))]
    return pivots, combos
