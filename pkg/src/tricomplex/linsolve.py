"""Exact linear algebra over the rationals (dense Gaussian elimination).

The systems arising from homotopy-operator ansatz solves and on-shell ideal
membership are small (tens to a few hundred unknowns), so a dense
fraction-free-ish elimination is plenty.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Mapping, Sequence


def solve_exact(
    columns: Sequence[Mapping[Hashable, Fraction]],
    rhs: Mapping[Hashable, Fraction],
) -> list[Fraction] | None:
    """Solve  sum_j x_j * columns[j] = rhs  over the rationals.

    Columns and the right-hand side are sparse vectors keyed by arbitrary
    hashable row labels.  Returns one solution (free variables set to zero)
    or None when the system is inconsistent.
    """
    row_labels: dict[Hashable, int] = {}
    for col in columns:
        for key in col:
            row_labels.setdefault(key, len(row_labels))
    for key in rhs:
        row_labels.setdefault(key, len(row_labels))

    nrows = len(row_labels)
    ncols = len(columns)
    matrix = [[Fraction(0)] * (ncols + 1) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for key, value in col.items():
            if value:
                matrix[row_labels[key]][j] = Fraction(value)
    for key, value in rhs.items():
        if value:
            matrix[row_labels[key]][ncols] = Fraction(value)

    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, nrows):
            if matrix[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        matrix[row], matrix[pivot] = matrix[pivot], matrix[row]
        inv = 1 / matrix[row][col]
        matrix[row] = [v * inv for v in matrix[row]]
        for r in range(nrows):
            if r != row and matrix[r][col]:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[row])]
        pivots.append((row, col))
        row += 1
        if row == nrows:
            break
    # inconsistency: a zero row with nonzero rhs
    for r in range(nrows):
        if matrix[r][ncols] and all(not v for v in matrix[r][:ncols]):
            return None
    solution = [Fraction(0)] * ncols
    for r, c in pivots:
        solution[c] = matrix[r][ncols]
    return solution
