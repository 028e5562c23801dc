"""Fraction-free (Bareiss) elimination over the integers."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = ["EchelonForm", "integer_rows", "echelon", "solve_unique"]


class EchelonForm:
    """Result of :func:`echelon` on an augmented matrix ``[A | b]``."""

    def __init__(self, rows, pivots, ncols):
        self.rows = rows
        self.pivots = pivots  # list of (row, col) in the coefficient part
        self.ncols = ncols

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def consistent(self) -> bool:
        r = self.rank
        return all(row[self.ncols] == 0 for row in self.rows[r:])

    def inconsistent_rows(self) -> int:
        return sum(1 for row in self.rows[self.rank :] if row[self.ncols] != 0)


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators."""
    out = []
    for row in rows:
        m = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * m) for x in row])
    return out


def echelon(aug: list[list[int]], ncols: int) -> EchelonForm:
    """Bareiss row echelon form of an integer augmented matrix.

    Only the first ``ncols`` columns are pivot candidates; the rest ride
    along.  Every intermediate entry is a minor of the input, so the
    division by the previous pivot is exact.
    """
    m = [list(r) for r in aug]
    nrows = len(m)
    width = len(m[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        rowr = m[r]
        for i in range(r + 1, nrows):
            rowi = m[i]
            f = rowi[c]
            if f:
                for j in range(c + 1, width):
                    rowi[j] = (piv * rowi[j] - f * rowr[j]) // prev
            else:
                for j in range(c + 1, width):
                    rowi[j] = (piv * rowi[j]) // prev
            rowi[c] = 0
        prev = piv
        pivots.append((r, c))
        r += 1
    return EchelonForm(m, pivots, ncols)


def solve_unique(ef: EchelonForm) -> list[Fraction]:
    """Back substitution; requires full column rank."""
    n = ef.ncols
    if ef.rank != n:
        raise ValueError("system is rank deficient")
    x = [Fraction(0)] * n
    for r, c in reversed(ef.pivots):
        row = ef.rows[r]
        s = Fraction(row[n])
        for j in range(c + 1, n):
            if row[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x
