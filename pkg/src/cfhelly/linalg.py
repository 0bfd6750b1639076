"""Small exact and floating-point linear algebra helpers."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

Number = int | Fraction


def _integer_row(row: Sequence[Number]) -> list[int]:
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    out = [int(x * den) for x in row]
    g = 0
    for x in out:
        g = gcd(g, x)
    if g > 1:
        out = [x // g for x in out]
    return out


class RowSpace:
    """Incrementally built row echelon basis over the rationals.

    Rows are scaled to primitive integer vectors, so all arithmetic stays
    in Python integers.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Sequence[Number]) -> list[int]:
        r = _integer_row(row)
        if len(r) != self.ncols:
            raise ValueError(f"row has {len(r)} entries, expected {self.ncols}")
        for j in sorted(self.pivots):
            if r[j]:
                p = self.pivots[j]
                a, b = p[j], r[j]
                r = [a * x - b * y for x, y in zip(r, p)]
                g = 0
                for x in r:
                    g = gcd(g, x)
                if g > 1:
                    r = [x // g for x in r]
        return r

    def add(self, row: Sequence[Number]) -> bool:
        """Insert ``row``; return True if it was independent of the basis."""
        r = self.reduce(row)
        lead = next((j for j, x in enumerate(r) if x), None)
        if lead is None:
            return False
        # eliminate the new pivot column from the existing rows to keep a consistent echelon form
        for j, p in list(self.pivots.items()):
            if p[lead]:
                a, b = r[lead], p[lead]
                q = [a * x - b * y for x, y in zip(p, r)]
                g = 0
                for x in q:
                    g = gcd(g, x)
                self.pivots[j] = [x // g for x in q] if g > 1 else q
        self.pivots[lead] = r
        return True

    def contains(self, row: Sequence[Number]) -> bool:
        return not any(self.reduce(row))


def exact_rank(rows: Iterable[Sequence[Number]], ncols: int) -> int:
    space = RowSpace(ncols)
    for row in rows:
        space.add(row)
        if space.rank == ncols:
            break
    return space.rank


def exact_det(matrix: Sequence[Sequence[Number]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    if n == 0:
        return Fraction(1)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


def exact_inverse(matrix: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals; raises ZeroDivisionError if singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def cayley_orthogonal(skew: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """(I - S)(I + S)^-1, a rational orthogonal matrix for skew-symmetric S."""
    n = len(skew)
    minus = [[Fraction(int(i == j)) - skew[i][j] for j in range(n)] for i in range(n)]
    plus_inv = exact_inverse([[Fraction(int(i == j)) + skew[i][j] for j in range(n)] for i in range(n)])
    return [[sum(minus[i][t] * plus_inv[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def int_det(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def float_rank(matrix: np.ndarray, rel_tol: float = 1e-8) -> tuple[int, float]:
    """Rank by singular values; also return the gap ratio around the cutoff.

    The gap is (smallest kept singular value) / (largest dropped one),
    ``inf`` when nothing is dropped.
    """
    if matrix.size == 0:
        return 0, float("inf")
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0:
        return 0, float("inf")
    cut = rel_tol * s[0]
    kept = s[s > cut]
    dropped = s[s <= cut]
    rank = len(kept)
    if len(dropped) == 0 or dropped[0] == 0:
        return rank, float("inf")
    if rank == 0:
        return 0, 0.0
    return rank, float(kept[-1] / dropped[0])
