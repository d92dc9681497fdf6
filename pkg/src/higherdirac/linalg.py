"""Exact linear algebra over ℚ: echelon forms, kernels, rank, linear solves.

Rows are scaled to primitive integer vectors and reduced fraction-free;
rationals only reappear when the reduced row-echelon form is read out.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


_ZERO = Fraction(0)
_ONE = Fraction(1)


def int_row(row: Sequence) -> list[int]:
    """A positive multiple of ``row`` with integer entries."""
    den = 1
    for x in row:
        if x and type(x) is not int and x.denominator != 1:
            den = lcm(den, x.denominator)
    if den == 1:
        return [x if type(x) is int else x.numerator for x in row]
    return [
        x * den if type(x) is int else x.numerator * (den // x.denominator) for x in row
    ]


def _primitive(row: list[int], lead: int) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if row[lead] < 0:
        g = -g
    if g not in (0, 1):
        row = [x // g for x in row]
    return row


class Echelon:
    """Incrementally built row-echelon basis of a subspace of ℚ^ncols."""

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int, rows: Iterable[Sequence] = ()):
        self.ncols = ncols
        self.rows: dict[int, list[int]] = {}
        for r in rows:
            self.add(r)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce_int(self, r: list[int]) -> tuple[list[int], int]:
        ncols = self.ncols
        rows = self.rows
        c = 0
        while True:
            while c < ncols and r[c] == 0:
                c += 1
            if c == ncols:
                return r, -1
            p = rows.get(c)
            if p is None:
                return r, c
            a, b = p[c], r[c]
            g = gcd(a, b)
            a //= g
            b //= g
            r = [a * x - b * y for x, y in zip(r, p)]
            r = _primitive(r, c)

    def add(self, row: Sequence) -> bool:
        """Insert ``row``; return ``True`` when it was independent."""
        r, lead = self._reduce_int(int_row(row))
        if lead < 0:
            return False
        self.rows[lead] = _primitive(r, lead)
        return True

    def contains(self, row: Sequence) -> bool:
        return self._reduce_int(int_row(row))[1] < 0

    def full(self) -> bool:
        return len(self.rows) == self.ncols

    def rref(self) -> list[tuple[Fraction, ...]]:
        """Reduced row-echelon rows (pivots 1, pivot columns cleared), by pivot."""
        piv = sorted(self.rows)
        work = {c: list(self.rows[c]) for c in piv}
        for i in range(len(piv) - 1, -1, -1):
            c = piv[i]
            pr = work[c]
            for j in range(i):
                other = work[piv[j]]
                if other[c]:
                    a, b = pr[c], other[c]
                    g = gcd(a, b)
                    a //= g
                    b //= g
                    other = [a * x - b * y for x, y in zip(other, pr)]
                    work[piv[j]] = _primitive(other, piv[j])
        out = []
        for c in piv:
            r = work[c]
            lead = r[c]
            if lead == 1:
                out.append(tuple(Fraction(x) if x else _ZERO for x in r))
            else:
                out.append(tuple(Fraction(x, lead) if x else _ZERO for x in r))
        return out

    def pivots(self) -> list[int]:
        return sorted(self.rows)


def rref(rows: Iterable[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    return Echelon(ncols, rows).rref()


def rank(rows: Iterable[Sequence], ncols: int) -> int:
    return Echelon(ncols, rows).rank


def nullspace(rows: Iterable[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{v : row·v = 0 for every row}``, one vector per free column."""
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
        if ech.full():
            return []
    red = ech.rref()
    pivots = [next(i for i, x in enumerate(r) if x) for r in red]
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    zero = Fraction(0)
    for f in free:
        v = [zero] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            if r[f]:
                v[p] = -r[f]
        out.append(tuple(v))
    return out


def solve(columns: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Coefficients ``c`` with ``Σ c_j columns[j] = target``, or ``None``.

    The particular solution sets free unknowns to zero.
    """
    m = len(columns)
    if m == 0:
        return [] if all(x == 0 for x in target) else None
    dim = len(target)
    # augmented system, one equation per coordinate
    eqs = [[columns[j][i] for j in range(m)] + [target[i]] for i in range(dim)]
    red = rref(eqs, m + 1)
    sol = [Fraction(0)] * m
    for r in red:
        p = next(i for i, x in enumerate(r) if x)
        if p == m:
            return None
        sol[p] = r[m]
    return sol
