"""Exact linear algebra over Fractions: unique solves, determinants, and
phase-1 simplex feasibility with Bland's rule.

Nothing here is asymptotically clever; every routine is meant for systems
with at most a dozen rows, where exactness matters far more than speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Matrix = list[list[Fraction]]


def solve_unique(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Solve A x = b exactly; return x only when the solution exists and is
    unique, else None (inconsistent or underdetermined).

    The system may be overdetermined; redundant rows are fine as long as the
    column rank is full and the system is consistent.
    """
    m = len(rows)
    if m != len(rhs):
        raise ValueError("row/rhs length mismatch")
    n = len(rows[0]) if m else 0
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for row in aug:
        if len(row) != n + 1:
            raise ValueError("ragged matrix")

    pivot_cols: list[int] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
        if r == m:
            break

    # inconsistent?
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    if len(pivot_cols) < n:
        return None  # underdetermined
    x = [Fraction(0)] * n
    for i, c in enumerate(pivot_cols):
        x[c] = aug[i][n]
    return x


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(rows)
    a = [[Fraction(v) for v in row] for row in rows]
    for row in a:
        if len(row) != n:
            raise ValueError("determinant needs a square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            sign = -sign
        pv = a[c][c]
        result *= pv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / pv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


def orient2d(p, q, r) -> int:
    """Sign of the signed area of triangle pqr (exact; works on int or
    Fraction coordinates)."""
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def feasible_nonneg(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> bool:
    """Exact feasibility of {x >= 0 : A x = b} via phase-1 simplex.

    Bland's anti-cycling rule guarantees termination; everything is Fraction
    arithmetic, so the verdict is exact.
    """
    m = len(rows)
    if m == 0:
        return True
    n = len(rows[0])
    a: Matrix = []
    b: list[Fraction] = []
    for i in range(m):
        row = [Fraction(v) for v in rows[i]]
        bi = Fraction(rhs[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        a.append(row)
        b.append(bi)

    # tableau with one artificial variable per row; minimize their sum.
    # columns: 0..n-1 original, n..n+m-1 artificial, last = rhs
    width = n + m + 1
    tab: Matrix = []
    for i in range(m):
        row = a[i] + [Fraction(0)] * m + [b[i]]
        row[n + i] = Fraction(1)
        tab.append(row)
    # objective row: reduced costs of sum(artificials) after pricing them out
    obj = [Fraction(0)] * width
    for j in range(width):
        s = Fraction(0)
        for i in range(m):
            s += tab[i][j]
        obj[j] = s
    for i in range(m):
        obj[n + i] = Fraction(0)
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(n + m) if obj[j] > 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][width - 1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            # unbounded phase-1 objective cannot happen (it is bounded below
            # by 0), so this would indicate a programming error
            raise AssertionError("phase-1 simplex claims unbounded")
        pv = tab[leave][enter]
        tab[leave] = [v / pv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, tab[leave])]
        basis[leave] = enter

    return obj[width - 1] == 0
