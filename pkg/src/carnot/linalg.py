"""Exact linear algebra helpers.

Two element regimes appear: plain :class:`~fractions.Fraction` matrices
(point evaluations) and generic field elements supporting +, -, *, / and
truthiness (rational functions).  Rank of a rational matrix goes through
fraction-free Bareiss elimination on the cleared integer matrix, which keeps
intermediate entries as minors instead of ever-growing fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

QF0 = Fraction(0)
QF1 = Fraction(1)


def rank_rational(rows: list[list[Fraction]]) -> int:
    """Exact rank via Bareiss fraction-free elimination over Z."""
    if not rows or not rows[0]:
        return 0
    m = []
    for row in rows:
        scale = lcm(*[Fraction(c).denominator for c in row]) if row else 1
        m.append([int(Fraction(c) * scale) for c in row])
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(row, nrows) if m[i][col]), None)
        if pivot_row is None:
            continue
        if pivot_row != row:
            m[row], m[pivot_row] = m[pivot_row], m[row]
        pivot = m[row][col]
        for i in range(row + 1, nrows):
            for j in range(col + 1, ncols):
                m[i][j] = (pivot * m[i][j] - m[i][col] * m[row][j]) // prev
            m[i][col] = 0
        prev = pivot
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def rref(rows: list[list], ncols: int, *, zero=QF0, one=QF1, transform: bool = False):
    """Reduced row echelon form over a field.  Returns (rows, pivot columns)
    or (rows, pivot columns, transform) with transform @ input = rows."""
    m = [list(r) for r in rows]
    nrows = len(m)
    t = None
    if transform:
        t = [[one if i == j else zero for j in range(nrows)] for i in range(nrows)]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(row, nrows) if m[i][col]), None)
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        if t is not None:
            t[row], t[pivot_row] = t[pivot_row], t[row]
        inv = m[row][col]
        m[row] = [c / inv for c in m[row]]
        if t is not None:
            t[row] = [c / inv for c in t[row]]
        for i in range(nrows):
            if i != row and m[i][col]:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[row])]
                if t is not None:
                    t[i] = [a - factor * b for a, b in zip(t[i], t[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    if transform:
        return m, pivots, t
    return m, pivots


def nullspace(rows: list[list], ncols: int, *, zero=QF0, one=QF1) -> list[list]:
    """Basis of the right kernel; each vector carries a 1 in its free slot."""
    reduced, pivots = rref(rows, ncols, zero=zero, one=one)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = zero - reduced[r][fc]
        basis.append(vec)
    return basis


def left_nullspace(rows: list[list], ncols: int, *, zero=QF0, one=QF1) -> list[list]:
    nrows = len(rows)
    transposed = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    return nullspace(transposed, nrows, zero=zero, one=one)


def solve(rows: list[list], rhs: list, ncols: int, *, zero=QF0, one=QF1):
    """One exact solution of A x = b with free coordinates set to zero, or
    None when the system is inconsistent."""
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1, zero=zero, one=one)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][ncols]
    return x


def det(rows: list[list]):
    """Division-free determinant by minor expansion with memoisation on
    column subsets; suited to small symbolic matrices (needs only +, -, *)."""
    n = len(rows)
    if n == 0:
        return QF1
    assert all(len(r) == n for r in rows)
    memo: dict[int, object] = {}

    def rec(row: int, mask: int):
        if row == n:
            return 1
        cached = memo.get(mask)
        if cached is not None:
            return cached
        total = None
        sign = 1
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                continue
            entry = rows[row][j]
            if entry:
                sub = rec(row + 1, mask | bit)
                term = entry * sub if sign > 0 else -(entry * sub)
                total = term if total is None else total + term
            sign = -sign
        if total is None:
            total = rows[row][0] - rows[row][0]
        memo[mask] = total
        return total

    return rec(0, 0)


def inertia_symmetric(rows: list[list[Fraction]]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a rational symmetric matrix via
    congruence diagonalisation."""
    n = len(rows)
    m = [[Fraction(c) for c in row] for row in rows]
    pos = neg = zero = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if m[i][i]), None)
        if k is None:
            hook = None
            for i in active:
                for j in active:
                    if i != j and m[i][j]:
                        hook = (i, j)
                        break
                if hook:
                    break
            if hook is None:
                zero += len(active)
                break
            i, j = hook
            # congruence by (row i += row j, col i += col j) creates a pivot
            for c in range(n):
                m[i][c] += m[j][c]
            for r in range(n):
                m[r][i] += m[r][j]
            continue
        d = m[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in list(active):
            if m[i][k]:
                f = m[i][k] / d
                for c in range(n):
                    m[i][c] -= f * m[k][c]
                for r in range(n):
                    m[r][i] -= f * m[r][k]
    return pos, neg, zero
