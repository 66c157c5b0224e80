"""The Poisson bivector of a graded algebra as a matrix of linear polynomials.

Entry (i, j) of the full matrix is the bracket [w_i, w_j] written as a linear
polynomial in the dual coordinates, so evaluating the matrix at a point p of
the dual space gives the skew pairing B_p.  Graded blocks come from the basis
ordering; the (g_m, g_n) block has entries inside degree m + n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import DimensionInequalityError, InputError
from .lie import GradedAlgebra, HallWord, LieElement, generator, iterated_bracket
from .poly import Point, Polynomial, bracket_polynomial

Q0 = Fraction(0)
Q1 = Fraction(1)


@dataclass(frozen=True)
class PolyMatrix:
    alg: GradedAlgebra
    rows: tuple[HallWord, ...]
    cols: tuple[HallWord, ...]
    entries: tuple[tuple[Polynomial, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    def entry(self, row: HallWord | int, col: HallWord | int) -> Polynomial:
        i = row if isinstance(row, int) else self.rows.index(row)
        j = col if isinstance(col, int) else self.cols.index(col)
        return self.entries[i][j]

    def to_lists(self) -> list[list[Polynomial]]:
        return [list(r) for r in self.entries]

    def records(self) -> dict:
        return {
            "rows": [w.name for w in self.rows],
            "cols": [w.name for w in self.cols],
            "entries": [[str(e) for e in row] for row in self.entries],
        }


def bivector(alg: GradedAlgebra) -> PolyMatrix:
    """Full antisymmetric matrix of the Poisson bivector over the basis."""
    cached = alg.caches.get("bivector")
    if cached is not None:
        return cached
    n = alg.dim
    entries = tuple(
        tuple(bracket_polynomial(alg, i, j) for j in range(n)) for i in range(n)
    )
    mat = PolyMatrix(alg, alg.basis, alg.basis, entries)
    alg.caches["bivector"] = mat
    return mat


def block(alg: GradedAlgebra, row_degree: int, col_degree: int) -> PolyMatrix:
    """The (g_m, g_n) sub-matrix of the bivector."""
    if not (1 <= row_degree <= alg.s and 1 <= col_degree <= alg.s):
        raise InputError(f"block degrees must be in 1..{alg.s}")
    rows = alg.slice_of_degree(row_degree)
    cols = alg.slice_of_degree(col_degree)
    entries = tuple(
        tuple(bracket_polynomial(alg, i, j) for j in cols) for i in rows
    )
    return PolyMatrix(
        alg,
        tuple(alg.basis[i] for i in rows),
        tuple(alg.basis[j] for j in cols),
        entries,
    )


def evaluate_matrix(mat: PolyMatrix, point: Point) -> list[list[Fraction]]:
    if point.alg.key != mat.alg.key:
        raise InputError("point and matrix live over different algebras")
    return [[e.evaluate(point) for e in row] for row in mat.entries]


def rank_at(mat: PolyMatrix, point: Point) -> int:
    return linalg.rank_rational(evaluate_matrix(mat, point))


def make_generic_point(alg: GradedAlgebra) -> Point:
    """A point where the (g_1, g_{s-1}) block attains full rank r.

    Uses the cyclic family eta_i = (ad x_i)^(s-2) x_{i+1}; the degree-s
    values are the exact solution of the pairing conditions
    p([x_j, eta_i]) = delta_ij with all free coordinates set to 0, and every
    coordinate of degree < s is 0.
    """
    r, s = alg.r, alg.s
    dim_prev = alg.dim_of_degree(s - 1)
    if dim_prev < r:
        raise DimensionInequalityError(r, s, dim_prev)
    top = alg.slice_of_degree(s)
    top_words = list(top)
    etas = [
        iterated_bracket(alg, (i,) * (s - 2) + ((i % r) + 1,))
        for i in range(1, r + 1)
    ]
    rows = []
    rhs = []
    for i, eta in enumerate(etas):
        for j in range(1, r + 1):
            pairing = alg.bracket(alg.element(generator(j)), eta)
            row = [Q0] * len(top_words)
            for w, c in pairing.coeffs.items():
                row[alg.index[w] - top.start] = c
            rows.append(row)
            rhs.append(Q1 if i + 1 == j else Q0)
    solution = linalg.solve(rows, rhs, len(top_words))
    assert solution is not None, "pairing conditions are consistent by construction"
    values = [Q0] * alg.dim
    for k, v in zip(top_words, solution):
        values[k] = v
    point = Point(alg, tuple(values))
    assert rank_at(block(alg, 1, s - 1), point) == r
    return point


def lie_vector(alg: GradedAlgebra, elt: LieElement, degree: int) -> list[Fraction]:
    """Coordinates of a degree-homogeneous element over the degree's basis."""
    sl = alg.slice_of_degree(degree)
    vec = [Q0] * len(sl)
    for w, c in elt.coeffs.items():
        if w.degree != degree:
            raise InputError(f"element not homogeneous of degree {degree}")
        vec[alg.index[w] - sl.start] = c
    return vec
