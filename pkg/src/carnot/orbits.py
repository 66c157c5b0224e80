"""Stratified analysis of coadjoint orbits for step-3 algebras.

The pipeline follows the bordered-reduction construction:

1. :func:`stepwise_reduce` brings the (g_1, g_2) block to row-echelon form
   over the stratum's polynomial ring using only column permutations, row
   sums, and row scalings certified nonzero at the stratum's witness point.
   Rows that vanish identically give the annihilator h_1 of the block's
   image, as combinations of generators with polynomial coefficients.
2. :func:`kernel_casimirs_on_stratum` borders the surviving rows with the
   row of degree-2 variables and takes consecutive-window minors.
3. :func:`orbit_functions` takes each kernel vector gamma of the skew form
   C = B^11 restricted to h_1, solves D eta_1 = b_1 by Cramer's rule and
   B^12 eta_2 = b_2 for the coordinate-complement remainder, clears the
   common denominator, and emits I_gamma - Q_gamma with the 1/2 weight on
   the symmetric eta_1 part only.
4. :func:`classify_orbit` reads ranks at a rational point and labels the
   orbit (type and dimension) via the rank-3 classification table, the
   rank-2 specialisation, or inertia signatures for higher rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import linalg
from .bivector import PolyMatrix, block, evaluate_matrix
from .errors import InputError, InternalInconsistencyError, StratumError
from .lie import GradedAlgebra
from .poly import Point, Polynomial, bracket_polynomial
from .ratfunc import RatFunc, clear_denominators, poly_gcd, div_exact, rational_content

Q0 = Fraction(0)
Q1 = Fraction(1)

AFFINE = "affine subspace"
HYPERBOLIC = "R^2 x hyperbolic paraboloid"
ELLIPTIC = "R^2 x elliptic paraboloid"
PARABOLIC = "parabolic cylinder"
QUADRICS = "product of quadrics"
POINT_ORBIT = "point"

_WITNESS_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
    233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313,
    317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409,
    419, 421, 431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499,
)


@dataclass(eq=False)
class Stratum:
    """Substitution sending selected coordinates to constants or to other
    coordinates, together with a witness point on the constrained set."""

    alg: GradedAlgebra
    substitution: dict[int, Polynomial]
    witness: Point
    description: str = ""

    @classmethod
    def empty(cls, alg: GradedAlgebra) -> "Stratum":
        return cls.from_dict(alg, {}, description="empty stratum")

    @classmethod
    def from_dict(cls, alg: GradedAlgebra, data: Mapping, description: str = "") -> "Stratum":
        substitution: dict[int, Polynomial] = {}

        def var_of(name: str) -> int:
            k = alg.name_index.get(name)
            if k is None:
                raise StratumError(f"unknown coordinate {name!r}")
            return k

        for name in data.get("set_zero", []):
            k = var_of(name)
            if k in substitution:
                raise StratumError(f"coordinate {name!r} constrained twice")
            substitution[k] = Polynomial.zero(alg)
        for pair in data.get("identify", []):
            if len(pair) != 2:
                raise StratumError(f"identify entries must be pairs, got {pair!r}")
            a, b = var_of(pair[0]), var_of(pair[1])
            if a in substitution:
                raise StratumError(f"coordinate {pair[0]!r} constrained twice")
            substitution[a] = Polynomial.variable(alg, b)
        for k, image in substitution.items():
            overlap = image.support() & substitution.keys()
            if overlap:
                names = ", ".join(alg.names[v] for v in overlap)
                raise StratumError(
                    f"substitution image of {alg.names[k]} uses constrained coordinates {names}"
                )
        witness = cls._complete_witness(alg, substitution, data.get("witness_point", {}))
        return cls(alg, substitution, witness, description)

    @staticmethod
    def _complete_witness(alg, substitution, given: Mapping) -> Point:
        values = [None] * alg.dim
        for name, raw in given.items():
            k = alg.name_index.get(name)
            if k is None:
                raise StratumError(f"unknown witness coordinate {name!r}")
            values[k] = Fraction(raw)
        for k in range(alg.dim):
            if values[k] is None and k not in substitution:
                values[k] = Fraction(_WITNESS_PRIMES[k % len(_WITNESS_PRIMES)])
        interim = Point(alg, tuple(v if v is not None else Q0 for v in values))
        for k, image in substitution.items():
            implied = image.evaluate(interim)
            if values[k] is None:
                values[k] = implied
            elif values[k] != implied:
                raise StratumError(
                    f"witness value of {alg.names[k]} contradicts the constraint"
                )
        return Point(alg, tuple(values))

    def apply(self, f: Polynomial) -> Polynomial:
        if not self.substitution:
            return f
        return f.substitute(self.substitution)

    def to_dict(self) -> dict:
        set_zero = []
        identify = []
        for k, image in self.substitution.items():
            if not image:
                set_zero.append(self.alg.names[k])
            elif len(image.terms) == 1 and image.leading_coefficient() == 1:
                identify.append([self.alg.names[k], str(image)])
            else:
                identify.append([self.alg.names[k], str(image)])
        return {
            "set_zero": sorted(set_zero),
            "identify": identify,
            "witness_point": {n: str(v) for n, v in self.witness.as_dict().items()},
        }


@dataclass(eq=False)
class OrbitAnalysis:
    alg: GradedAlgebra
    stratum: Stratum
    b12: PolyMatrix                      # substituted block
    reduced: list[list[Polynomial]]      # echelon rows, pivot rows first
    transform: list[list[Polynomial]]    # transform @ original = reduced
    rank: int
    pivot_cols: list[int]
    h1_basis: list[list[Polynomial]]     # coordinates over the generators
    independent_rows: list[int]
    c_matrix: list[list[Polynomial]]
    kernel_k: list[list[Polynomial]]     # coordinates over the generators
    complement: list[int]                # generator positions spanning g_1 / h_1
    gamma_data: list[dict] = field(default_factory=list)

    @property
    def d_matrix(self) -> list[list[Polynomial]] | None:
        return self.gamma_data[0]["d_matrix"] if self.gamma_data else None


def _vector_canonical(coords: list[Polynomial]) -> list[Polynomial]:
    nonzero = [c for c in coords if c]
    if not nonzero:
        return coords
    g = nonzero[0]
    for c in nonzero[1:]:
        g = poly_gcd(g, c)
    if g.total_degree() > 0:
        coords = [div_exact(c, g) if c else c for c in coords]
        nonzero = [c for c in coords if c]
    lead = nonzero[0]
    scale = rational_content(lead)
    if lead.leading_coefficient() < 0:
        scale = -scale
    return [c * (1 / scale) for c in coords]


def stepwise_reduce(alg: GradedAlgebra, stratum: Stratum) -> OrbitAnalysis:
    """Echelon reduction of the (g_1, g_2) block over the stratum ring."""
    if alg.s != 3:
        raise InputError(f"stepwise reduction is defined for step 3, got step {alg.s}")
    if stratum.alg.key != alg.key:
        raise InputError("stratum belongs to a different algebra")
    raw = block(alg, 1, 2)
    rows = [[stratum.apply(e) for e in row] for row in raw.entries]
    r, d2 = len(rows), len(rows[0])
    transform = [
        [Polynomial.constant(alg, 1 if i == j else 0) for j in range(r)]
        for i in range(r)
    ]
    witness = stratum.witness
    used: list[int] = []
    pivot_cols: list[int] = []
    for col in range(d2):
        candidates = [i for i in range(r) if i not in used and rows[i][col]]
        if not candidates:
            continue
        certified = [i for i in candidates if rows[i][col].evaluate(witness)]
        if not certified:
            names = ", ".join(str(rows[i][col]) for i in candidates)
            raise StratumError(
                f"no usable pivot in column {raw.cols[col].name}: entries {names} "
                "are nonzero on the stratum but vanish at the witness point"
            )
        pivot = min(certified, key=lambda i: (len(rows[i][col].terms), i))
        pv = rows[pivot][col]
        for i in range(r):
            if i == pivot or not rows[i][col]:
                continue
            ci = rows[i][col]
            rows[i] = [pv * a - ci * b for a, b in zip(rows[i], rows[pivot])]
            transform[i] = [pv * a - ci * b for a, b in zip(transform[i], transform[pivot])]
        used.append(pivot)
        pivot_cols.append(col)
    order = used + [i for i in range(r) if i not in used]
    reduced = [rows[i] for i in order]
    tr = [transform[i] for i in order]
    h1 = []
    for i in range(len(used), r):
        if any(reduced[i]):
            raise InternalInconsistencyError(
                "row survived elimination without a certified pivot",
                certificate=[str(e) for e in reduced[i]],
            )
        h1.append(_vector_canonical(list(tr[i])))
    # independent original rows, over the fraction field of the stratum ring
    zero = RatFunc.from_scalar(alg, 0)
    one = RatFunc.from_scalar(alg, 1)
    kept: list[int] = []
    stack: list[list[RatFunc]] = []
    original = [[stratum.apply(e) for e in row] for row in raw.entries]
    for i in range(r):
        trial = stack + [[RatFunc(e) for e in original[i]]]
        _, pivots = linalg.rref(trial, d2, zero=zero, one=one)
        if len(pivots) > len(kept):
            kept.append(i)
            stack = trial
    rank = len(used)
    assert len(kept) == rank
    sub12 = PolyMatrix(alg, raw.rows, raw.cols, tuple(tuple(row) for row in original))
    c_matrix = _restricted_skew_form(alg, stratum, h1)
    kernel = _kernel_of_skew(alg, c_matrix, h1)
    complement = _complement_generators(alg, h1, witness)
    return OrbitAnalysis(
        alg=alg,
        stratum=stratum,
        b12=sub12,
        reduced=reduced,
        transform=tr,
        rank=rank,
        pivot_cols=pivot_cols,
        h1_basis=h1,
        independent_rows=kept,
        c_matrix=c_matrix,
        kernel_k=kernel,
        complement=complement,
    )


def _restricted_skew_form(alg, stratum, h1) -> list[list[Polynomial]]:
    k1 = len(h1)
    out = [[Polynomial.zero(alg) for _ in range(k1)] for _ in range(k1)]
    for a in range(k1):
        for b in range(k1):
            total = Polynomial.zero(alg)
            for i, ca in enumerate(h1[a]):
                if not ca:
                    continue
                for j, cb in enumerate(h1[b]):
                    if cb:
                        total = total + ca * cb * bracket_polynomial(alg, i, j)
            out[a][b] = stratum.apply(total)
    return out


def _kernel_of_skew(alg, c_matrix, h1) -> list[list[Polynomial]]:
    k1 = len(h1)
    if k1 == 0:
        return []
    zero = RatFunc.from_scalar(alg, 0)
    one = RatFunc.from_scalar(alg, 1)
    rows = [[RatFunc(e) for e in row] for row in c_matrix]
    kernel = linalg.nullspace(rows, k1, zero=zero, one=one)
    out = []
    for vec in kernel:
        cleared, _ = clear_denominators(vec)
        coords = [Polynomial.zero(alg) for _ in range(alg.r)]
        for a, coeff in enumerate(cleared):
            if coeff:
                for i, c in enumerate(h1[a]):
                    if c:
                        coords[i] = coords[i] + coeff * c
        out.append(_vector_canonical(coords))
    return out


def _complement_generators(alg, h1, witness) -> list[int]:
    base = [[c.evaluate(witness) for c in vec] for vec in h1]
    chosen: list[int] = []
    for i in range(alg.r):
        candidate = [Q0] * alg.r
        candidate[i] = Q1
        rows = base + [
            [Q1 if c == j else Q0 for c in range(alg.r)] for j in chosen
        ] + [candidate]
        if linalg.rank_rational(rows) == len(rows):
            chosen.append(i)
        if len(chosen) == alg.r - len(h1):
            break
    if len(chosen) != alg.r - len(h1):
        raise StratumError("witness point does not separate h_1 from the generators")
    return chosen


def kernel_casimirs_on_stratum(alg: GradedAlgebra, analysis: OrbitAnalysis) -> list[Polynomial]:
    """Bordered consecutive-window minors of the independent rows; functions
    linear in the degree-2 variables that are constant on orbits inside the
    stratum."""
    stratum = analysis.stratum
    rank = analysis.rank
    d2 = len(analysis.b12.cols)
    rows = [list(analysis.b12.entries[i]) for i in analysis.independent_rows]
    out = []
    for start in range(d2 - rank):
        columns = range(start, start + rank + 1)
        top = [
            stratum.apply(Polynomial.variable(alg, alg.index[analysis.b12.cols[j]]))
            for j in columns
        ]
        body = [[row[j] for j in columns] for row in rows]
        minor = stratum.apply(linalg.det([top] + body))
        if minor:
            out.append(minor.canonicalized())
    return out


def orbit_functions(alg: GradedAlgebra, analysis: OrbitAnalysis) -> list[Polynomial]:
    """The functions I_gamma - Q_gamma attached to the kernel of C; empty when
    h_1 = 0 or the kernel is trivial."""
    stratum = analysis.stratum
    out: list[Polynomial] = []
    analysis.gamma_data.clear()
    if not analysis.h1_basis or not analysis.kernel_k:
        return out
    zero = RatFunc.from_scalar(alg, 0)
    one = RatFunc.from_scalar(alg, 1)
    g2 = alg.slice_of_degree(2)
    d2 = len(g2)
    comp = analysis.complement
    m = len(comp)
    for gamma in analysis.kernel_k:
        b = []
        for zi in comp:
            total = Polynomial.zero(alg)
            for j, cj in enumerate(gamma):
                if cj:
                    total = total + cj * bracket_polynomial(alg, zi, j)
            b.append(stratum.apply(total))
        w_cols: list[list[Polynomial]] = []
        for zj in comp:
            col = [Polynomial.zero(alg) for _ in range(d2)]
            for k, ck in enumerate(gamma):
                if not ck:
                    continue
                for idx, c in alg.bracket_indices(zj, k):
                    col[idx - g2.start] = col[idx - g2.start] + (-c) * ck
            w_cols.append([stratum.apply(e) for e in col])
        d_rows = []
        for zi in comp:
            row = []
            for j in range(m):
                e = Polynomial.zero(alg)
                for k, ck in enumerate(w_cols[j]):
                    if ck:
                        e = e + ck * bracket_polynomial(alg, zi, g2.start + k)
                row.append(stratum.apply(e))
            d_rows.append(row)
        for i in range(m):
            for j in range(i + 1, m):
                if d_rows[i][j] != d_rows[j][i]:
                    raise InternalInconsistencyError(
                        "restricted pairing with ad gamma is not symmetric on the stratum",
                        certificate={"i": i, "j": j, "ij": str(d_rows[i][j]), "ji": str(d_rows[j][i])},
                    )
        piv_rows, piv_cols = _field_pivots(alg, d_rows, stratum)
        rho = len(piv_rows)
        # split b = b1 + b2: solve [D columns Q | coordinate complement] u = b
        solve_cols: list[list[RatFunc]] = []
        for q in piv_cols:
            solve_cols.append([RatFunc(d_rows[i][q]) for i in range(m)])
        spare = [i for i in range(m) if i not in piv_rows]
        for i in spare:
            solve_cols.append([one if j == i else zero for j in range(m)])
        matrix = [[solve_cols[c][i] for c in range(m)] for i in range(m)]
        u = linalg.solve(matrix, [RatFunc(e) for e in b], m, zero=zero, one=one)
        if u is None:
            raise InternalInconsistencyError(
                "b is not reachable from the image of D plus the coordinate complement",
                certificate={"b": [str(x) for x in b]},
            )
        eta1 = [zero] * d2
        for pos, q in enumerate(piv_cols):
            coeff = u[pos]
            if coeff:
                for k in range(d2):
                    if w_cols[q][k]:
                        eta1[k] = eta1[k] + coeff * w_cols[q][k]
        b2 = [zero] * m
        for pos, i in enumerate(spare):
            b2[i] = u[rho + pos]
        eta2 = [zero] * d2
        if any(b2):
            rows_rf = [
                [RatFunc(e) for e in analysis.b12.entries[zi]] for zi in comp
            ]
            eta2 = linalg.solve(rows_rf, b2, d2, zero=zero, one=one)
            if eta2 is None:
                raise InternalInconsistencyError(
                    "remainder b2 has no preimage under the reduced block",
                    certificate={"b2": [str(x) for x in b2]},
                )
        gamma_rf = [RatFunc(c) for c in gamma]
        combined = gamma_rf + list(eta1) + list(eta2)
        cleared, den = clear_denominators(combined)
        gamma_bar = cleared[: alg.r]
        eta1_bar = cleared[alg.r : alg.r + d2]
        eta2_bar = cleared[alg.r + d2 :]
        i_hat = Polynomial.zero(alg)
        for i, coeff in enumerate(gamma_bar):
            if coeff:
                i_hat = i_hat + coeff * Polynomial.variable(alg, i)
        q_hat = Polynomial.zero(alg)
        for k, coeff in enumerate(eta1_bar):
            if coeff:
                q_hat = q_hat + Fraction(1, 2) * coeff * Polynomial.variable(alg, g2.start + k)
        for k, coeff in enumerate(eta2_bar):
            if coeff:
                q_hat = q_hat + coeff * Polynomial.variable(alg, g2.start + k)
        func = stratum.apply(i_hat - q_hat)
        for i in range(alg.r):
            check = stratum.apply(Polynomial.variable(alg, i).poisson(func))
            if check:
                raise InternalInconsistencyError(
                    "orbit function fails to commute with a generator on the stratum",
                    certificate={"generator": alg.names[i], "bracket": str(check)},
                )
        func = func.canonicalized()
        out.append(func)
        analysis.gamma_data.append(
            {
                "gamma": gamma,
                "d_matrix": d_rows,
                "pivot_rows": piv_rows,
                "pivot_cols": piv_cols,
                "b": b,
                "eta1": eta1_bar,
                "eta2": eta2_bar,
                "denominator": den,
                "function": func,
            }
        )
    return out


def _field_pivots(alg, d_rows, stratum) -> tuple[list[int], list[int]]:
    """Pivot rows and columns of D over the fraction field, certified at the
    witness point."""
    m = len(d_rows)
    rows = [list(r) for r in d_rows]
    witness = stratum.witness
    piv_rows: list[int] = []
    piv_cols: list[int] = []
    used: list[int] = []
    for col in range(m):
        candidates = [i for i in range(m) if i not in used and rows[i][col]]
        if not candidates:
            continue
        certified = [i for i in candidates if rows[i][col].evaluate(witness)]
        if not certified:
            raise StratumError(
                f"no witness-certified pivot while reducing D in column {col}"
            )
        pivot = min(certified, key=lambda i: (len(rows[i][col].terms), i))
        pv = rows[pivot][col]
        for i in range(m):
            if i != pivot and rows[i][col]:
                ci = rows[i][col]
                rows[i] = [pv * a - ci * b for a, b in zip(rows[i], rows[pivot])]
        used.append(pivot)
        piv_rows.append(pivot)
        piv_cols.append(col)
    return sorted(piv_rows), piv_cols


def ker_d_vectors(alg: GradedAlgebra, analysis: OrbitAnalysis) -> list[list[Polynomial]]:
    """Kernel of D as degree-2 coordinate vectors (for the first gamma)."""
    if not analysis.gamma_data:
        orbit_functions(alg, analysis)
    if not analysis.gamma_data:
        return []
    data = analysis.gamma_data[0]
    d_rows = data["d_matrix"]
    m = len(d_rows)
    zero = RatFunc.from_scalar(alg, 0)
    one = RatFunc.from_scalar(alg, 1)
    kernel = linalg.nullspace([[RatFunc(e) for e in row] for row in d_rows], m, zero=zero, one=one)
    gamma = data["gamma"]
    g2 = alg.slice_of_degree(2)
    out = []
    for vec in kernel:
        cleared, _ = clear_denominators(vec)
        coords = [Polynomial.zero(alg) for _ in range(len(g2))]
        for j, coeff in enumerate(cleared):
            if not coeff:
                continue
            zj = analysis.complement[j]
            for k, ck in enumerate(gamma):
                if not ck:
                    continue
                for idx, c in alg.bracket_indices(zj, k):
                    coords[idx - g2.start] = coords[idx - g2.start] + (-c) * ck * coeff
        out.append(_vector_canonical([analysis.stratum.apply(c) for c in coords]))
    return out


@dataclass(frozen=True)
class ConstancyCheck:
    ok: bool
    witnesses: tuple[tuple[str, Polynomial], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_constancy(alg: GradedAlgebra, analysis: OrbitAnalysis, subspace: str) -> ConstancyCheck:
    """Check {x_i, v} = 0 modulo the stratum for v in h_2 = [h_1, h_1] or in
    Ker D (read as degree-2 coordinate vectors)."""
    stratum = analysis.stratum
    g2 = alg.slice_of_degree(2)
    vectors: list[list[Polynomial]] = []
    if subspace == "h2":
        h1 = analysis.h1_basis
        for a in range(len(h1)):
            for bidx in range(a + 1, len(h1)):
                coords = [Polynomial.zero(alg) for _ in range(len(g2))]
                for i, ca in enumerate(h1[a]):
                    if not ca:
                        continue
                    for j, cb in enumerate(h1[bidx]):
                        if not cb:
                            continue
                        for idx, c in alg.bracket_indices(i, j):
                            coords[idx - g2.start] = coords[idx - g2.start] + c * ca * cb
                vectors.append([stratum.apply(c) for c in coords])
    elif subspace == "ker_d":
        vectors = ker_d_vectors(alg, analysis)
    else:
        raise InputError(f"unknown subspace {subspace!r}; use 'h2' or 'ker_d'")
    witnesses = []
    for coords in vectors:
        poly = Polynomial.zero(alg)
        for k, c in enumerate(coords):
            if c:
                poly = poly + c * Polynomial.variable(alg, g2.start + k)
        for i in range(alg.r):
            br = stratum.apply(Polynomial.variable(alg, i).poisson(poly))
            if br:
                witnesses.append((alg.names[i], br))
    return ConstancyCheck(not witnesses, tuple(witnesses))


# ---------------------------------------------------------------------------
# point classification


@dataclass(frozen=True)
class OrbitReport:
    k1: int
    k2: int
    orbit_dim: int
    type_label: str
    defining_functions: tuple[Polynomial, ...]
    rk_b12: int
    rk_d: int | None = None
    det_d_sign: int | None = None
    signatures: tuple[tuple[int, int, int], ...] = ()

    def to_dict(self) -> dict:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "orbit_dim": self.orbit_dim,
            "type": self.type_label,
            "rk_b12": self.rk_b12,
            "rk_d": self.rk_d,
            "det_d_sign": self.det_d_sign,
            "signatures": [list(s) for s in self.signatures],
            "defining_functions": [str(f) for f in self.defining_functions],
        }


def stratum_at_point(alg: GradedAlgebra, point: Point) -> Stratum:
    """The stratum freezing every degree-3 coordinate at its value at the
    point; the joint level set of the linear Casimir functions through it."""
    g3 = alg.slice_of_degree(3)
    substitution = {
        k: Polynomial.constant(alg, point.values[k]) for k in g3
    }
    witness_vals = list(point.values)
    for k in range(alg.dim):
        if k not in substitution and witness_vals[k] == 0:
            witness_vals[k] = Fraction(_WITNESS_PRIMES[k % len(_WITNESS_PRIMES)])
    return Stratum(alg, substitution, Point(alg, tuple(witness_vals)),
                   description="level set through a point")


def _h1_at_point(alg: GradedAlgebra, b12_values: list[list[Fraction]]) -> list[list[Fraction]]:
    vectors = linalg.left_nullspace(b12_values, len(b12_values[0]))
    return vectors


def _d_at_point(alg, point, gamma: list[Fraction], complement: list[int]) -> list[list[Fraction]]:
    g2 = alg.slice_of_degree(2)
    rows = []
    for zi in complement:
        row = []
        for zj in complement:
            total = Q0
            for k, ck in enumerate(gamma):
                if not ck:
                    continue
                for idx, c in alg.bracket_indices(zj, k):
                    br = bracket_polynomial(alg, zi, idx)
                    total += (-c) * ck * br.evaluate(point)
            row.append(total)
        rows.append(row)
    return rows


def classify_orbit(alg: GradedAlgebra, point: Point) -> OrbitReport:
    """Type and dimension of the coadjoint orbit through a rational point of
    the dual space (step 3)."""
    if alg.s != 3:
        raise InputError(f"orbit classification is defined for step 3, got step {alg.s}")
    if point.alg.key != alg.key:
        raise InputError("point belongs to a different algebra")
    r = alg.r
    b12 = block(alg, 1, 2)
    values = evaluate_matrix(b12, point)
    rho = linalg.rank_rational(values)
    h1 = _h1_at_point(alg, values)
    k1 = len(h1)
    assert k1 == r - rho
    c_values = [
        [
            sum(
                ca * cb * bracket_polynomial(alg, i, j).evaluate(point)
                for i, ca in enumerate(va) if ca
                for j, cb in enumerate(vb) if cb
            )
            for vb in h1
        ]
        for va in h1
    ]
    rank_c = linalg.rank_rational(c_values) if k1 else 0
    k2 = k1 - rank_c
    orbit_dim = 2 * r - (k1 + k2)
    assert orbit_dim % 2 == 0 and k2 <= k1 and (k1 - k2) % 2 == 0
    kernel_gammas = []
    if k1:
        for vec in linalg.nullspace(c_values, k1):
            coords = [Q0] * r
            for a, coeff in enumerate(vec):
                if coeff:
                    for i, c in enumerate(h1[a]):
                        coords[i] += coeff * c
            kernel_gammas.append(coords)
    complement = _complement_at_point(alg, h1)
    rk_d = None
    det_sign = None
    signatures = []
    d_mats = []
    for gamma in kernel_gammas:
        d_values = _d_at_point(alg, point, gamma, complement)
        d_mats.append(d_values)
        signatures.append(linalg.inertia_symmetric(d_values))
    label = _orbit_label(alg, rho, k1, k2, c_values, d_mats, signatures, orbit_dim, point)
    if len(d_mats) == 1:
        pos, neg, zero_count = signatures[0]
        rk_d = pos + neg
        detval = linalg.det(d_mats[0])
        det_sign = (detval > 0) - (detval < 0)
    functions = _defining_functions(alg, point, rho)
    return OrbitReport(
        k1=k1,
        k2=k2,
        orbit_dim=orbit_dim,
        type_label=label,
        defining_functions=tuple(functions),
        rk_b12=rho,
        rk_d=rk_d,
        det_d_sign=det_sign,
        signatures=tuple(signatures),
    )


def _complement_at_point(alg, h1) -> list[int]:
    chosen: list[int] = []
    r = alg.r
    target = r - len(h1)
    for i in range(r):
        candidate = [Q0] * r
        candidate[i] = Q1
        rows = [list(v) for v in h1] + [
            [Q1 if c == j else Q0 for c in range(r)] for j in chosen
        ] + [candidate]
        if linalg.rank_rational(rows) == len(rows):
            chosen.append(i)
        if len(chosen) == target:
            break
    return chosen


def _orbit_label(alg, rho, k1, k2, c_values, d_mats, signatures, orbit_dim, point):
    r = alg.r
    if orbit_dim == 0:
        return POINT_ORBIT
    if k1 == 0 or k2 == 0 or not d_mats:
        return AFFINE
    if r == 3 and rho == 2:
        pos, neg, zero_count = signatures[0]
        rank_d = pos + neg
        if rank_d == 2:
            det_val = linalg.det(d_mats[0])
            return HYPERBOLIC if det_val < 0 else ELLIPTIC
        if rank_d == 1:
            return PARABOLIC
        return AFFINE
    if r == 3:
        # rho <= 1 with a nontrivial kernel: the classification table labels
        # these strata affine
        return AFFINE
    if r == 2:
        pos, neg, zero_count = signatures[0]
        return PARABOLIC if pos + neg == 1 else AFFINE
    nonzero = [s for s in signatures if s[0] + s[1] > 0]
    if not nonzero:
        return AFFINE
    return QUADRICS


def _defining_functions(alg, point, rho) -> list[Polynomial]:
    functions = []
    for w in alg.words_of_degree(3):
        var = Polynomial.variable(alg, alg.index[w])
        functions.append(var - point[w])
    if rho < alg.r:
        stratum = stratum_at_point(alg, point)
        analysis = stepwise_reduce(alg, stratum)
        for f in kernel_casimirs_on_stratum(alg, analysis):
            if f:
                functions.append(f - f.evaluate(point))
        try:
            for f in orbit_functions(alg, analysis):
                functions.append(f - f.evaluate(point))
        except (StratumError, InternalInconsistencyError):
            pass
    return functions
