"""Complete systems of Casimir functions for steps 3 and 4.

Three families:

* linear — the top-degree coordinates themselves;
* minor — determinants bordering the (g_1, g_{s-1}) bivector block with a row
  of degree-(s-1) variables: with columns J = {i, ..., i+r} the function
  F_i = sum_{j in J} (-1)^(j-i) eta_j det M[:, J \\ {j}] Poisson-commutes with
  every generator, has total degree r+1, and is linear in the eta variables;
* quadratic (step 4) — for each kernel vector gamma of the pairing of g_2
  with itself, solve the bordered system for eta with Cramer's rule over the
  rational-function field of the top-degree variables, clear denominators,
  and emit I_gamma - Q_gamma where Q carries the 1/2 on the symmetric part.

A function f is Casimir iff {x_i, f} = 0 for every generator x_i, which is
the check :func:`is_casimir` performs exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import linalg
from .bivector import PolyMatrix, bivector, block, make_generic_point
from .errors import DimensionInequalityError, InputError, InternalInconsistencyError
from .lie import GradedAlgebra, HallWord, generator
from .poly import Point, Polynomial, bracket_polynomial
from .ratfunc import RatFunc, clear_denominators, poly_gcd, div_exact, rational_content

Q0 = Fraction(0)
Q1 = Fraction(1)


@dataclass(frozen=True)
class CasimirCheck:
    ok: bool
    witness_generator: HallWord | None = None
    witness_bracket: Polynomial | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class CasimirSet:
    algebra: GradedAlgebra
    linear: tuple[Polynomial, ...]
    minor: tuple[Polynomial, ...]
    quadratic: tuple[Polynomial, ...]
    provenance: tuple[dict, ...]

    @property
    def functions(self) -> list[Polynomial]:
        return list(self.linear) + list(self.minor) + list(self.quadratic)

    def to_records(self) -> list[dict]:
        roles = (
            ["linear"] * len(self.linear)
            + ["minor"] * len(self.minor)
            + ["quadratic"] * len(self.quadratic)
        )
        return [
            {
                "role": role,
                "degree": f.total_degree(),
                "provenance": prov,
                "polynomial": str(f),
            }
            for role, f, prov in zip(roles, self.functions, self.provenance)
        ]


def is_casimir(alg: GradedAlgebra, f: Polynomial) -> CasimirCheck:
    """True iff f Poisson-commutes with every generator; on failure carries
    the first nonzero bracket as a witness."""
    if f.alg.key != alg.key:
        raise InputError("polynomial does not belong to the given algebra")
    for i in range(alg.r):
        br = Polynomial.variable(alg, i).poisson(f)
        if br:
            return CasimirCheck(False, alg.basis[i], br)
    return CasimirCheck(True)


def linear_casimirs(alg: GradedAlgebra) -> list[Polynomial]:
    """The top-degree coordinates; the center of the algebra read as linear
    functions on the dual."""
    return [Polynomial.variable(alg, alg.index[w]) for w in alg.words_of_degree(alg.s)]


def _bordered_minor(alg: GradedAlgebra, mat: PolyMatrix, columns: tuple[int, ...]) -> Polynomial:
    top = [Polynomial.variable(alg, alg.index[mat.cols[j]]) for j in columns]
    body = [[mat.entries[i][j] for j in columns] for i in range(len(mat.rows))]
    return linalg.det([top] + body)


def minor_casimirs(alg: GradedAlgebra, window_mode: str = "consecutive") -> list[Polynomial]:
    """Bordered (r+1)x(r+1) minors of the (g_1, g_{s-1}) block.

    "consecutive" emits the dim g_{s-1} - r window functions; "all_subsets"
    emits one function per (r+1)-column subset (redundant generating set).
    """
    if alg.s not in (3, 4):
        raise InputError(f"minor construction defined for steps 3 and 4, got {alg.s}")
    if window_mode not in ("consecutive", "all_subsets"):
        raise InputError(f"unknown window mode {window_mode!r}")
    r = alg.r
    d = alg.dim_of_degree(alg.s - 1)
    if d < r:
        raise DimensionInequalityError(r, alg.s, d)
    mat = block(alg, 1, alg.s - 1)
    out = []
    if window_mode == "consecutive":
        subsets = [tuple(range(i, i + r + 1)) for i in range(d - r)]
    else:
        subsets = [tuple(c) for c in combinations(range(d), r + 1)]
    for columns in subsets:
        out.append(_bordered_minor(alg, mat, columns).canonicalized())
    return out


def _vector_canonical(coords: list[Polynomial]) -> list[Polynomial]:
    """Divide a polynomial vector by the gcd of its coordinates and fix the
    sign/content of the first nonzero coordinate."""
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


def _kernel_over_field(entries: list[list[Polynomial]], ncols: int) -> list[list[Polynomial]]:
    """Right kernel of a polynomial matrix over the rational-function field,
    cleared to canonical polynomial vectors."""
    if not entries:
        return []
    alg = entries[0][0].alg
    zero = RatFunc.from_scalar(alg, 0)
    one = RatFunc.from_scalar(alg, 1)
    rows = [[RatFunc(e) for e in row] for row in entries]
    kernel = linalg.nullspace(rows, ncols, zero=zero, one=one)
    out = []
    for vec in kernel:
        cleared, _ = clear_denominators(vec)
        out.append(_vector_canonical(cleared))
    return out


def quadratic_casimirs_step4(alg: GradedAlgebra) -> list[Polynomial]:
    """Step-4 Casimirs that are quadratic on joint level sets of the linear
    and minor families; one per generic kernel vector of the g_2 pairing."""
    if alg.s != 4:
        raise InputError(f"quadratic construction is specific to step 4, got step {alg.s}")
    r = alg.r
    g2 = alg.slice_of_degree(2)
    g3 = alg.slice_of_degree(3)
    pairing = block(alg, 2, 2)
    kernel = _kernel_over_field(pairing.to_lists(), len(g2))
    out = []
    for gamma in kernel:
        # b_i = {x_i, gamma}; columns w_j = [gamma, x_j] inside g_3
        b = []
        for i in range(r):
            total = Polynomial.zero(alg)
            for k, coeff in enumerate(gamma):
                if coeff:
                    total = total + coeff * bracket_polynomial(alg, i, g2.start + k)
            b.append(total)
        w_cols: list[list[Polynomial]] = []
        for j in range(r):
            col = [Polynomial.zero(alg) for _ in g3]
            for k, coeff in enumerate(gamma):
                if not coeff:
                    continue
                for idx, c in alg.bracket_indices(g2.start + k, j):
                    col[idx - g3.start] = col[idx - g3.start] + coeff * c
            w_cols.append(col)
        t_rows = []
        for i in range(r):
            row = []
            for j in range(r):
                e = Polynomial.zero(alg)
                for k, coeff in enumerate(w_cols[j]):
                    if coeff:
                        e = e + coeff * bracket_polynomial(alg, i, g3.start + k)
                row.append(e)
            t_rows.append(row)
        # Cramer's rule with the determinant as the cleared denominator;
        # everything stays polynomial, no rational-function reduction needed.
        det_t = linalg.det(t_rows)
        if not det_t:
            raise InternalInconsistencyError(
                "bordered system for the quadratic construction is singular",
                certificate={"gamma": [str(g) for g in gamma]},
            )
        zeta_num = []
        for j in range(r):
            cols = [[t_rows[i][c] if c != j else b[i] for c in range(r)] for i in range(r)]
            zeta_num.append(linalg.det(cols))
        gamma_bar = [det_t * g for g in gamma]
        eta_bar = []
        for k in range(len(g3)):
            acc = Polynomial.zero(alg)
            for j in range(r):
                if w_cols[j][k] and zeta_num[j]:
                    acc = acc + zeta_num[j] * w_cols[j][k]
            eta_bar.append(acc)
        i_hat = Polynomial.zero(alg)
        for k, coeff in enumerate(gamma_bar):
            if coeff:
                i_hat = i_hat + coeff * Polynomial.variable(alg, g2.start + k)
        q_hat = Polynomial.zero(alg)
        for k, coeff in enumerate(eta_bar):
            if coeff:
                q_hat = q_hat + Fraction(1, 2) * coeff * Polynomial.variable(alg, g3.start + k)
        out.append((i_hat - q_hat).canonicalized())
    return out


def _generic_kernel_dimension(alg: GradedAlgebra) -> int:
    """dim Ker B_p at a generic point, probed at seeded random points (and the
    constructed full-rank point when it exists)."""
    full = bivector(alg)
    best = alg.dim
    try:
        p = make_generic_point(alg)
        best = min(best, alg.dim - linalg.rank_rational(
            [[e.evaluate(p) for e in row] for row in full.entries]
        ))
    except DimensionInequalityError:
        pass
    rng = random.Random(0x5EED)
    for _ in range(4):
        values = tuple(
            Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(alg.dim)
        )
        p = Point(alg, values)
        rank = linalg.rank_rational([[e.evaluate(p) for e in row] for row in full.entries])
        best = min(best, alg.dim - rank)
    return best


def complete_system(alg: GradedAlgebra, *, verify_counts: bool = True) -> CasimirSet:
    """The full system of Casimir functions for steps 3 and 4."""
    if alg.s == 3 and alg.r == 2:
        from .orbits import Stratum, orbit_functions, stepwise_reduce

        lin = linear_casimirs(alg)
        analysis = stepwise_reduce(alg, Stratum.empty(alg))
        quad = orbit_functions(alg, analysis)
        assert len(quad) == 1
        prov = [{"kind": "linear", "word": str(w)} for w in alg.words_of_degree(3)]
        prov.append({"kind": "quadratic", "source": "rank-2 generic stratum"})
        result = CasimirSet(alg, tuple(lin), (), tuple(quad), tuple(prov))
    elif alg.s == 3:
        lin = linear_casimirs(alg)
        minors = minor_casimirs(alg, "consecutive")
        prov = [{"kind": "linear", "word": str(w)} for w in alg.words_of_degree(3)]
        prov += [
            {"kind": "minor", "window_start": i + 1}
            for i in range(len(minors))
        ]
        result = CasimirSet(alg, tuple(lin), tuple(minors), (), tuple(prov))
    elif alg.s == 4:
        lin = linear_casimirs(alg)
        minors = minor_casimirs(alg, "consecutive")
        quads = quadratic_casimirs_step4(alg)
        prov = [{"kind": "linear", "word": str(w)} for w in alg.words_of_degree(4)]
        prov += [{"kind": "minor", "window_start": i + 1} for i in range(len(minors))]
        prov += [{"kind": "quadratic", "kernel_index": i} for i in range(len(quads))]
        result = CasimirSet(alg, tuple(lin), tuple(minors), tuple(quads), tuple(prov))
    else:
        raise InputError(f"complete systems are defined for steps 3 and 4, got step {alg.s}")
    if verify_counts:
        expected = _generic_kernel_dimension(alg)
        got = len(result.functions)
        if got != expected:
            raise InternalInconsistencyError(
                f"emitted {got} functions but generic kernel dimension is {expected}",
                certificate=result.to_records(),
            )
    return result


def differential_rank(functions: list[Polynomial], point: Point) -> int:
    """Rank of the differentials of the given functions at a point."""
    rows = [f.gradient_at(point) for f in functions]
    return linalg.rank_rational(rows)
