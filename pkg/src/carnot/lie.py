"""Free nilpotent Lie algebras with a fixed graded basis and full bracket table.

The algebra of rank r and step s is graded, g = g_1 + ... + g_s, and generated
by g_1 = span{x1, ..., xr}.  Basis words are iterated brackets written
right-nested, so the index tuple (a, b, c) stands for [x_a, [x_b, x_c]].
Conventions per degree:

* degree 1 — the generators x1 .. xr;
* degree 2 — xij = [xi, xj] with i < j, ordered lexicographically;
* degree 3 — xabc = [xa, [xb, xc]] with b < c and a <= c, ordered by the
  pair (b, c) and then by a.  For every i < j < k the word x(kij) is
  eliminated through the Jacobi relation x(ijk) - x(jik) + x(kij) = 0;
* degree 4 — words [xa, w] over degree-3 basis words w, kept in first-seen
  (a-major) order whenever linearly independent; independence is decided
  exactly inside the truncated tensor algebra.

The whole bracket table is computed once at build time, so a bracket of two
elements is a table-driven bilinear expansion.  Algebras are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InputError, UnsupportedStepError

#: Subscripts are single decimal digits, which keeps names like "x112"
#: unambiguous; ranks above 9 are rejected at build time.
MAX_RANK = 9

Q0 = Fraction(0)
Q1 = Fraction(1)


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def graded_dimension(r: int, m: int) -> int:
    """Dimension of the degree-m layer of the free Lie algebra on r letters:
    (1/m) * sum over d | m of mu(d) * r^(m/d)."""
    if r < 2 or m < 1:
        raise InputError(f"need rank >= 2 and degree >= 1, got ({r}, {m})")
    total = sum(_mobius(d) * r ** (m // d) for d in range(1, m + 1) if m % d == 0)
    assert total % m == 0
    return total // m


@dataclass(frozen=True)
class HallWord:
    """A basis word, stored as its flattened index tuple.

    (a, b, c, ...) denotes the right-nested bracket [x_a, [x_b, [x_c, ...]]],
    so every word of degree > 1 splits as (head generator, tail word).
    """

    indices: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.indices)

    @property
    def name(self) -> str:
        return "x" + "".join(str(i) for i in self.indices)

    @property
    def left(self) -> "HallWord | None":
        return HallWord(self.indices[:1]) if self.degree > 1 else None

    @property
    def right(self) -> "HallWord | None":
        return HallWord(self.indices[1:]) if self.degree > 1 else None

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"HallWord{self.indices}"


def generator(i: int) -> HallWord:
    return HallWord((i,))


def degree2_words(r: int) -> list[HallWord]:
    return [HallWord((i, j)) for i in range(1, r + 1) for j in range(i + 1, r + 1)]


def degree3_words(r: int) -> list[HallWord]:
    words = []
    for b in range(1, r + 1):
        for c in range(b + 1, r + 1):
            for a in range(1, c + 1):
                words.append(HallWord((a, b, c)))
    words.sort(key=lambda w: (w.indices[1], w.indices[2], w.indices[0]))
    return words


def is_admissible(word: HallWord, r: int) -> bool:
    """Admissibility of a degree <= 3 word under the basis convention.

    Degree-4 admissibility depends on the greedy completion and is decided
    by membership in a built algebra's basis.
    """
    idx = word.indices
    if any(i < 1 or i > r for i in idx):
        return False
    if len(idx) == 1:
        return True
    if len(idx) == 2:
        return idx[0] < idx[1]
    if len(idx) == 3:
        a, b, c = idx
        return b < c and a <= c
    raise InputError("admissibility by rule is defined for degrees 1..3 only")


class LieElement:
    """A finite rational combination of basis words; zero coefficients are
    never stored, so equality is structural."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[HallWord, Fraction] | None = None):
        self.coeffs: dict[HallWord, Fraction] = {}
        if coeffs:
            for w, c in coeffs.items():
                q = Fraction(c)
                if q:
                    self.coeffs[w] = q

    @classmethod
    def from_word(cls, word: HallWord, coeff: Fraction = Q1) -> "LieElement":
        return cls({word: coeff})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LieElement") -> "LieElement":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            q = out.get(w, Q0) + c
            if q:
                out[w] = q
            else:
                out.pop(w, None)
        res = LieElement()
        res.coeffs = out
        return res

    def __neg__(self) -> "LieElement":
        res = LieElement()
        res.coeffs = {w: -c for w, c in self.coeffs.items()}
        return res

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __rmul__(self, scalar) -> "LieElement":
        q = Fraction(scalar)
        res = LieElement()
        if q:
            res.coeffs = {w: q * c for w, c in self.coeffs.items()}
        return res

    def degree_component(self, m: int) -> "LieElement":
        res = LieElement()
        res.coeffs = {w: c for w, c in self.coeffs.items() if w.degree == m}
        return res

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for w in sorted(self.coeffs, key=lambda w: (w.degree, w.indices)):
            c = self.coeffs[w]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = w.name if mag == 1 else f"{mag}*{w.name}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LieElement({self})"


# ---------------------------------------------------------------------------
# Tensor-algebra scaffolding (build time only).  A Lie element embeds into
# the free associative algebra as a combination of letter tuples; commutators
# there satisfy Jacobi identically, which makes the degree-4 completion and
# normal forms a matter of exact linear algebra.


def _comm(u: dict, v: dict) -> dict:
    out: dict = {}
    for wu, cu in u.items():
        for wv, cv in v.items():
            c = cu * cv
            w = wu + wv
            q = out.get(w, Q0) + c
            if q:
                out[w] = q
            else:
                out.pop(w, None)
            w = wv + wu
            q = out.get(w, Q0) - c
            if q:
                out[w] = q
            else:
                out.pop(w, None)
    return out


def _tensor_of_word(word: HallWord) -> dict:
    idx = word.indices
    rep = {(idx[-1],): Q1}
    for i in reversed(idx[:-1]):
        rep = _comm({(i,): Q1}, rep)
    return rep


class _SpanSolver:
    """Triangular span tracker over tensor vectors.

    Each stored row has a distinct pivot (its maximal tensor word) scaled to
    coefficient 1, together with its expression over the chosen basis.
    """

    def __init__(self):
        self.rows: dict[tuple, tuple[dict, dict]] = {}

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        vec = dict(vec)
        combo: dict[int, Fraction] = {}
        while vec:
            pivot = max(vec)
            row = self.rows.get(pivot)
            if row is None:
                break
            rvec, rexpr = row
            c = vec[pivot]
            for w, q in rvec.items():
                nq = vec.get(w, Q0) - c * q
                if nq:
                    vec[w] = nq
                else:
                    vec.pop(w, None)
            for k, q in rexpr.items():
                nq = combo.get(k, Q0) + c * q
                if nq:
                    combo[k] = nq
                else:
                    combo.pop(k, None)
        return vec, combo

    def express(self, vec: dict) -> dict | None:
        residual, combo = self.reduce(vec)
        return None if residual else combo

    def add_basis_vector(self, vec: dict, index: int) -> bool:
        residual, combo = self.reduce(vec)
        if not residual:
            return False
        pivot = max(residual)
        scale = residual[pivot]
        rvec = {w: c / scale for w, c in residual.items()}
        rexpr = {index: 1 / scale}
        for k, q in combo.items():
            nq = -q / scale
            if nq:
                rexpr[k] = rexpr.get(k, Q0) + nq
        self.rows[pivot] = (rvec, {k: q for k, q in rexpr.items() if q})
        return True


def _degree4_basis(r: int) -> tuple[list[HallWord], _SpanSolver]:
    solver = _SpanSolver()
    words: list[HallWord] = []
    for a in range(1, r + 1):
        for w in degree3_words(r):
            cand = HallWord((a,) + w.indices)
            if solver.add_basis_vector(_tensor_of_word(cand), len(words)):
                words.append(cand)
    assert len(words) == graded_dimension(r, 4)
    return words, solver


# ---------------------------------------------------------------------------


class GradedAlgebra:
    """The free nilpotent Lie algebra of rank r and step s with its basis and
    bracket table.  Build through :func:`build_algebra`; do not mutate."""

    def __init__(self, r: int, s: int):
        self.r = r
        self.s = s
        basis: list[HallWord] = [generator(i) for i in range(1, r + 1)]
        basis += degree2_words(r)
        deg4_solver = None
        if s >= 3:
            basis += degree3_words(r)
        if s >= 4:
            deg4_words, deg4_solver = _degree4_basis(r)
            basis += deg4_words
        self.basis: tuple[HallWord, ...] = tuple(basis)
        self.index: dict[HallWord, int] = {w: k for k, w in enumerate(basis)}
        self.names: tuple[str, ...] = tuple(w.name for w in basis)
        self.name_index: dict[str, int] = {n: k for k, n in enumerate(self.names)}
        self.degrees: tuple[int, ...] = tuple(w.degree for w in basis)
        self._slices: dict[int, range] = {}
        start = 0
        for m in range(1, s + 1):
            d = graded_dimension(r, m)
            self._slices[m] = range(start, start + d)
            start += d
        assert start == len(basis)
        self.dim = start
        self.table = self._build_table(deg4_solver)
        self.caches: dict = {}

    @property
    def key(self) -> tuple[int, int]:
        return (self.r, self.s)

    def slice_of_degree(self, m: int) -> range:
        return self._slices[m]

    def words_of_degree(self, m: int) -> list[HallWord]:
        return [self.basis[k] for k in self._slices[m]]

    def dim_of_degree(self, m: int) -> int:
        return len(self._slices[m])

    # -- table construction --------------------------------------------------

    def _build_table(self, deg4_solver) -> dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]:
        table: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
        n = self.dim
        for ia in range(n):
            wa = self.basis[ia]
            for ib in range(ia + 1, n):
                wb = self.basis[ib]
                dsum = wa.degree + wb.degree
                if dsum > self.s:
                    continue
                entry = self._bracket_words(wa, wb, deg4_solver)
                if entry:
                    table[(ia, ib)] = entry
        return table

    def _bracket_words(self, wa: HallWord, wb: HallWord, deg4_solver):
        da, db = wa.degree, wb.degree
        if da == 1 and db == 1:
            i, j = wa.indices[0], wb.indices[0]
            if i == j:
                return ()
            word = HallWord((i, j)) if i < j else HallWord((j, i))
            return ((self.index[word], Q1 if i < j else -Q1),)
        if da == 1 and db == 2:
            a = wa.indices[0]
            b, c = wb.indices
            if a <= c:
                return ((self.index[HallWord((a, b, c))], Q1),)
            # a > c: [xa,[xb,xc]] = [xc,[xb,xa]] - [xb,[xc,xa]]
            return (
                (self.index[HallWord((c, b, a))], Q1),
                (self.index[HallWord((b, c, a))], -Q1),
            )
        if {da, db} in ({1, 3}, {2, 2}) or (da, db) in ((1, 3), (3, 1), (2, 2)):
            combo = deg4_solver.express(_comm(_tensor_of_word(wa), _tensor_of_word(wb)))
            assert combo is not None, (wa, wb)
            offset = self._slices[4].start
            return tuple(sorted((offset + k, c) for k, c in combo.items()))
        raise AssertionError((wa, wb))

    # -- bracket of elements ---------------------------------------------------

    def bracket_indices(self, ia: int, ib: int) -> tuple[tuple[int, Fraction], ...]:
        if ia == ib:
            return ()
        if ia < ib:
            return self.table.get((ia, ib), ())
        return tuple((k, -c) for k, c in self.table.get((ib, ia), ()))

    def bracket(self, a: LieElement, b: LieElement) -> LieElement:
        out: dict[HallWord, Fraction] = {}
        for wa, ca in a.coeffs.items():
            ia = self.index.get(wa)
            if ia is None:
                raise InputError(f"unknown basis word {wa.name} for rank {self.r}, step {self.s}")
            for wb, cb in b.coeffs.items():
                ib = self.index.get(wb)
                if ib is None:
                    raise InputError(f"unknown basis word {wb.name} for rank {self.r}, step {self.s}")
                c = ca * cb
                for k, q in self.bracket_indices(ia, ib):
                    w = self.basis[k]
                    nq = out.get(w, Q0) + c * q
                    if nq:
                        out[w] = nq
                    else:
                        out.pop(w, None)
        res = LieElement()
        res.coeffs = out
        return res

    def element(self, name_or_word: str | HallWord, coeff: Fraction = Q1) -> LieElement:
        if isinstance(name_or_word, HallWord):
            word = name_or_word
        else:
            k = self.name_index.get(name_or_word)
            if k is None:
                raise InputError(f"unknown basis word {name_or_word!r}")
            word = self.basis[k]
        if word not in self.index:
            raise InputError(f"unknown basis word {word.name}")
        return LieElement.from_word(word, coeff)

    def __repr__(self) -> str:
        return f"GradedAlgebra(r={self.r}, s={self.s}, dim={self.dim})"


def build_algebra(r: int, s: int) -> GradedAlgebra:
    """Construct the free nilpotent Lie algebra of rank r >= 2, step s in 2..4."""
    if not isinstance(r, int) or not isinstance(s, int):
        raise InputError("rank and step must be integers")
    if r < 2 or r > MAX_RANK:
        raise InputError(f"rank must be in 2..{MAX_RANK}, got {r}")
    if s < 2 or s > 4:
        raise UnsupportedStepError(f"step must be in 2..4, got {s}")
    return GradedAlgebra(r, s)


def bracket(alg: GradedAlgebra, a: LieElement, b: LieElement) -> LieElement:
    return alg.bracket(a, b)


def iterated_bracket(alg: GradedAlgebra, indices: Iterable[int]) -> LieElement:
    """Normal form of the right-nested bracket [x_{i1}, [..., [x_{i_{m-1}}, x_{i_m}]]].

    This is the notation adapter: every subscript string names such a
    bracket, whether or not the word itself is a basis word.
    """
    idx = tuple(indices)
    if not idx:
        raise InputError("empty index sequence")
    if any(not isinstance(i, int) or i < 1 or i > alg.r for i in idx):
        raise InputError(f"indices must lie in 1..{alg.r}, got {idx}")
    if len(idx) > alg.s:
        raise InputError(f"bracket length {len(idx)} exceeds step {alg.s}")
    elt = alg.element(generator(idx[-1]))
    for i in reversed(idx[:-1]):
        elt = alg.bracket(alg.element(generator(i)), elt)
    return elt


def basis_records(alg: GradedAlgebra) -> list[dict]:
    """Stable record list for basis dumps: index, degree, canonical name."""
    return [
        {"index": k, "degree": w.degree, "name": w.name}
        for k, w in enumerate(alg.basis)
    ]
