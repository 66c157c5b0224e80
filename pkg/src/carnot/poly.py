"""Exact multivariate polynomials over Q in the dual coordinates of a graded
algebra, with the Poisson bracket of the symmetric algebra S(g).

A monomial is a sorted tuple of (variable index, exponent) pairs; a
Polynomial maps monomials to nonzero Fractions, so the stored form is the
canonical form and equality is structural.  Variables are indexed by basis
position of the ambient :class:`~carnot.lie.GradedAlgebra`, and the term
order is graded lexicographic on that position.

The bracket {f, g} = sum_{a,b} df/dxa * dg/dxb * {xa, xb} expands through the
algebra's bracket table, which on linear polynomials reproduces the Lie
bracket and extends by the Leibniz rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import InputError, ParseError
from .lie import GradedAlgebra, HallWord, LieElement, iterated_bracket

Q0 = Fraction(0)
Q1 = Fraction(1)

Monomial = tuple[tuple[int, int], ...]
Scalar = Union[Fraction, int]

ONE_MONO: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: Monomial, nvars: int):
    dense = [0] * nvars
    for v, e in m:
        dense[v] = e
    return (mono_degree(m), tuple(dense))


class Polynomial:
    """Immutable-by-convention polynomial; construct through the class
    methods or ring operations, never by mutating ``terms``."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: GradedAlgebra, terms: Mapping[Monomial, Fraction] | None = None):
        self.alg = alg
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                q = Fraction(c)
                if q:
                    self.terms[m] = q

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, alg: GradedAlgebra) -> "Polynomial":
        return cls(alg)

    @classmethod
    def constant(cls, alg: GradedAlgebra, value: Scalar) -> "Polynomial":
        return cls(alg, {ONE_MONO: Fraction(value)})

    @classmethod
    def variable(cls, alg: GradedAlgebra, var: int | str | HallWord) -> "Polynomial":
        return cls(alg, {(((_var_index(alg, var)), 1),): Q1})

    @classmethod
    def from_lie(cls, alg: GradedAlgebra, elt: LieElement) -> "Polynomial":
        terms = {}
        for w, c in elt.coeffs.items():
            k = alg.index.get(w)
            if k is None:
                raise InputError(f"unknown basis word {w.name}")
            terms[((k, 1),)] = c
        return cls(alg, terms)

    # -- structure ------------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.alg.key != other.alg.key:
            raise InputError(
                f"mixed algebras: ({self.alg.r},{self.alg.s}) vs ({other.alg.r},{other.alg.s})"
            )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.alg, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.alg.key == other.alg.key and self.terms == other.terms

    def __hash__(self):
        return hash((self.alg.key, frozenset(self.terms.items())))

    def support(self) -> set[int]:
        vars_ = set()
        for m in self.terms:
            vars_.update(v for v, _ in m)
        return vars_

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, variables: Iterable[int]) -> int:
        vs = set(variables)
        return max(
            (sum(e for v, e in m if v in vs) for m in self.terms),
            default=0,
        )

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Q0)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise InputError("zero polynomial has no leading monomial")
        n = self.alg.dim
        return max(self.terms, key=lambda m: _grlex_key(m, n))

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    # -- ring operations --------------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.alg, other)
        return None

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            q = out.get(m, Q0) + c
            if q:
                out[m] = q
            else:
                out.pop(m, None)
        res = Polynomial(self.alg)
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        res = Polynomial(self.alg)
        res.terms = {m: -c for m, c in self.terms.items()}
        return res

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            res = Polynomial(self.alg)
            if q:
                res.terms = {m: q * c for m, c in self.terms.items()}
            return res
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                q = out.get(m, Q0) + ca * cb
                if q:
                    out[m] = q
                else:
                    out.pop(m, None)
        res = Polynomial(self.alg)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise InputError("polynomial powers must be non-negative integers")
        res = Polynomial.constant(self.alg, 1)
        for _ in range(k):
            res = res * self
        return res

    # -- calculus ----------------------------------------------------------------

    def diff(self, var: int) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for pos, (v, e) in enumerate(m):
                if v == var:
                    nm = list(m)
                    if e == 1:
                        del nm[pos]
                    else:
                        nm[pos] = (v, e - 1)
                    key = tuple(nm)
                    q = out.get(key, Q0) + c * e
                    if q:
                        out[key] = q
                    else:
                        out.pop(key, None)
                    break
        res = Polynomial(self.alg)
        res.terms = out
        return res

    def substitute(self, mapping: Mapping[int | str | HallWord, "Polynomial | Scalar"]) -> "Polynomial":
        """Ring homomorphism sending selected variables to polynomials or
        constants; untouched variables map to themselves."""
        images: dict[int, Polynomial] = {}
        for key, value in mapping.items():
            k = _var_index(self.alg, key)
            if isinstance(value, Polynomial):
                self._check(value)
                images[k] = value
            else:
                images[k] = Polynomial.constant(self.alg, value)
        out = Polynomial.zero(self.alg)
        for m, c in self.terms.items():
            term = Polynomial.constant(self.alg, c)
            plain: list[tuple[int, int]] = []
            for v, e in m:
                img = images.get(v)
                if img is None:
                    plain.append((v, e))
                else:
                    term = term * img ** e
            if plain:
                term = term * Polynomial(self.alg, {tuple(plain): Q1})
            out = out + term
        return out

    def evaluate(self, point: "Point") -> Fraction:
        if point.alg.key != self.alg.key:
            raise InputError("point and polynomial live over different algebras")
        vals = point.values
        total = Q0
        for m, c in self.terms.items():
            prod = c
            for v, e in m:
                prod *= vals[v] ** e
            total += prod
        return total

    def gradient_at(self, point: "Point") -> list[Fraction]:
        return [self.diff(v).evaluate(point) for v in range(self.alg.dim)]

    # -- Poisson bracket ---------------------------------------------------------

    def poisson(self, other: "Polynomial") -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            raise InputError("poisson bracket needs polynomial operands")
        alg = self.alg
        out = Polynomial.zero(alg)
        fvars = sorted(self.support())
        gvars = sorted(other.support())
        if not fvars or not gvars:
            return out
        fdiffs = {a: self.diff(a) for a in fvars}
        gdiffs = {b: other.diff(b) for b in gvars}
        for a in fvars:
            for b in gvars:
                br = bracket_polynomial(alg, a, b)
                if br:
                    out = out + fdiffs[a] * gdiffs[b] * br
        return out

    # -- text ---------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        n = self.alg.dim
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0], n), reverse=True)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"

    def canonicalized(self) -> "Polynomial":
        """Scale to integer coefficients with content 1 and positive leading
        (graded-lex) coefficient; the representative of the ray Q* . f."""
        if not self.terms:
            return self
        coeffs = list(self.terms.values())
        from math import gcd

        num = 0
        den = 1
        for c in coeffs:
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        factor = Fraction(den, num)
        if self.leading_coefficient() < 0:
            factor = -factor
        return self * factor


def _var_index(alg: GradedAlgebra, var: int | str | HallWord) -> int:
    if isinstance(var, int):
        if not 0 <= var < alg.dim:
            raise InputError(f"variable index {var} outside 0..{alg.dim - 1}")
        return var
    if isinstance(var, HallWord):
        k = alg.index.get(var)
        if k is None:
            raise InputError(f"unknown basis word {var.name}")
        return k
    k = alg.name_index.get(var)
    if k is None:
        raise InputError(f"unknown variable name {var!r}")
    return k


def bracket_polynomial(alg: GradedAlgebra, a: int, b: int) -> Polynomial:
    """{x_a, x_b} as a linear polynomial, cached on the algebra."""
    cache = alg.caches.setdefault("bracket_poly", {})
    res = cache.get((a, b))
    if res is None:
        terms = {((k, 1),): c for k, c in alg.bracket_indices(a, b)}
        res = Polynomial(alg, terms)
        cache[(a, b)] = res
    return res


def poisson_bracket(alg: GradedAlgebra, f: Polynomial, g: Polynomial) -> Polynomial:
    if f.alg.key != alg.key or g.alg.key != alg.key:
        raise InputError("operands do not belong to the given algebra")
    return f.poisson(g)


def substitute(f: Polynomial, mapping) -> Polynomial:
    return f.substitute(mapping)


def evaluate(f: Polynomial, point: "Point") -> Fraction:
    return f.evaluate(point)


# -- points ---------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """A rational point of the dual space: one value per basis coordinate."""

    alg: GradedAlgebra
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.alg.dim:
            raise InputError(
                f"point needs {self.alg.dim} coordinates, got {len(self.values)}"
            )

    @classmethod
    def zero(cls, alg: GradedAlgebra) -> "Point":
        return cls(alg, tuple([Q0] * alg.dim))

    @classmethod
    def from_dict(cls, alg: GradedAlgebra, values: Mapping[str | int | HallWord, Scalar | str]) -> "Point":
        vals = [Q0] * alg.dim
        for key, val in values.items():
            vals[_var_index(alg, key)] = Fraction(val)
        return cls(alg, tuple(vals))

    def as_dict(self) -> dict[str, Fraction]:
        return {self.alg.names[k]: v for k, v in enumerate(self.values) if v}

    def __getitem__(self, key) -> Fraction:
        return self.values[_var_index(self.alg, key)]


# -- text grammar ------------------------------------------------------------------
#
# expr   := ['+'|'-'] term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := primary ('^' integer)?
# primary:= integer ('/' integer)? | name | '(' expr ')'
#
# Coefficients are exact rationals; whitespace is insignificant.  A name is
# "x" followed by subscript digits; non-basis names are resolved through the
# iterated-bracket notation adapter, so dependent words like x312 parse to
# their Jacobi normal form.


_MINUS_CHARS = {"-", "−", "–"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in _MINUS_CHARS:
            tokens.append(("op", "-", i))
            i += 1
            continue
        if ch in "+*/^()":
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, alg: GradedAlgebra, text: str):
        self.alg = alg
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, at = self.next()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", at)

    def parse(self) -> Polynomial:
        poly = self.expr()
        kind, value, at = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {value!r}", at)
        return poly

    def expr(self) -> Polynomial:
        sign = Q1
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.next()
            if value == "-":
                sign = -Q1
        poly = sign * self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.next()
                rhs = self.term()
                poly = poly + rhs if value == "+" else poly - rhs
            else:
                return poly

    def term(self) -> Polynomial:
        poly = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.next()
                poly = poly * self.factor()
            else:
                return poly

    def factor(self) -> Polynomial:
        poly = self.primary()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.next()
            kind, value, at = self.next()
            if kind != "num":
                raise ParseError("expected integer exponent after '^'", at)
            poly = poly ** int(value)
        return poly

    def primary(self) -> Polynomial:
        kind, value, at = self.next()
        if kind == "num":
            numerator = int(value)
            kind2, value2, _ = self.peek()
            if kind2 == "op" and value2 == "/":
                self.next()
                kind3, value3, at3 = self.next()
                if kind3 != "num":
                    raise ParseError("expected integer denominator", at3)
                return Polynomial.constant(self.alg, Fraction(numerator, int(value3)))
            return Polynomial.constant(self.alg, numerator)
        if kind == "name":
            return self.resolve_name(value, at)
        if kind == "op" and value == "(":
            poly = self.expr()
            self.expect_op(")")
            return poly
        raise ParseError(f"unexpected token {value!r}", at)

    def resolve_name(self, name: str, at: int) -> Polynomial:
        alg = self.alg
        k = alg.name_index.get(name)
        if k is not None:
            return Polynomial.variable(alg, k)
        if not (name.startswith("x") and name[1:].isdigit() and len(name) > 1):
            raise ParseError(f"unknown symbol {name!r}", at)
        indices = tuple(int(c) for c in name[1:])
        try:
            elt = iterated_bracket(alg, indices)
        except InputError as exc:
            raise ParseError(f"unknown symbol {name!r}: {exc}", at) from exc
        return Polynomial.from_lie(alg, elt)


def parse_polynomial(alg: GradedAlgebra, text: str) -> Polynomial:
    return _Parser(alg, text).parse()


def format_polynomial(f: Polynomial) -> str:
    """Deterministic canonical text, descending graded-lex term order;
    round-trips through :func:`parse_polynomial`."""
    if not f.terms:
        return "0"
    names = f.alg.names
    pieces = []
    for m, c in f.sorted_terms():
        factors = []
        for v, e in m:
            factors.append(names[v] if e == 1 else f"{names[v]}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
