"""Rational functions over the polynomial ring, with exact multivariate GCD.

The GCD uses the primitive pseudo-remainder sequence: recurse on the highest
variable present, split content and primitive part, and reduce with
pseudo-remainders.  Polynomials arising here are small (minor determinants
and kernel vectors), so the simple PRS is plenty.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .errors import InputError
from .poly import Polynomial

Q0 = Fraction(0)
Q1 = Fraction(1)


def rational_content(f: Polynomial) -> Fraction:
    """gcd of the coefficients (as a positive rational), 0 for the zero
    polynomial."""
    num, den = 0, 1
    for c in f.terms.values():
        num = int_gcd(num, abs(c.numerator))
        den = den * c.denominator // int_gcd(den, c.denominator)
    return Fraction(num, den) if num else Q0


def primitive_part(f: Polynomial) -> Polynomial:
    """f divided by its rational content, scaled so the leading coefficient
    is positive."""
    if not f:
        return f
    c = rational_content(f)
    if f.leading_coefficient() < 0:
        c = -c
    return f * (1 / c)


def _main_variable(f: Polynomial, g: Polynomial) -> int | None:
    vars_ = f.support() | g.support()
    return max(vars_) if vars_ else None


def _as_univariate(f: Polynomial, v: int) -> dict[int, Polynomial]:
    alg = f.alg
    coeffs: dict[int, Polynomial] = {}
    for m, c in f.terms.items():
        deg = 0
        rest = []
        for var, e in m:
            if var == v:
                deg = e
            else:
                rest.append((var, e))
        part = coeffs.get(deg)
        addend = Polynomial(alg, {tuple(rest): c})
        coeffs[deg] = addend if part is None else part + addend
    return {d: p for d, p in coeffs.items() if p}


def _from_univariate(alg, v: int, coeffs: dict[int, Polynomial]) -> Polynomial:
    out = Polynomial.zero(alg)
    for d, p in coeffs.items():
        out = out + (p * Polynomial(alg, {((v, d),): Q1}) if d else p)
    return out


def _pseudo_rem(a: dict[int, Polynomial], b: dict[int, Polynomial], alg, v: int) -> Polynomial:
    a = dict(a)
    db = max(b)
    lb = b[db]
    while a and max(a) >= db:
        da = max(a)
        la = a[da]
        new: dict[int, Polynomial] = {}
        for d, p in a.items():
            new[d] = p * lb
        for d, p in b.items():
            shifted = d + da - db
            q = new.get(shifted, Polynomial.zero(alg)) - la * p
            new[shifted] = q
        a = {d: p for d, p in new.items() if p}
    return _from_univariate(alg, v, a)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Canonical gcd (content 1, positive leading coefficient)."""
    if f.alg.key != g.alg.key:
        raise InputError("gcd operands from different algebras")
    if not f:
        return primitive_part(g) if g else f
    if not g:
        return primitive_part(f)
    v = _main_variable(f, g)
    if v is None or (v not in f.support() and v not in g.support()):
        return Polynomial.constant(f.alg, 1)
    if v not in f.support() or v not in g.support():
        # one operand is free of the main variable: gcd divides its content side
        lo, hi = (f, g) if v not in f.support() else (g, f)
        cont = _content_in(hi, v)
        return poly_gcd(lo, cont)
    cf, pf = _split_content(f, v)
    cg, pg = _split_content(g, v)
    cont = poly_gcd(cf, cg)
    a, b = _as_univariate(pf, v), _as_univariate(pg, v)
    if max(a) < max(b):
        a, b = b, a
    while b:
        rem = _pseudo_rem(a, b, f.alg, v)
        a = b
        if rem:
            # primitive part in v keeps the sequence (and the result) honest
            _, rem_pp = _split_content(rem, v)
            b = _as_univariate(primitive_part(rem_pp), v)
        else:
            b = {}
    last = _from_univariate(f.alg, v, a)
    if v in last.support():
        _, last = _split_content(last, v)
    result = primitive_part(last)
    return primitive_part(cont * result)


def _content_in(f: Polynomial, v: int) -> Polynomial:
    coeffs = list(_as_univariate(f, v).values())
    cont = coeffs[0]
    for c in coeffs[1:]:
        cont = poly_gcd(cont, c)
        if cont == Polynomial.constant(f.alg, 1):
            break
    return cont


def _split_content(f: Polynomial, v: int) -> tuple[Polynomial, Polynomial]:
    cont = _content_in(f, v)
    return cont, div_exact(f, cont)


def div_exact(f: Polynomial, d: Polynomial) -> Polynomial:
    """Exact division f / d; raises if d does not divide f."""
    if not d:
        raise InputError("division by the zero polynomial")
    alg = f.alg
    n = alg.dim
    quotient = Polynomial.zero(alg)
    rem = f
    lead_d = d.leading_monomial()
    lc_d = d.terms[lead_d]
    d_exp = dict(lead_d)
    while rem:
        lead_r = rem.leading_monomial()
        r_exp = dict(lead_r)
        q_exp = {}
        ok = True
        for var, e in d_exp.items():
            re = r_exp.get(var, 0)
            if re < e:
                ok = False
                break
            if re > e:
                q_exp[var] = re - e
        if ok:
            for var, e in r_exp.items():
                if var not in d_exp:
                    q_exp[var] = e
        if not ok:
            raise InputError("inexact polynomial division")
        term = Polynomial(alg, {tuple(sorted(q_exp.items())): rem.terms[lead_r] / lc_d})
        quotient = quotient + term
        rem = rem - term * d
    return quotient


def poly_lcm(f: Polynomial, g: Polynomial) -> Polynomial:
    if not f or not g:
        return Polynomial.zero(f.alg)
    return primitive_part(div_exact(f * g, poly_gcd(f, g)))


class RatFunc:
    """num/den with gcd-reduced terms; den is kept canonical (content 1,
    positive leading coefficient), so equality is structural."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, _reduced: bool = False):
        if den is None:
            den = Polynomial.constant(num.alg, 1)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = Polynomial.constant(num.alg, 1)
            else:
                g = poly_gcd(num, den)
                if g.total_degree() > 0 or g != Polynomial.constant(num.alg, 1):
                    num = div_exact(num, g)
                    den = div_exact(den, g)
                c = rational_content(den)
                if den.leading_coefficient() < 0:
                    c = -c
                if c != 1:
                    num = num * (1 / c)
                    den = den * (1 / c)
        self.num = num
        self.den = den

    @classmethod
    def from_scalar(cls, alg, value) -> "RatFunc":
        return cls(Polynomial.constant(alg, value), _reduced=True)

    @property
    def alg(self):
        return self.num.alg

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_scalar(self.alg, other)
        if isinstance(other, Polynomial):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Polynomial):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.from_scalar(self.alg, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other / self

    def __str__(self):
        if self.den == Polynomial.constant(self.alg, 1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def clear_denominators(values: list[RatFunc]) -> tuple[list[Polynomial], Polynomial]:
    """Multiply a vector of rational functions by the least common
    denominator; returns (numerators, that denominator)."""
    if not values:
        raise InputError("empty vector")
    alg = values[0].alg
    common = Polynomial.constant(alg, 1)
    for v in values:
        common = poly_lcm(common, v.den)
    cleared = [v.num * div_exact(common, v.den) for v in values]
    return cleared, common
