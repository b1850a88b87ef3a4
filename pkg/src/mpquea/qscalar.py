"""Exact scalars in Q(t) with t = q^(1/N), and q-number combinatorics."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import flint

from .errors import BinomialRange, DivisionByZero, ExponentDenominatorExceedsRoot

_ONE_POLY = flint.fmpq_poly([1])


def _lift(p: flint.fmpq_poly, k: int) -> flint.fmpq_poly:
    """Substitute t -> t^k."""
    if k == 1:
        return p
    coeffs = p.coeffs()
    out = [0] * ((len(coeffs) - 1) * k + 1) if coeffs else []
    for i, c in enumerate(coeffs):
        out[i * k] = c
    return flint.fmpq_poly(out)


class FieldScalar:
    """Element num(t)/den(t) of Q(t), t = q^(1/N); reduced with monic denominator."""

    __slots__ = ("num", "den", "N", "_hash")

    def __init__(self, num, den=None, N: int = 1, _normalized: bool = False):
        if not isinstance(num, flint.fmpq_poly):
            num = flint.fmpq_poly([num]) if not isinstance(num, list) else flint.fmpq_poly(num)
        if den is None:
            den = _ONE_POLY
        elif not isinstance(den, flint.fmpq_poly):
            den = flint.fmpq_poly([den]) if not isinstance(den, list) else flint.fmpq_poly(den)
        if not _normalized:
            if den.is_zero():
                raise DivisionByZero("zero denominator")
            if num.is_zero():
                den = _ONE_POLY
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num // g
                    den = den // g
                lc = den.coeffs()[-1]
                if lc != 1:
                    num = num / lc
                    den = den / lc
        self.num = num
        self.den = den
        self.N = N
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c, N: int = 1) -> "FieldScalar":
        c = Fraction(c)
        return cls(flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator)]), _ONE_POLY, N, True)

    @classmethod
    def t_power(cls, k: int, N: int) -> "FieldScalar":
        if k >= 0:
            return cls(flint.fmpq_poly([0] * k + [1]), _ONE_POLY, N, True)
        return cls(_ONE_POLY, flint.fmpq_poly([0] * (-k) + [1]), N, True)

    def lift(self, N: int) -> "FieldScalar":
        if N == self.N:
            return self
        if N % self.N:
            raise ExponentDenominatorExceedsRoot(f"cannot lift root order {self.N} to {N}")
        k = N // self.N
        return FieldScalar(_lift(self.num, k), _lift(self.den, k), N, True)

    def _common(self, other) -> tuple["FieldScalar", "FieldScalar"]:
        if not isinstance(other, FieldScalar):
            other = FieldScalar.const(other, self.N)
        if other.N == self.N:
            return self, other
        n = lcm(self.N, other.N)
        return self.lift(n), other.lift(n)

    # predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    # arithmetic
    def __add__(self, other):
        a, b = self._common(other)
        if a.den == b.den:
            if a.den == _ONE_POLY:
                return FieldScalar(a.num + b.num, _ONE_POLY, a.N, True)
            return FieldScalar(a.num + b.num, a.den, a.N)
        return FieldScalar(a.num * b.den + b.num * a.den, a.den * b.den, a.N)

    __radd__ = __add__

    def __neg__(self):
        return FieldScalar(-self.num, self.den, self.N, True)

    def __sub__(self, other):
        return self + (-other if isinstance(other, FieldScalar) else FieldScalar.const(-Fraction(other), self.N))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        if a.den == _ONE_POLY and b.den == _ONE_POLY:
            return FieldScalar(a.num * b.num, _ONE_POLY, a.N, True)
        return FieldScalar(a.num * b.num, a.den * b.den, a.N)

    __rmul__ = __mul__

    def inv(self) -> "FieldScalar":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return FieldScalar(self.den, self.num, self.N)

    def __truediv__(self, other):
        if not isinstance(other, FieldScalar):
            other = FieldScalar.const(other, self.N)
        return self * other.inv()

    def __rtruediv__(self, other):
        return FieldScalar.const(other, self.N) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return FieldScalar(self.num ** k, self.den ** k, self.N, True)

    # comparison
    def __eq__(self, other):
        if not isinstance(other, FieldScalar):
            try:
                other = FieldScalar.const(other, self.N)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._common(other)
        return a.num == b.num and a.den == b.den

    def minimal(self) -> "FieldScalar":
        """Same element written over the smallest possible root order."""
        g = self.N
        for p in (self.num, self.den):
            for i, c in enumerate(p.coeffs()):
                if c != 0:
                    g = gcd(g, i)
        if g <= 1:
            return self
        n = [c for i, c in enumerate(self.num.coeffs()) if i % g == 0]
        d = [c for i, c in enumerate(self.den.coeffs()) if i % g == 0]
        return FieldScalar(flint.fmpq_poly(n), flint.fmpq_poly(d), self.N // g, True)

    def key(self) -> tuple:
        m = self.minimal()
        return (m.N, tuple(m.num.coeffs()), tuple(m.den.coeffs()))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(str(x) for x in self.key()))
        return self._hash

    # rendering
    def laurent_terms(self, poly) -> list[tuple[Fraction, Fraction]]:
        """(coefficient, q-exponent) pairs of a polynomial in t."""
        out = []
        for i, c in enumerate(poly.coeffs()):
            if c != 0:
                out.append((Fraction(int(c.p), int(c.q)), Fraction(i, self.N)))
        return out

    def render(self) -> str:
        return render_scalar(self)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"FieldScalar({self.render()!r})"


def _fmt_exp(e: Fraction) -> str:
    if e == 1:
        return "q"
    if e.denominator == 1 and e > 0:
        return f"q^{e.numerator}"
    s = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
    return f"q^({s})"


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_laurent(terms: list[tuple[Fraction, Fraction]]) -> str:
    """Render sum c*q^e, highest exponent first."""
    if not terms:
        return "0"
    parts = []
    for idx, (c, e) in enumerate(sorted(terms, key=lambda t: -t[1])):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = _fmt_coeff(a)
        elif a == 1:
            body = _fmt_exp(e)
        else:
            body = f"{_fmt_coeff(a)}*{_fmt_exp(e)}"
        if idx == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f"{sign}{body}")
    return "".join(parts)


def render_scalar(x: FieldScalar) -> str:
    x = x.minimal()
    dt = x.laurent_terms(x.den)
    nt = x.laurent_terms(x.num)
    if len(dt) == 1:
        c, e = dt[0]
        return render_laurent([(a / c, b - e) for a, b in nt])
    # pull the lowest power of t out of the denominator so that it is a genuine polynomial
    return f"{_wrap(render_laurent(nt))}/({render_laurent(dt)})"


def _wrap(s: str) -> str:
    body = s[1:] if s.startswith("-") else s
    if "+" in body or "-" in body:
        return f"({s})"
    return s


class ScalarContext:
    """Root order N: scalars live in Q(q^(1/N))."""

    __slots__ = ("N", "_cache")

    def __init__(self, N: int = 1):
        if N < 1:
            raise ValueError("root order must be positive")
        self.N = int(N)
        self._cache: dict[Fraction, FieldScalar] = {}

    def q_power(self, r) -> FieldScalar:
        r = Fraction(r)
        hit = self._cache.get(r)
        if hit is not None:
            return hit
        k = r * self.N
        if k.denominator != 1:
            raise ExponentDenominatorExceedsRoot(f"q^({r}) needs a root order divisible by {r.denominator}")
        out = FieldScalar.t_power(int(k), self.N)
        self._cache[r] = out
        return out

    def const(self, c) -> FieldScalar:
        return FieldScalar.const(c, self.N)

    @property
    def one(self) -> FieldScalar:
        return FieldScalar.const(1, self.N)

    @property
    def zero(self) -> FieldScalar:
        return FieldScalar.const(0, self.N)

    def __repr__(self) -> str:
        return f"ScalarContext(N={self.N})"


@lru_cache(maxsize=None)
def _context(N: int) -> ScalarContext:
    return ScalarContext(N)


def context(N: int) -> ScalarContext:
    """Shared context per root order (contexts only cache immutable scalars)."""
    return _context(int(N))


def q_power(ctx: ScalarContext, r) -> FieldScalar:
    return ctx.q_power(r)


def root_order_for(values) -> int:
    """lcm of denominators of an iterable of rationals (nested iterables allowed)."""
    n = 1
    stack = [values]
    while stack:
        v = stack.pop()
        if isinstance(v, (list, tuple)):
            stack.extend(v)
        else:
            n = lcm(n, Fraction(v).denominator)
    return n


def _one_like(q: FieldScalar) -> FieldScalar:
    return FieldScalar.const(1, q.N)


def q_paren_number(n: int, q: FieldScalar) -> FieldScalar:
    """(n)_q = 1 + q + ... + q^(n-1); (0)_q = 1 by convention."""
    if n < 0:
        raise BinomialRange("negative q-number")
    if n == 0:
        return _one_like(q)
    out = _one_like(q) - _one_like(q)
    p = _one_like(q)
    for _ in range(n):
        out = out + p
        p = p * q
    return out


def q_paren_factorial(n: int, q: FieldScalar) -> FieldScalar:
    out = _one_like(q)
    for k in range(1, n + 1):
        out = out * q_paren_number(k, q)
    return out


def q_paren_binomial(n: int, k: int, q: FieldScalar) -> FieldScalar:
    if not 0 <= k <= n:
        raise BinomialRange(f"binomial ({n} choose {k}) out of range")
    return q_paren_factorial(n, q) / (q_paren_factorial(k, q) * q_paren_factorial(n - k, q))


def q_bracket_number(n: int, q: FieldScalar) -> FieldScalar:
    """[n]_q = sum_{s=0}^{n-1} q^(2s-n+1)."""
    if n < 0:
        raise BinomialRange("negative q-number")
    out = _one_like(q) - _one_like(q)
    for s in range(n):
        out = out + q ** (2 * s - n + 1)
    return out


def q_bracket_factorial(n: int, q: FieldScalar) -> FieldScalar:
    out = _one_like(q)
    for k in range(1, n + 1):
        out = out * q_bracket_number(k, q)
    return out


def q_bracket_binomial(n: int, k: int, q: FieldScalar) -> FieldScalar:
    if not 0 <= k <= n:
        raise BinomialRange(f"binomial [{n} choose {k}] out of range")
    return q_bracket_factorial(n, q) / (q_bracket_factorial(k, q) * q_bracket_factorial(n - k, q))
