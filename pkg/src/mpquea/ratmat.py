"""Immutable rational matrices as tuples of Fractions, with flint-backed kernels."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import flint

from .errors import DimensionMismatch

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use strings such as '1/6'")
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def vec(v: Iterable) -> Vector:
    return tuple(frac(x) for x in v)


def mat(m: Iterable[Iterable]) -> Matrix:
    rows = tuple(vec(r) for r in m)
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("ragged matrix")
    return rows


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def zeros(r: int, c: int | None = None) -> Matrix:
    c = r if c is None else c
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def diag(d: Sequence) -> Matrix:
    n = len(d)
    return tuple(tuple(frac(d[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionMismatch(f"shapes {shape(a)} and {shape(b)}")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionMismatch(f"shapes {shape(a)} and {shape(b)}")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c, m: Matrix) -> Matrix:
    c = frac(c)
    return tuple(tuple(c * x for x in r) for r in m)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != shape(b)[0]:
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt) for r in a)


def matvec(a: Matrix, v: Sequence) -> Vector:
    if shape(a)[1] != len(v):
        raise DimensionMismatch(f"cannot apply {shape(a)} to length {len(v)}")
    return tuple(sum((x * y for x, y in zip(r, v)), Fraction(0)) for r in a)


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch(f"lengths {len(u)} and {len(v)}")
    return sum((frac(x) * frac(y) for x, y in zip(u, v)), Fraction(0))


def bilinear(u: Sequence, m: Matrix, v: Sequence) -> Fraction:
    return dot(u, matvec(m, v))


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vneg(u: Sequence) -> Vector:
    return tuple(-x for x in u)


def vscale(c, u: Sequence) -> Vector:
    c = frac(c)
    return tuple(c * x for x in u)


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def is_zero(m: Matrix) -> bool:
    return all(x == 0 for r in m for x in r)


def is_antisymmetric(m: Matrix) -> bool:
    return is_zero(add(m, transpose(m)))


def is_symmetric(m: Matrix) -> bool:
    return m == transpose(m)


def to_flint(m: Matrix) -> flint.fmpq_mat:
    r, c = shape(m)
    return flint.fmpq_mat(r, c, [flint.fmpq(x.numerator, x.denominator) for row in m for x in row])


def from_flint(m) -> Matrix:
    return tuple(tuple(frac(m[i, j]) for j in range(m.ncols())) for i in range(m.nrows()))


def det(m: Matrix) -> Fraction:
    r, c = shape(m)
    if r != c:
        raise DimensionMismatch("determinant of a non-square matrix")
    if r == 0:
        return Fraction(1)
    return frac(to_flint(m).det())


def inv(m: Matrix) -> Matrix:
    if det(m) == 0:
        raise ZeroDivisionError("singular matrix")
    return from_flint(to_flint(m).inv())


def rank(m: Matrix) -> int:
    if not m:
        return 0
    return to_flint(m).rank()


def solve_left(basis: Matrix, v: Sequence) -> Vector | None:
    """Return c with c·basis = v for independent rows, or None if v is outside the span."""
    if not basis:
        return () if all(x == 0 for x in v) else None
    b = to_flint(transpose(basis))
    aug = to_flint(tuple(tuple(row) + (x,) for row, x in zip(transpose(basis), v)))
    if aug.rank() != b.rank():
        return None
    r = len(basis)
    # Least-squares style reduction to a square system through the normal equations.
    bt = to_flint(basis)
    gram = bt * b
    rhs = bt * flint.fmpq_mat(len(v), 1, [flint.fmpq(frac(x).numerator, frac(x).denominator) for x in v])
    sol = gram.solve(rhs)
    return tuple(frac(sol[i, 0]) for i in range(r))


def common_denominator(m: Iterable[Iterable[Fraction]]) -> int:
    d = 1
    for row in m:
        for x in row:
            d = lcm(d, frac(x).denominator)
    return d


def hnf_rows(m: Matrix) -> Matrix:
    """Row-style Hermite normal form of the Z-span of the rows, zero rows dropped."""
    if not m:
        return ()
    d = common_denominator(m)
    r, c = shape(m)
    z = flint.fmpz_mat(r, c, [int(x * d) for row in m for x in row])
    h = z.hnf()
    out = []
    for i in range(h.nrows()):
        row = tuple(Fraction(int(h[i, j]), d) for j in range(c))
        if any(row):
            out.append(row)
    return tuple(out)


def fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_matrix(m: Matrix) -> str:
    return "[" + ",".join("[" + ",".join(fmt_frac(x) for x in r) + "]" for r in m) + "]"


def to_json(m: Matrix) -> list:
    return [[x.numerator if x.denominator == 1 else fmt_frac(x) for x in r] for r in m]
