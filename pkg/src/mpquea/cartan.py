"""Cartan data: generalized Cartan matrices, symmetrizers and the root form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from . import ratmat as rm
from .errors import Decomposable, DimensionMismatch, NotFiniteType, NotGCM, NotSymmetrizable

NAMED_TYPES: dict[str, list[list[int]]] = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "B2": [[2, -2], [-1, 2]],
    "C3": [[2, -1, 0], [-1, 2, -2], [0, -1, 2]],
    "D4": [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]],
    "G2": [[2, -3], [-1, 2]],
}


@dataclass(frozen=True)
class CartanDatum:
    rank: int
    A: tuple[tuple[int, ...], ...]
    D: tuple[int, ...]
    finite_type: bool
    name: str | None = None

    @property
    def A_q(self) -> rm.Matrix:
        return rm.mat(self.A)

    @property
    def D_q(self) -> rm.Matrix:
        return rm.diag(self.D)

    @property
    def DA(self) -> rm.Matrix:
        return rm.matmul(self.D_q, self.A_q)

    def simple_root(self, i: int) -> rm.Vector:
        return rm.unit(self.rank, i)

    def require_finite(self) -> None:
        if not self.finite_type:
            raise NotFiniteType(f"Cartan matrix {self.A} is not of finite type")


def _connected(n: int, a: Sequence[Sequence[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j not in seen and a[i][j] != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def _positive_definite(m: rm.Matrix) -> bool:
    return all(rm.det(tuple(r[:k] for r in m[:k])) > 0 for k in range(1, len(m) + 1))


def build_cartan(A, name: str | None = None) -> CartanDatum:
    if isinstance(A, str):
        key = A.strip().upper()
        if key not in NAMED_TYPES:
            raise NotGCM(f"unknown Cartan type name {A!r}")
        return build_cartan(NAMED_TYPES[key], name=key)
    rows = [list(r) for r in A]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotGCM("Cartan matrix must be square and nonempty")
    a = []
    for r in rows:
        out = []
        for x in r:
            fx = rm.frac(x)
            if fx.denominator != 1:
                raise NotGCM("Cartan matrix entries must be integers")
            out.append(int(fx))
        a.append(out)
    for i in range(n):
        if a[i][i] != 2:
            raise NotGCM(f"diagonal entry a_{i + 1}{i + 1} = {a[i][i]} is not 2")
        for j in range(n):
            if i != j and a[i][j] > 0:
                raise NotGCM(f"positive off-diagonal entry a_{i + 1}{j + 1}")
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise NotGCM(f"zero pattern of a_{i + 1}{j + 1}, a_{j + 1}{i + 1} is asymmetric")
    if not _connected(n, a):
        raise Decomposable("support graph of the Cartan matrix is disconnected")
    # propagate d_j = d_i a_ij / a_ji along a spanning tree, then check every edge
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if a[i][j] != 0 and d[j] is None:
                d[j] = d[i] * a[i][j] / a[j][i]
                stack.append(j)
    for i in range(n):
        for j in range(n):
            if d[i] * a[i][j] != d[j] * a[j][i]:
                raise NotSymmetrizable("no positive symmetrizer exists")
    den = lcm(*(x.denominator for x in d))
    ints = [int(x * den) for x in d]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    A_t = tuple(tuple(r) for r in a)
    DA = rm.matmul(rm.diag(ints), rm.mat(A_t))
    return CartanDatum(n, A_t, tuple(ints), _positive_definite(DA), name)


def root_pairing(c: CartanDatum, lam: Sequence, mu: Sequence) -> Fraction:
    if len(lam) != c.rank or len(mu) != c.rank:
        raise DimensionMismatch(f"vectors must have length {c.rank}")
    return rm.bilinear(rm.vec(lam), c.DA, rm.vec(mu))


def fundamental_weights(c: CartanDatum) -> rm.Matrix:
    """Rows are the fundamental weights in simple-root coordinates."""
    c.require_finite()
    # (omega_i, alpha_j) = d_i delta_ij  means  W (DA) = D
    return rm.matmul(c.D_q, rm.inv(c.DA))
