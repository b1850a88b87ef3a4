"""Rational lattices containing the root lattice, and the root-twisting maps psi_+ and psi_-."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import ratmat as rm
from .cartan import CartanDatum, fundamental_weights
from .errors import DimensionMismatch, NotAntisymmetric, RankDeficient

SIDES = ("plain", "plus", "minus", "doubled")


@dataclass(frozen=True)
class LatticeVector:
    coords: rm.Vector
    side: str = "plain"

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"unknown side tag {self.side!r}")
        object.__setattr__(self, "coords", rm.vec(self.coords))

    def doubled(self) -> rm.Vector:
        """Embed a plus/minus vector into the doubled ambient space."""
        n = len(self.coords)
        zero = tuple(Fraction(0) for _ in range(n))
        if self.side == "plus":
            return self.coords + zero
        if self.side == "minus":
            return zero + self.coords
        if self.side == "doubled":
            return self.coords
        raise DimensionMismatch("plain vectors have no doubled embedding")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        if self.side != other.side:
            raise DimensionMismatch(f"cannot add {self.side} and {other.side} vectors")
        return LatticeVector(rm.vadd(self.coords, other.coords), self.side)


@dataclass(frozen=True)
class TwistMatrix:
    psi: rm.Matrix

    def __post_init__(self):
        object.__setattr__(self, "psi", rm.mat(self.psi))
        r, c = rm.shape(self.psi)
        if r != c:
            raise DimensionMismatch("twist matrix must be square")

    @property
    def n(self) -> int:
        return len(self.psi)

    @property
    def antisymmetric(self) -> bool:
        return rm.is_antisymmetric(self.psi)

    @property
    def root_denominator(self) -> int:
        return rm.common_denominator(self.psi)

    def require_antisymmetric(self) -> None:
        if not self.antisymmetric:
            raise NotAntisymmetric("twist matrix is not antisymmetric")

    def __add__(self, other: "TwistMatrix") -> "TwistMatrix":
        return TwistMatrix(rm.add(self.psi, other.psi))

    def __neg__(self) -> "TwistMatrix":
        return TwistMatrix(rm.scale(-1, self.psi))


def as_twist(psi) -> TwistMatrix:
    return psi if isinstance(psi, TwistMatrix) else TwistMatrix(psi)


def psi_matrix(c: CartanDatum, psi, sign: str) -> rm.Matrix:
    """Coordinate matrix of psi_+ (D^-1 Psi A) or psi_- (D^-1 Psi^T A) on column coordinates."""
    p = as_twist(psi).psi
    if len(p) != c.rank:
        raise DimensionMismatch(f"twist matrix has size {len(p)}, rank is {c.rank}")
    dinv = rm.diag([Fraction(1, d) for d in c.D])
    if sign == "+":
        return rm.matmul(dinv, rm.matmul(p, c.A_q))
    if sign == "-":
        return rm.matmul(dinv, rm.matmul(rm.transpose(p), c.A_q))
    raise ValueError("sign must be '+' or '-'")


def psi_apply(c: CartanDatum, psi, sign: str, v):
    m = psi_matrix(c, psi, sign)
    if isinstance(v, LatticeVector):
        if len(v.coords) != c.rank:
            raise DimensionMismatch(f"vector must have length {c.rank}")
        return LatticeVector(rm.matvec(m, v.coords), v.side)
    if len(v) != c.rank:
        raise DimensionMismatch(f"vector must have length {c.rank}")
    return rm.matvec(m, rm.vec(v))


def psi_apply_double_sum(c: CartanDatum, psi, sign: str, v: Sequence) -> rm.Vector:
    """Evaluate psi_+/- straight from its double-sum definition (independent route)."""
    p = as_twist(psi).psi
    n = c.rank
    out = [Fraction(0)] * n
    for l, vl in enumerate(rm.vec(v)):
        if vl == 0:
            continue
        for i in range(n):
            for j in range(n):
                coeff = p[i][j] if sign == "+" else p[j][i]
                out[i] += vl * coeff * c.A[j][l] / c.D[i]
    return tuple(out)


@dataclass(frozen=True)
class Lattice:
    """Z-span of independent rational rows in a fixed ambient dimension."""

    basis: rm.Matrix
    dim: int
    _inv: rm.Matrix | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], dim: int | None = None) -> "Lattice":
        rows = rm.mat(gens)
        if dim is None:
            if not rows:
                raise DimensionMismatch("empty generator list needs an explicit dimension")
            dim = len(rows[0])
        if rows and len(rows[0]) != dim:
            raise DimensionMismatch("generator length does not match the ambient dimension")
        return cls(rm.hnf_rows(rows), dim)

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence]) -> "Lattice":
        b = rm.mat(basis)
        if rm.rank(b) != len(b):
            raise RankDeficient("basis rows are linearly dependent")
        return cls(b, len(b[0]))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def full_rank(self) -> bool:
        return self.rank == self.dim

    def hnf(self) -> rm.Matrix:
        return rm.hnf_rows(self.basis)

    def coordinates(self, v: Sequence) -> rm.Vector | None:
        v = rm.vec(v)
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector length {len(v)} does not match dimension {self.dim}")
        if self.full_rank:
            inv = self._inv
            if inv is None:
                inv = rm.inv(self.basis)
                object.__setattr__(self, "_inv", inv)
            return tuple(rm.dot(v, col) for col in rm.transpose(inv))
        return rm.solve_left(self.basis, v)

    def contains(self, v: Sequence) -> tuple[bool, tuple[int, ...] | None]:
        c = self.coordinates(v)
        if c is None or any(x.denominator != 1 for x in c):
            return False, None
        return True, tuple(int(x) for x in c)

    def __contains__(self, v) -> bool:
        return self.contains(v)[0]

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(b in self for b in other.basis)

    def same_span(self, other: "Lattice") -> bool:
        return self.dim == other.dim and self.hnf() == other.hnf()

    def covolume(self) -> Fraction:
        if not self.full_rank:
            raise RankDeficient("covolume of a lower-rank lattice")
        return abs(rm.det(self.basis))

    def index_over(self, sub: "Lattice") -> Fraction:
        """[self : sub] for full-rank lattices."""
        return sub.covolume() / self.covolume()


def lattice_contains(L: Lattice, v) -> tuple[bool, tuple[int, ...] | None]:
    if isinstance(v, LatticeVector):
        v = v.coords if L.dim == len(v.coords) else v.doubled()
    return L.contains(v)


def lattice_sum(*lattices: Lattice) -> Lattice:
    dims = {L.dim for L in lattices}
    if len(dims) != 1:
        raise DimensionMismatch("lattices live in different ambient spaces")
    rows = [r for L in lattices for r in L.basis]
    return Lattice.from_generators(rows, dims.pop())


def image_lattice(m: rm.Matrix, L: Lattice, allow_deficient: bool = True) -> Lattice:
    """Image of L under the column-coordinate linear map m."""
    rows = [rm.matvec(m, b) for b in L.basis]
    out = Lattice.from_generators(rows, len(m))
    if out.rank < L.rank and not allow_deficient:
        raise RankDeficient(f"image has rank {out.rank} < {L.rank}")
    return out


def root_lattice(c: CartanDatum) -> Lattice:
    return Lattice(rm.identity(c.rank), c.rank)


def weight_lattice(c: CartanDatum) -> Lattice:
    return Lattice.from_generators(fundamental_weights(c), c.rank)


def scaled_root_lattice(c: CartanDatum, k) -> Lattice:
    return Lattice(rm.scale(rm.frac(k), rm.identity(c.rank)), c.rank)


def q_psi(c: CartanDatum, psi) -> Lattice:
    """Q + psi_+(Q) + psi_-(Q)."""
    Q = root_lattice(c)
    return lattice_sum(Q, image_lattice(psi_matrix(c, psi, "+"), Q), image_lattice(psi_matrix(c, psi, "-"), Q))


def product_lattice(plus: Lattice, minus: Lattice) -> Lattice:
    """plus x minus inside the doubled ambient space."""
    n, m = plus.dim, minus.dim
    rows = [tuple(r) + (Fraction(0),) * m for r in plus.basis]
    rows += [(Fraction(0),) * n + tuple(r) for r in minus.basis]
    return Lattice(tuple(rows), n + m)


def plus_part(v: Sequence, n: int) -> rm.Vector:
    return tuple(v[:n])


def minus_part(v: Sequence, n: int) -> rm.Vector:
    return tuple(v[n:])


def twisted_basis(c: CartanDatum, psi, M_plus: Lattice, M_minus: Lattice) -> dict:
    """Twisted lattice bases in the doubled ambient space (copy order: plus, minus).

    varpi_i^+ = (mu_i + psi_+(mu_i), -psi_-(mu_i)) for mu_i in the basis of M_plus,
    varpi_i^- = (-psi_+(mu_i), mu_i + psi_-(mu_i)) for mu_i in the basis of M_minus,
    tau_i^+/- are the same vectors for mu_i = alpha_i.
    """
    n = c.rank
    pp = psi_matrix(c, psi, "+")
    pm = psi_matrix(c, psi, "-")

    def vp(mu):
        return rm.vadd(mu, rm.matvec(pp, mu)) + rm.vneg(rm.matvec(pm, mu))

    def vm(mu):
        return rm.vneg(rm.matvec(pp, mu)) + rm.vadd(mu, rm.matvec(pm, mu))

    varpi_plus = tuple(vp(mu) for mu in M_plus.basis)
    varpi_minus = tuple(vm(mu) for mu in M_minus.basis)
    tau_plus = tuple(vp(rm.unit(n, i)) for i in range(n))
    tau_minus = tuple(vm(rm.unit(n, i)) for i in range(n))
    Mp = Lattice.from_basis(varpi_plus)
    Mm = Lattice.from_basis(varpi_minus)
    return {
        "varpi_plus": varpi_plus,
        "varpi_minus": varpi_minus,
        "tau_plus": tau_plus,
        "tau_minus": tau_minus,
        "M_plus_psi": Mp,
        "M_minus_psi": Mm,
        "M_star_psi": lattice_sum(Mp, Mm),
    }


def stable_closure(m: rm.Matrix, L: Lattice, max_steps: int = 12) -> Lattice | None:
    """Smallest lattice containing L and stable under m, or None if none is found.

    A stable lattice exists only when the characteristic polynomial of m is integral,
    so the search stops once the covolume stops shrinking or the step budget runs out.
    """
    cur = L
    for _ in range(max_steps):
        nxt = lattice_sum(cur, image_lattice(m, cur))
        if nxt.same_span(cur):
            return cur
        cur = nxt
    return None


def charpoly_integral(m: rm.Matrix) -> bool:
    p = rm.to_flint(m).charpoly()
    return all(int(c.q) == 1 for c in p.coeffs())


def random_antisymmetric(rng, n: int, max_num: int = 3, max_den: int = 12) -> rm.Matrix:
    """Seeded antisymmetric matrix with entries a/b, |a| <= max_num, 1 <= b <= max_den."""
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a = int(rng.integers(-max_num, max_num + 1))
            b = int(rng.integers(1, max_den + 1))
            m[i][j] = Fraction(a, b)
            m[j][i] = -m[i][j]
    return tuple(tuple(r) for r in m)


def random_rational_matrix(rng, n: int, max_num: int = 3, max_den: int = 12) -> rm.Matrix:
    return tuple(
        tuple(Fraction(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, max_den + 1))) for _ in range(n))
        for _ in range(n)
    )


def lcm_denominators(*mats) -> int:
    out = 1
    for m in mats:
        out = lcm(out, rm.common_denominator(m))
    return out
