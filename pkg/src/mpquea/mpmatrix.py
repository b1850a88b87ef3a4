"""Multiparameter exponent matrices, twist equivalence, and the twist/multiparameter/cocycle bijections."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import ratmat as rm
from .cartan import CartanDatum, root_pairing
from .errors import NotApproxEquivalent, NotCartanType, NotEquivalent, NotInImageDomain, RankTooLarge
from .lattice import TwistMatrix, as_twist, psi_apply_double_sum, random_antisymmetric


@dataclass(frozen=True)
class MultiparamExponent:
    """Exponent matrix R: q_ij = q^(r_ij)."""

    R: rm.Matrix
    cartan: CartanDatum | None = None

    def __post_init__(self):
        object.__setattr__(self, "R", rm.mat(self.R))

    def q_i_exponent(self, i: int) -> Fraction:
        return self.R[i][i] / 2


@dataclass(frozen=True)
class CocycleMatrix:
    """sigma(K_i, K_j) = q^(s_ij)."""

    S: rm.Matrix

    def __post_init__(self):
        object.__setattr__(self, "S", rm.mat(self.S))


@dataclass(frozen=True)
class ActionExponent:
    """nu_ij = q^(n_ij)."""

    N: rm.Matrix

    def __post_init__(self):
        object.__setattr__(self, "N", rm.mat(self.N))


@dataclass(frozen=True)
class ApproxResult:
    gamma: tuple[int, ...]
    chevalley: bool


def _R(x) -> rm.Matrix:
    if isinstance(x, MultiparamExponent):
        return x.R
    return rm.mat(x)


def theta(c: CartanDatum, psi) -> rm.Matrix:
    """DA + A^T (Psi^T - Psi) A."""
    p = as_twist(psi).psi
    A = c.A_q
    mid = rm.sub(rm.transpose(p), p)
    return rm.add(c.DA, rm.matmul(rm.transpose(A), rm.matmul(mid, A)))


def theta_direct(c: CartanDatum, psi) -> rm.Matrix:
    """Entrywise (alpha_i + psi_+(alpha_i) - psi_-(alpha_i), alpha_j), an independent route to theta."""
    n = c.rank
    out = []
    for i in range(n):
        a = rm.unit(n, i)
        v = rm.vsub(rm.vadd(a, psi_apply_double_sum(c, psi, "+", a)), psi_apply_double_sum(c, psi, "-", a))
        out.append(tuple(root_pairing(c, v, rm.unit(n, j)) for j in range(n)))
    return tuple(out)


def in_theta_image(c: CartanDatum, R) -> bool:
    R = _R(R)
    return rm.add(R, rm.transpose(R)) == rm.scale(2, c.DA)


def xi(c: CartanDatum, R) -> TwistMatrix:
    """(1/2) A^-T (DA - R) A^-1."""
    c.require_finite()
    R = _R(R)
    if not in_theta_image(c, R):
        raise NotInImageDomain("R + R^T differs from 2DA")
    Ainv = rm.inv(c.A_q)
    m = rm.matmul(rm.transpose(Ainv), rm.matmul(rm.sub(c.DA, R), Ainv))
    return TwistMatrix(rm.scale(Fraction(1, 2), m))


def sigma_from_psi(c: CartanDatum, psi) -> CocycleMatrix:
    p = as_twist(psi).psi
    A = c.A_q
    return CocycleMatrix(rm.scale(-1, rm.matmul(rm.transpose(A), rm.matmul(p, A))))


def psi_from_sigma(c: CartanDatum, S) -> TwistMatrix:
    c.require_finite()
    S = S.S if isinstance(S, CocycleMatrix) else rm.mat(S)
    Ainv = rm.inv(c.A_q)
    return TwistMatrix(rm.scale(-1, rm.matmul(rm.transpose(Ainv), rm.matmul(S, Ainv))))


def cartan_scale(c: CartanDatum, R) -> Fraction | None:
    """The common c > 0 with r_ii = c * 2 d_i, if R is of Cartan type."""
    R = _R(R)
    n = c.rank
    if rm.shape(R) != (n, n):
        return None
    scale = R[0][0] / (2 * c.D[0])
    if scale <= 0:
        return None
    for i in range(n):
        if R[i][i] != scale * 2 * c.D[i]:
            return None
        for j in range(n):
            if R[i][j] + R[j][i] != c.A[i][j] * R[i][i]:
                return None
    return scale


def is_cartan_type(c: CartanDatum, R) -> bool:
    return cartan_scale(c, R) is not None


def satisfies_qij_identity(c: CartanDatum, R) -> bool:
    """r_ij + r_ji = a_ij r_ii, without any sign condition on the diagonal."""
    R = _R(R)
    n = c.rank
    return all(R[i][j] + R[j][i] == c.A[i][j] * R[i][i] for i in range(n) for j in range(n))


def canonical_of(c: CartanDatum, R) -> rm.Matrix:
    s = cartan_scale(c, R)
    if s is None:
        raise NotCartanType("multiparameter is not of Cartan type")
    return rm.scale(s, c.DA)


@dataclass(frozen=True)
class DynkinDiagram:
    vertices: tuple[Fraction, ...]
    edges: tuple[tuple[int, int, Fraction], ...]

    def render(self) -> str:
        lines = [f"vertex {i + 1}: {rm.fmt_frac(v)}" for i, v in enumerate(self.vertices)]
        lines += [f"edge {i + 1}-{j + 1}: {rm.fmt_frac(w)}" for i, j, w in self.edges]
        return "\n".join(lines)


def dynkin_diagram(R) -> DynkinDiagram:
    R = _R(R)
    n = len(R)
    verts = tuple(R[i][i] for i in range(n))
    edges = tuple((i, j, R[i][j] + R[j][i]) for i in range(n) for j in range(i + 1, n) if R[i][j] + R[j][i] != 0)
    return DynkinDiagram(verts, edges)


def twist_equivalent(R1, R2) -> bool:
    a, b = _R(R1), _R(R2)
    if rm.shape(a) != rm.shape(b):
        return False
    n = len(a)
    return all(a[i][i] == b[i][i] for i in range(n)) and all(
        a[i][j] + a[j][i] == b[i][j] + b[j][i] for i in range(n) for j in range(n)
    )


def act_nu(N, R) -> rm.Matrix:
    """Exponent form of nu.q: N + R - N^T."""
    N = N.N if isinstance(N, ActionExponent) else rm.mat(N)
    return rm.sub(rm.add(N, _R(R)), rm.transpose(N))


def equivalence_witness(R1, R2) -> rm.Matrix:
    a, b = _R(R1), _R(R2)
    if not twist_equivalent(a, b):
        raise NotEquivalent("multiparameters are not twist equivalent")
    n = len(a)
    return tuple(tuple(b[i][j] - a[i][j] if i <= j else Fraction(0) for j in range(n)) for i in range(n))


def sqrt_witness(R1, R2) -> rm.Matrix:
    """The symmetric square-root witness (R2 - R1)/2."""
    a, b = _R(R1), _R(R2)
    if not twist_equivalent(a, b):
        raise NotEquivalent("multiparameters are not twist equivalent")
    return rm.scale(Fraction(1, 2), rm.sub(b, a))


def permute(R, gamma) -> rm.Matrix:
    """Matrix with entries r_{gamma(i) gamma(j)}."""
    R = _R(R)
    n = len(R)
    return tuple(tuple(R[gamma[i]][gamma[j]] for j in range(n)) for i in range(n))


def chevalley_permute(R, gamma) -> rm.Matrix:
    """Matrix with entries -r_{gamma(j) gamma(i)}."""
    R = _R(R)
    n = len(R)
    return tuple(tuple(-R[gamma[j]][gamma[i]] for j in range(n)) for i in range(n))


def approx_equivalent(R1, R2) -> ApproxResult | None:
    a, b = _R(R1), _R(R2)
    n = len(a)
    if n > 6:
        raise RankTooLarge("approximate equivalence search is limited to rank 6")
    if rm.shape(a) != rm.shape(b):
        return None
    for chev in (False, True):
        for g in permutations(range(n)):
            cand = chevalley_permute(a, g) if chev else permute(a, g)
            if cand == b:
                return ApproxResult(tuple(g), chev)
    return None


def require_approx(R1, R2) -> ApproxResult:
    res = approx_equivalent(R1, R2)
    if res is None:
        raise NotApproxEquivalent("no permutation relates the multiparameters")
    return res


def random_theta_image(c: CartanDatum, rng, max_num: int = 3, max_den: int = 12) -> rm.Matrix:
    """Random R with R + R^T = 2DA: DA plus a random antisymmetric matrix."""
    return rm.add(c.DA, random_antisymmetric(rng, c.rank, max_num, max_den))
