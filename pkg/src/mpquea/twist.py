"""Toral twist deformations: twisted tables, twisted generators, twist iteration."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from . import ratmat as rm
from .cartan import CartanDatum
from .errors import InputError, LatticeTooSmall, SpecMismatch
from .freealg import AlgebraElement, TensorElement, Word
from .lattice import Lattice, as_twist, lattice_sum, product_lattice, psi_matrix, q_psi, root_lattice
from .quantumalg import HopfSpec, _flavor_lattice, build_jimbo, build_jimbo_single, check_hopf_axioms

CARRIERS = ("single", "doubled", "borel_plus", "borel_minus")


def _zero(n):
    return tuple(Fraction(0) for _ in range(n))


class Carrier:
    """Where K_{gamma,+} and K_{gamma,-} live as (k, l) exponents."""

    def __init__(self, kind: str, n: int):
        if kind not in CARRIERS:
            raise InputError(f"unknown carrier {kind!r}")
        self.kind = kind
        self.n = n

    def plus(self, g) -> rm.Vector:
        z = _zero(self.n)
        if self.kind == "borel_minus":
            return z + rm.vneg(g)
        return tuple(g) + z

    def minus(self, g) -> rm.Vector:
        z = _zero(self.n)
        if self.kind in ("single", "borel_plus"):
            return tuple(g) + z
        return z + rm.vneg(g)


def hopf_subalgebra_condition(cartan: CartanDatum, psi, lattice: Lattice | None = None):
    """psi_+/-(alpha_i) in the lattice for all i; returns (ok, witness or None)."""
    L = lattice or root_lattice(cartan)
    for sign in ("+", "-"):
        m = psi_matrix(cartan, psi, sign)
        for i in range(cartan.rank):
            v = rm.matvec(m, rm.unit(cartan.rank, i))
            if v not in L:
                return False, {"map": "psi_" + sign, "index": i + 1, "image": v}
    return True, None


def _require(cartan, psi, L: Lattice) -> None:
    ok, w = hopf_subalgebra_condition(cartan, psi, L)
    if not ok:
        raise LatticeTooSmall(f"{w['map']}(alpha_{w['index']}) is not in the lattice", witness=w)


class TwistedHopfSpec(HopfSpec):
    """Same algebra as the base; coproduct and antipode replaced by the Psi-twisted tables."""

    def __init__(self, base: HopfSpec, psi, carrier: Carrier):
        self.base = base
        self.psi = as_twist(psi)
        self.carrier = carrier
        c = base.spec.cartan
        self.pp = psi_matrix(c, self.psi, "+")
        self.pm = psi_matrix(c, self.psi, "-")
        super().__init__(
            base.spec, self._tw_delta_E, self._tw_delta_F, self._tw_antipode_E, self._tw_antipode_F, label="twisted"
        )

    def _a(self, i):
        return rm.unit(self.n, i)

    def _psp(self, i):
        return rm.matvec(self.pp, self._a(i))

    def _psm(self, i):
        return rm.matvec(self.pm, self._a(i))

    def _w(self, kl) -> Word:
        return Word((), self.system.toral.canonical(kl), ())

    def _T(self, kl) -> AlgebraElement:
        return self.system.word([("T", tuple(kl))])

    def _tw_delta_E(self, i):
        C, one = self.carrier, self.system.one
        e = Word((), None, (i,))
        a = self._a(i)
        return {
            (e, self._w(C.minus(self._psm(i)))): one,
            (self._w(C.plus(rm.vadd(a, self._psp(i)))), e): one,
        }

    def _tw_delta_F(self, i):
        C, one = self.carrier, self.system.one
        f = Word((i,), None, ())
        a = self._a(i)
        return {
            (f, self._w(C.minus(rm.vneg(rm.vadd(a, self._psm(i)))))): one,
            (self._w(C.plus(rm.vneg(self._psp(i)))), f): one,
        }

    def _tw_antipode_E(self, i):
        C = self.carrier
        a = self._a(i)
        left = self._T(C.plus(rm.vneg(rm.vadd(a, self._psp(i)))))
        right = self._T(C.minus(rm.vneg(self._psm(i))))
        return -(left * self.spec.E(i) * right)

    def _tw_antipode_F(self, i):
        C = self.carrier
        a = self._a(i)
        left = self._T(C.plus(self._psp(i)))
        right = self._T(C.minus(rm.vadd(a, self._psm(i))))
        return -(left * self.spec.F(i) * right)


def build_twquea(
    cartan: CartanDatum, psi, gamma: Lattice | None = None, doubled: bool = False, flavor: str | None = None
) -> TwistedHopfSpec:
    """Twisted polynomial QUEA at R = DA over gamma (default Q^Psi).

    flavor: "single" (default), "doubled", "borel_plus" or "borel_minus".
    """
    n = cartan.rank
    psi = as_twist(psi)
    psi.require_antisymmetric()
    kind = flavor or ("doubled" if doubled else "single")
    L = gamma if gamma is not None else q_psi(cartan, psi)
    if L.dim != n:
        raise InputError("gamma must be a lattice in the root space")
    _require(cartan, psi, L)
    N = psi.root_denominator
    if kind == "single":
        base = build_jimbo_single(cartan, L, root_order=N)
    elif kind == "doubled":
        base = build_jimbo(cartan, product_lattice(L, L), "full", root_order=N)
    else:
        base = build_jimbo(cartan, _flavor_lattice(n, L, L, kind), kind, root_order=N)
    return TwistedHopfSpec(base, psi, Carrier(kind, n))


def twisted_coproduct(t: TwistedHopfSpec, x: AlgebraElement) -> TensorElement:
    return t.coproduct(x)


def twisted_antipode(t: TwistedHopfSpec, x: AlgebraElement) -> AlgebraElement:
    return t.antipode(x)


@dataclass
class TwistedGenerators:
    E: list
    F: list
    K_tau_plus: list
    K_minus_tau_minus: list


def twisted_generators(t: TwistedHopfSpec) -> TwistedGenerators:
    C, s = t.carrier, t.spec
    Es, Fs, Kp, Km = [], [], [], []
    for i in range(t.n):
        a = rm.unit(t.n, i)
        psp, psm = t._psp(i), t._psm(i)
        if s.system.has_E:
            Es.append(t._T(C.minus(rm.vneg(psm))) * s.E(i))
            Kp.append(t._T(C.plus(rm.vadd(a, psp))) * t._T(C.minus(rm.vneg(psm))))
        if s.system.has_F:
            Fs.append(t._T(C.plus(psp)) * s.F(i))
            Km.append(t._T(C.plus(psp)) * t._T(C.minus(rm.vneg(rm.vadd(a, psm)))))
    return TwistedGenerators(Es, Fs, Kp, Km)


def twisted_generator_check(t: TwistedHopfSpec) -> list:
    """Primitive-shaped coproducts of the twisted generators; returns failing labels."""
    g = twisted_generators(t)
    s = t.spec
    one = s.one()
    bad = []
    for i, e in enumerate(g.E):
        want = TensorElement.pure(e, one) + TensorElement.pure(g.K_tau_plus[i], e)
        if t.coproduct(e) != want:
            bad.append(f"E{i + 1}")
    for i, f in enumerate(g.F):
        want = TensorElement.pure(f, g.K_minus_tau_minus[i]) + TensorElement.pure(one, f)
        if t.coproduct(f) != want:
            bad.append(f"F{i + 1}")
    return bad


# iteration


def root_degree(w: Word, n: int) -> rm.Vector:
    v = [Fraction(0)] * n
    for i in w.e:
        v[i] += 1
    for i in w.f:
        v[i] -= 1
    return tuple(v)


def conjugate_tensor(t: HopfSpec, carrier: Carrier, psi2, terms: dict) -> dict:
    """Action of the Psi'-twist on a tensor: x (x) y -> q^(b^T A^T Psi' A d) x K_{psi'_+ d} (x) y K_{psi'_- b}."""
    c = t.spec.cartan
    n = c.rank
    psi2 = as_twist(psi2)
    pp, pm = psi_matrix(c, psi2, "+"), psi_matrix(c, psi2, "-")
    form = rm.matmul(rm.matmul(rm.transpose(c.A), psi2.psi), c.A)
    s = t.system
    ctx = s.ctx
    out: dict = {}
    for (x, y), v in terms.items():
        b, d = root_degree(x, n), root_degree(y, n)
        coef = v * ctx.q_power(rm.bilinear(b, form, d))
        xs = s.mul_words(x, s.toral_word(carrier.plus(rm.matvec(pp, d))))
        ys = s.mul_words(y, s.toral_word(carrier.minus(rm.matvec(pm, b))))
        for wx, cx in xs.items():
            for wy, cy in ys.items():
                out[(wx, wy)] = out.get((wx, wy), 0) + coef * cx * cy
    return {k: x for k, x in out.items() if x}


def conjugate_antipode(t: HopfSpec, carrier: Carrier, psi2, terms: dict) -> dict:
    """x -> q^(-b^T A^T Psi' A b) x K_{-psi'_+ b} K_{-psi'_- b} on homogeneous words."""
    c = t.spec.cartan
    n = c.rank
    psi2 = as_twist(psi2)
    pp, pm = psi_matrix(c, psi2, "+"), psi_matrix(c, psi2, "-")
    form = rm.matmul(rm.matmul(rm.transpose(c.A), psi2.psi), c.A)
    s = t.system
    out: dict = {}
    for x, v in terms.items():
        b = root_degree(x, n)
        coef = v * s.ctx.q_power(-rm.bilinear(b, form, b))
        k = rm.vadd(carrier.plus(rm.vneg(rm.matvec(pp, b))), carrier.minus(rm.vneg(rm.matvec(pm, b))))
        for w, cw in s.mul_words(x, s.toral_word(k)).items():
            out[w] = out.get(w, 0) + coef * cw
    return {k: x for k, x in out.items() if x}


@dataclass
class IterationReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.failures


def iterate_twist_check(
    cartan: CartanDatum, psi, psi2, gamma: Lattice | None = None, flavor: str = "single", degree_bound: int = 2
) -> IterationReport:
    """Psi'-transform of the Psi-twisted tables equals the (Psi+Psi')-twisted tables.

    Compared on all basis words of degree <= degree_bound (generators are degree 1).
    """
    psi, psi2 = as_twist(psi), as_twist(psi2)
    tot = psi + psi2
    if gamma is None:
        gamma = lattice_sum(q_psi(cartan, psi), q_psi(cartan, psi2), q_psi(cartan, tot))
    for p in (psi, psi2, tot):
        _require(cartan, p, gamma)
    t1 = build_twquea(cartan, psi, gamma, flavor=flavor)
    N = lcm(psi.root_denominator, psi2.root_denominator, tot.root_denominator)
    if t1.spec.N % N:
        t1 = _rebuild(cartan, psi, gamma, flavor, N)
    t2 = TwistedHopfSpec(t1.base, tot, t1.carrier)
    rep = IterationReport()
    for w in t1.system.basis_words(degree_bound):
        rep.checked += 1
        lhs = conjugate_tensor(t1, t1.carrier, psi2, t1.delta_word(w))
        if lhs != t2.delta_word(w):
            rep.failures.append(("coproduct", w))
        lhs = conjugate_antipode(t1, t1.carrier, psi2, t1.antipode_word(w))
        if lhs != t2.antipode_word(w):
            rep.failures.append(("antipode", w))
    return rep


def _rebuild(cartan, psi, gamma, flavor, N):
    n = cartan.rank
    if flavor == "single":
        base = build_jimbo_single(cartan, gamma, root_order=N)
    elif flavor == "doubled":
        base = build_jimbo(cartan, product_lattice(gamma, gamma), "full", root_order=N)
    else:
        base = build_jimbo(cartan, _flavor_lattice(n, gamma, gamma, flavor), flavor, root_order=N)
    return TwistedHopfSpec(base, psi, Carrier(flavor, n))


def twisted_hopf_check(t: TwistedHopfSpec, degree_bound: int = 4):
    """Hopf axioms and relation compatibility of the twisted structure."""
    if not isinstance(t, TwistedHopfSpec):
        raise SpecMismatch("expected a twisted Hopf spec")
    return check_hopf_axioms(t, degree_bound)
