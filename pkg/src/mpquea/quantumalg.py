"""Presented quantum algebras: MpQUEAs, Borel parts, larger tori, quotients, Hopf data, cocycles, pairings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Callable, Sequence

from . import ratmat as rm
from .cartan import CartanDatum
from .errors import (
    FlavorMismatch,
    InputError,
    LatticeMissing,
    NotCartanType,
    PsiNotStable,
    SpecMismatch,
)
from .freealg import (
    ONE_WORD,
    AlgebraElement,
    RewriteSystem,
    SerreRule,
    TensorElement,
    ToralGroup,
    Word,
    E,
    F,
    T,
)
from .lattice import Lattice, as_twist, product_lattice, psi_matrix, root_lattice
from .mpmatrix import cartan_scale, satisfies_qij_identity, theta
from .qscalar import FieldScalar, ScalarContext, context, q_paren_binomial

FLAVORS = ("full", "borel_plus", "borel_minus", "quotient_g")
CONVENTIONS = ("mp", "jimbo")
F_SERRE_VARIANTS = ("paper", "qji", "reversed", "reversed_qji")
# Serre blocks are completed up to this degree; B2 needs a degree-5 consequence rule.
COMPLETION_BOUND = 6


def _zero(n: int) -> rm.Vector:
    return tuple(Fraction(0) for _ in range(n))


@dataclass
class AlgebraSpec:
    cartan: CartanDatum
    R: rm.Matrix
    lattice: Lattice
    flavor: str
    convention: str
    system: RewriteSystem
    quotient_data: tuple = ()
    lattice_plus: Lattice | None = None
    lattice_minus: Lattice | None = None
    f_serre: str = "qji"

    @property
    def n(self) -> int:
        return self.cartan.rank

    @property
    def ctx(self) -> ScalarContext:
        return self.system.ctx

    @property
    def N(self) -> int:
        return self.system.ctx.N

    # generator elements
    def one(self) -> AlgebraElement:
        return self.system.scalar(1)

    def E(self, i: int) -> AlgebraElement:
        return self.system.word([E(i)])

    def F(self, i: int) -> AlgebraElement:
        return self.system.word([F(i)])

    def T(self, k=None, l=None) -> AlgebraElement:
        n = self.n
        k = _zero(n) if k is None else rm.vec(k)
        l = _zero(n) if l is None else rm.vec(l)
        return self.system.word([T(k + l)])

    def K(self, v) -> AlgebraElement:
        return self.T(k=v)

    def L(self, v) -> AlgebraElement:
        return self.T(l=v)

    def scalar(self, c) -> AlgebraElement:
        return self.system.scalar(c)

    def q(self, r) -> FieldScalar:
        return self.ctx.q_power(r)

    def q_i(self, i: int) -> FieldScalar:
        return self.ctx.q_power(self.R[i][i] / 2)

    def alpha(self, i: int) -> rm.Vector:
        return rm.unit(self.n, i)

    def toral_generators(self) -> list:
        return self.system.toral.generators()

    def summary(self) -> dict:
        n = self.n
        gens = []
        if self.system.has_E:
            gens.append("E")
        if self.system.has_F:
            gens.append("F")
        gens.append("T")
        return {
            "flavor": self.flavor,
            "convention": self.convention,
            "rank": n,
            "root_order": self.N,
            "R": rm.to_json(self.R),
            "generator_families": gens,
            "serre_rules": len(self.system.serre_E) + len(self.system.serre_F),
            "toral_lattice_basis": rm.to_json(self.lattice.basis),
            "quotient_generators": [rm.to_json([h])[0] for h in self.quotient_data],
        }


def _serre_rules(n, A, R, ctx, kind: str, variant: str = "paper") -> list[SerreRule]:
    rules = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            m = 1 - A[i][j]
            qii = ctx.q_power(R[i][i])
            use_ji = kind == "F" and variant in ("qji", "reversed_qji")
            qij = ctx.q_power(R[j][i] if use_ji else R[i][j])
            reverse = kind == "F" and variant in ("reversed", "reversed_qji")
            rel = []
            for k in range(m + 1):
                c = q_paren_binomial(m, k, qii) * qii ** comb(k, 2) * qij**k
                if k % 2:
                    c = -c
                w = (i,) * k + (j,) + (i,) * (m - k) if reverse else (i,) * (m - k) + (j,) + (i,) * k
                rel.append((c, w))
            key = (lambda w: w) if kind == "E" else (lambda w: tuple(-x for x in w))
            lead_c, lead_w = max(rel, key=lambda cw: key(cw[1]))
            rhs = [(-c / lead_c, w) for c, w in rel if w != lead_w]
            rules.append(SerreRule(lead_w, rhs, rel, (i, j)))
    return rules


def required_root_order(R: rm.Matrix, lattice: Lattice, commute, extra=()) -> int:
    N = rm.common_denominator(R)
    N = lcm(N, rm.common_denominator([[x / 2 for x in r] for r in R]))
    for b in lattice.basis:
        for c in commute:
            N = lcm(N, rm.dot(b, c).denominator)
    for x in extra:
        N = lcm(N, Fraction(x).denominator)
    return N


def _commute_vectors(R: rm.Matrix, n: int) -> list[rm.Vector]:
    """t = (k, l): T E_j T^-1 = q^(k^T R e_j - l^T R^T e_j) E_j."""
    out = []
    for j in range(n):
        col = tuple(R[i][j] for i in range(n))
        row = tuple(-R[j][i] for i in range(n))
        out.append(col + row)
    return out


def build_algebra(
    cartan: CartanDatum,
    R,
    toral_lattice: Lattice,
    flavor: str = "full",
    convention: str = "mp",
    quotient: Sequence | None = None,
    root_order: int = 1,
    f_serre: str = "qji",
    cartan_check: str = "cartan",
    lattice_plus: Lattice | None = None,
    lattice_minus: Lattice | None = None,
    pairing_forms: Sequence = (),
    label: str = "",
    completion_bound: int = COMPLETION_BOUND,
) -> AlgebraSpec:
    """General builder over an arbitrary toral lattice in the doubled space."""
    n = cartan.rank
    R = rm.mat(R)
    if flavor not in FLAVORS:
        raise InputError(f"unknown flavor {flavor!r}")
    if convention not in CONVENTIONS:
        raise InputError(f"unknown convention {convention!r}")
    if f_serre not in F_SERRE_VARIANTS:
        raise InputError(f"unknown F-Serre variant {f_serre!r}")
    if cartan_check == "cartan" and cartan_scale(cartan, R) is None:
        raise NotCartanType("multiparameter is not of Cartan type")
    if cartan_check == "identity" and not satisfies_qij_identity(cartan, R):
        raise NotCartanType("multiparameter violates q_ij q_ji = q_ii^a_ij")
    has_E = flavor != "borel_minus"
    has_F = flavor != "borel_plus"
    z = _zero(n)
    for i in range(n):
        a = rm.unit(n, i)
        if has_E and (a + z) not in toral_lattice:
            raise LatticeMissing(f"toral lattice misses K_alpha_{i + 1}")
        if has_F and (z + a) not in toral_lattice:
            raise LatticeMissing(f"toral lattice misses L_alpha_{i + 1}")
    commute = _commute_vectors(R, n)
    extra = [x for form in pairing_forms for x in form]
    N = lcm(root_order, required_root_order(R, toral_lattice, commute, extra))
    if convention == "jimbo":
        N = lcm(N, 1)
    ctx = context(N)
    toral = ToralGroup(n, toral_lattice, quotient)
    for h in toral.quotient:
        for j in range(n):
            if rm.dot(h, commute[j]) != 0:
                raise InputError("quotient subgroup does not act trivially; the quotient is not an algebra quotient")
    e_coeff = None
    if has_E and has_F:
        e_coeff = []
        for i in range(n):
            if convention == "mp":
                qii = ctx.q_power(R[i][i])
                e_coeff.append(qii / (qii - 1))
            else:
                d = cartan.D[i]
                e_coeff.append((ctx.q_power(d) - ctx.q_power(-d)).inv())
    serre_E = _serre_rules(n, cartan.A, R, ctx, "E") if has_E else []
    serre_F = _serre_rules(n, cartan.A, R, ctx, "F", f_serre) if has_F else []
    system = RewriteSystem(n, ctx, toral, commute, e_coeff, serre_E, serre_F, has_E, has_F, label=label or flavor)
    if completion_bound:
        system.complete_blocks(completion_bound)
    return AlgebraSpec(
        cartan, R, toral_lattice, flavor, convention, system, toral.quotient, lattice_plus, lattice_minus, f_serre
    )


def _flavor_lattice(n: int, gp: Lattice, gm: Lattice, flavor: str) -> Lattice:
    if flavor in ("full", "quotient_g"):
        return product_lattice(gp, gm)
    z = _zero(n)
    if flavor == "borel_plus":
        return Lattice.from_generators([tuple(b) + z for b in gp.basis], 2 * n)
    return Lattice.from_generators([z + tuple(b) for b in gm.basis], 2 * n)


def _check_contains_Q(c: CartanDatum, L: Lattice, name: str) -> None:
    if not L.contains_lattice(root_lattice(c)):
        raise LatticeMissing(f"lattice {name} does not contain the root lattice")


def build_mpquea(
    cartan: CartanDatum,
    R,
    gamma_plus: Lattice | None = None,
    gamma_minus: Lattice | None = None,
    flavor: str = "full",
    root_order: int = 1,
    f_serre: str = "qji",
    cartan_check: str = "cartan",
) -> "HopfSpec":
    n = cartan.rank
    gp = gamma_plus or root_lattice(cartan)
    gm = gamma_minus or root_lattice(cartan)
    _check_contains_Q(cartan, gp, "Gamma_+")
    _check_contains_Q(cartan, gm, "Gamma_-")
    R = rm.mat(R)
    form = [rm.bilinear(a, R, b) for a in gp.basis for b in gm.basis]
    spec = build_algebra(
        cartan,
        R,
        _flavor_lattice(n, gp, gm, flavor if flavor != "quotient_g" else "full"),
        flavor,
        "mp",
        None,
        root_order,
        f_serre,
        cartan_check,
        gp,
        gm,
        [form],
    )
    return HopfSpec(spec)


def build_jimbo(
    cartan: CartanDatum,
    toral_lattice: Lattice | None = None,
    flavor: str = "full",
    quotient: Sequence | None = None,
    root_order: int = 1,
) -> "HopfSpec":
    """Canonical algebra: R = DA, relation (e) with 1/(q_i - q_i^-1).

    Doubled letters K_{gamma,+} = T(gamma, 0) and K_{gamma,-} = T(0, -gamma).
    """
    n = cartan.rank
    if toral_lattice is None:
        Q = root_lattice(cartan)
        toral_lattice = _flavor_lattice(n, Q, Q, flavor if flavor != "quotient_g" else "full")
    spec = build_algebra(cartan, cartan.DA, toral_lattice, flavor, "jimbo", quotient, root_order)
    return HopfSpec(spec)


def single_copy_quotient(n: int, M: Lattice) -> list[rm.Vector]:
    """Generators (mu, mu) identifying L_mu with K_mu^-1."""
    return [tuple(b) + tuple(b) for b in M.basis]


def build_jimbo_single(cartan: CartanDatum, M: Lattice | None = None, root_order: int = 1) -> "HopfSpec":
    """One-copy canonical algebra over M: the doubled one modulo L_mu = K_mu^-1."""
    n = cartan.rank
    M = M or root_lattice(cartan)
    _check_contains_Q(cartan, M, "M")
    lat = product_lattice(M, M)
    spec = build_algebra(cartan, cartan.DA, lat, "quotient_g", "jimbo", single_copy_quotient(n, M), root_order)
    return HopfSpec(spec)


def quotient_generators_g(cartan: CartanDatum, psi, M: Lattice) -> list[rm.Vector]:
    """mu_i^+ + mu_i^- - 2 psi_+(mu_i^+) - 2 psi_-(mu_i^-) for a basis of M."""
    pp = psi_matrix(cartan, psi, "+")
    pm = psi_matrix(cartan, psi, "-")
    out = []
    for mu in M.basis:
        out.append(rm.vsub(mu, rm.scale(2, ((rm.matvec(pp, mu)),))[0]) + rm.vsub(mu, rm.scale(2, ((rm.matvec(pm, mu)),))[0]))
    return out


def check_psi_stable(cartan: CartanDatum, psi, M: Lattice) -> None:
    pp = psi_matrix(cartan, psi, "+")
    for mu in M.basis:
        img = rm.matvec(pp, mu)
        if img not in M:
            raise PsiNotStable("psi_+ maps a basis vector of M outside M", witness=img)


def quotient_to_g(cartan: CartanDatum, psi, M: Lattice | None = None, root_order: int = 1) -> "HopfSpec":
    """MpQUEA over M x M at R = theta(Psi), modulo K_mu+ L_mu- = K_2psi+(mu) L_2psi-(mu)."""
    psi = as_twist(psi)
    M = M or root_lattice(cartan)
    _check_contains_Q(cartan, M, "M")
    check_psi_stable(cartan, psi, M)
    R = theta(cartan, psi)
    H = quotient_generators_g(cartan, psi, M)
    spec = build_algebra(
        cartan, R, product_lattice(M, M), "quotient_g", "mp", H, root_order, lattice_plus=M, lattice_minus=M
    )
    return HopfSpec(spec)


# Hopf structure

GenTable = Callable[[int], dict]


class HopfSpec:
    """Generator-level coproduct, counit and antipode, extended (anti)multiplicatively."""

    def __init__(
        self,
        spec: AlgebraSpec,
        delta_E: GenTable | None = None,
        delta_F: GenTable | None = None,
        antipode_E: Callable[[int], AlgebraElement] | None = None,
        antipode_F: Callable[[int], AlgebraElement] | None = None,
        label: str = "standard",
    ):
        self.spec = spec
        self.system = spec.system
        self.label = label
        self._dE = delta_E or self._std_delta_E
        self._dF = delta_F or self._std_delta_F
        self._sE = antipode_E or self._std_antipode_E
        self._sF = antipode_F or self._std_antipode_F
        self._delta_letter: dict = {}
        self._anti_letter: dict = {}
        self._delta_word: dict = {}
        self._anti_word: dict = {}

    @property
    def n(self) -> int:
        return self.spec.n

    def _tw(self, k=None, l=None) -> Word:
        n = self.n
        k = _zero(n) if k is None else rm.vec(k)
        l = _zero(n) if l is None else rm.vec(l)
        return Word((), self.system.toral.canonical(k + l), ())

    # standard tables
    def _std_delta_E(self, i: int) -> dict:
        one = self.system.one
        a = rm.unit(self.n, i)
        e = Word((), None, (i,))
        return {(e, ONE_WORD): one, (self._tw(k=a), e): one}

    def _std_delta_F(self, i: int) -> dict:
        one = self.system.one
        a = rm.unit(self.n, i)
        f = Word((i,), None, ())
        return {(f, self._tw(l=a)): one, (ONE_WORD, f): one}

    def _std_antipode_E(self, i: int) -> AlgebraElement:
        a = rm.unit(self.n, i)
        return -(self.spec.K(rm.vneg(a)) * self.spec.E(i))

    def _std_antipode_F(self, i: int) -> AlgebraElement:
        a = rm.unit(self.n, i)
        return -(self.spec.F(i) * self.spec.L(rm.vneg(a)))

    # letters
    def delta_letter(self, letter) -> dict:
        hit = self._delta_letter.get(letter)
        if hit is not None:
            return hit
        kind = letter[0]
        if kind == "T":
            w = Word((), self.system.toral.canonical(letter[1]), ())
            res = {(w, w): self.system.one}
        elif kind == "E":
            self.system.canonical_letter(letter)
            res = {k: v for k, v in self._dE(letter[1]).items() if v}
        else:
            self.system.canonical_letter(letter)
            res = {k: v for k, v in self._dF(letter[1]).items() if v}
        self._delta_letter[letter] = res
        return res

    def antipode_letter(self, letter) -> dict:
        hit = self._anti_letter.get(letter)
        if hit is not None:
            return hit
        kind = letter[0]
        if kind == "T":
            c = self.system.toral.canonical(rm.vneg(letter[1]))
            res = {Word((), c, ()): self.system.one}
        elif kind == "E":
            self.system.canonical_letter(letter)
            res = dict(self._sE(letter[1]).terms)
        else:
            self.system.canonical_letter(letter)
            res = dict(self._sF(letter[1]).terms)
        self._anti_letter[letter] = res
        return res

    # tensor products of dicts over this system
    def tmul(self, a: dict, b: dict) -> dict:
        s = self.system
        out: dict = {}
        for (a1, a2), ca in a.items():
            for (b1, b2), cb in b.items():
                p1 = s.mul_words(a1, b1)
                p2 = s.mul_words(a2, b2)
                c = ca * cb
                for w1, c1 in p1.items():
                    cc = c * c1
                    for w2, c2 in p2.items():
                        key = (w1, w2)
                        out[key] = out.get(key, 0) + cc * c2
        return {k: v for k, v in out.items() if v}

    @staticmethod
    def _prefix(w: Word):
        if w.e:
            return Word(w.f, w.t, w.e[:-1]), ("E", w.e[-1])
        if w.t is not None:
            return Word(w.f, None, ()), ("T", w.t)
        return Word(w.f[:-1], None, ()), ("F", w.f[-1])

    def delta_word(self, w: Word) -> dict:
        if w == ONE_WORD:
            return {(ONE_WORD, ONE_WORD): self.system.one}
        hit = self._delta_word.get(w)
        if hit is not None:
            return hit
        pre, letter = self._prefix(w)
        res = self.tmul(self.delta_word(pre), self.delta_letter(letter))
        self._delta_word[w] = res
        return res

    def antipode_word(self, w: Word) -> dict:
        if w == ONE_WORD:
            return {ONE_WORD: self.system.one}
        hit = self._anti_word.get(w)
        if hit is not None:
            return hit
        pre, letter = self._prefix(w)
        res = self.system.mul_dicts(self.antipode_letter(letter), self.antipode_word(pre))
        self._anti_word[w] = res
        return res

    def counit_word(self, w: Word) -> FieldScalar:
        return self.system.one if w.is_toral else self.system.ctx.zero

    # public element-level operations
    def _own(self, x: AlgebraElement) -> None:
        if x.system is not self.system:
            raise SpecMismatch("element does not belong to this Hopf algebra")

    def coproduct(self, x: AlgebraElement) -> TensorElement:
        self._own(x)
        out: dict = {}
        for w, c in x.terms.items():
            for k, v in self.delta_word(w).items():
                out[k] = out.get(k, 0) + c * v
        return TensorElement((self.system, self.system), out)

    def counit(self, x: AlgebraElement) -> FieldScalar:
        self._own(x)
        out = self.system.ctx.zero
        for w, c in x.terms.items():
            if w.is_toral:
                out = out + c
        return out

    def antipode(self, x: AlgebraElement) -> AlgebraElement:
        self._own(x)
        out: dict = {}
        for w, c in x.terms.items():
            for k, v in self.antipode_word(w).items():
                out[k] = out.get(k, 0) + c * v
        return AlgebraElement(self.system, out)

    def iterated_coproduct(self, x: AlgebraElement, k: int) -> TensorElement:
        """Degree k+1 tensor, expanding the leftmost slot each time."""
        self._own(x)
        cur = {(w,): c for w, c in x.terms.items()}
        for _ in range(k):
            nxt: dict = {}
            for ks, c in cur.items():
                for (a, b), v in self.delta_word(ks[0]).items():
                    key = (a, b) + ks[1:]
                    nxt[key] = nxt.get(key, 0) + c * v
            cur = {kk: v for kk, v in nxt.items() if v}
        return TensorElement((self.system,) * (k + 1), cur)

    def iterated_coproduct_right(self, x: AlgebraElement, k: int) -> TensorElement:
        """Same as iterated_coproduct but expanding the rightmost slot."""
        self._own(x)
        cur = {(w,): c for w, c in x.terms.items()}
        for _ in range(k):
            nxt: dict = {}
            for ks, c in cur.items():
                for (a, b), v in self.delta_word(ks[-1]).items():
                    key = ks[:-1] + (a, b)
                    nxt[key] = nxt.get(key, 0) + c * v
            cur = {kk: v for kk, v in nxt.items() if v}
        return TensorElement((self.system,) * (k + 1), cur)

    # raw letter sequences (used for relation compatibility)
    def coproduct_letters(self, letters) -> dict:
        cur = {(ONE_WORD, ONE_WORD): self.system.one}
        for letter in letters:
            cur = self.tmul(cur, self.delta_letter(letter))
        return cur

    def antipode_letters(self, letters) -> dict:
        cur = {ONE_WORD: self.system.one}
        for letter in letters:
            cur = self.system.mul_dicts(self.antipode_letter(letter), cur)
        return cur

    def counit_letters(self, letters) -> FieldScalar:
        return self.system.ctx.zero if any(l[0] != "T" for l in letters) else self.system.one

    def generator_letters(self) -> list:
        out = []
        s = self.system
        if s.has_E:
            out += [E(i) for i in range(self.n)]
        if s.has_F:
            out += [F(i) for i in range(self.n)]
        out += [("T", t) for t in s.toral.generators()]
        return out


# Hopf axiom audit


@dataclass
class HopfReport:
    words_checked: int = 0
    relations_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.failures


def check_hopf_axioms(h: HopfSpec, degree_bound: int, torals: Sequence | None = None, words=None) -> HopfReport:
    s = h.system
    rep = HopfReport()
    one = s.one
    basis = words if words is not None else s.basis_words(degree_bound, torals)
    for w in basis:
        rep.words_checked += 1
        d = h.delta_word(w)
        # coassociativity
        left: dict = {}
        right: dict = {}
        for (a, b), c in d.items():
            for (a1, a2), ca in h.delta_word(a).items():
                k = (a1, a2, b)
                left[k] = left.get(k, 0) + c * ca
            for (b1, b2), cb in h.delta_word(b).items():
                k = (a, b1, b2)
                right[k] = right.get(k, 0) + c * cb
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        if left != right:
            rep.failures.append(("coassociativity", w))
        # counit
        l1: dict = {}
        r1: dict = {}
        for (a, b), c in d.items():
            if a.is_toral:
                l1[b] = l1.get(b, 0) + c
            if b.is_toral:
                r1[a] = r1.get(a, 0) + c
        target = {w: one}
        if {k: v for k, v in l1.items() if v} != target or {k: v for k, v in r1.items() if v} != target:
            rep.failures.append(("counit", w))
        # antipode
        eps = {ONE_WORD: one} if w.is_toral else {}
        m1: dict = {}
        m2: dict = {}
        for (a, b), c in d.items():
            for k, v in s.mul_dicts(h.antipode_word(a), {b: c}).items():
                m1[k] = m1.get(k, 0) + v
            for k, v in s.mul_dicts({a: c}, h.antipode_word(b)).items():
                m2[k] = m2.get(k, 0) + v
        if {k: v for k, v in m1.items() if v} != eps or {k: v for k, v in m2.items() if v} != eps:
            rep.failures.append(("antipode", w))
    for name, raw in s.relations(torals):
        rep.relations_checked += 1
        dsum: dict = {}
        ssum: dict = {}
        esum = s.ctx.zero
        for c, letters in raw:
            for k, v in h.coproduct_letters(letters).items():
                dsum[k] = dsum.get(k, 0) + c * v
            for k, v in h.antipode_letters(letters).items():
                ssum[k] = ssum.get(k, 0) + c * v
            esum = esum + c * h.counit_letters(letters)
        if any(v for v in dsum.values()):
            rep.failures.append(("coproduct kills " + name, None))
        if any(v for v in ssum.values()):
            rep.failures.append(("antipode kills " + name, None))
        if esum:
            rep.failures.append(("counit kills " + name, None))
    return rep


def check_bialgebra_law(h: HopfSpec, words: Sequence[Word]) -> list:
    """Delta(x y) = Delta(x) Delta(y) on all pairs from `words`."""
    s = h.system
    bad = []
    for u in words:
        for v in words:
            prod = s.mul_words(u, v)
            lhs: dict = {}
            for w, c in prod.items():
                for k, x in h.delta_word(w).items():
                    lhs[k] = lhs.get(k, 0) + c * x
            lhs = {k: x for k, x in lhs.items() if x}
            if lhs != h.tmul(h.delta_word(u), h.delta_word(v)):
                bad.append((u, v))
    return bad


# projection and toral cocycles


def project_p(spec: AlgebraSpec, x: AlgebraElement) -> dict:
    """Image in the group algebra of G: {gamma (tuple): coefficient}."""
    n = spec.n
    out: dict = {}
    for w, c in x.terms.items():
        if not w.is_toral:
            continue
        g = _zero(n) if w.t is None else rm.vadd(w.t[:n], w.t[n:])
        out[g] = out.get(g, 0) + c
    return {k: v for k, v in out.items() if v}


def _p_word(w: Word, n: int):
    if not w.is_toral:
        return None
    if w.t is None:
        return _zero(n)
    return rm.vadd(w.t[:n], w.t[n:])


class ToralCocycle:
    """sigma = chi o (p x p) with chi(G_gamma, G_delta) = q^(gamma^T S delta)."""

    def __init__(self, h: HopfSpec, S, table: Callable | None = None):
        self.h = h
        self.spec = h.spec
        self.S = rm.mat(S.S if hasattr(S, "S") else S)
        self.n = h.n
        self._chi = table

    def chi_exponent(self, g, d) -> Fraction:
        if self._chi is not None:
            return self._chi(g, d)
        return rm.bilinear(g, self.S, d)

    def _ctx(self):
        N = lcm(self.spec.N, rm.common_denominator(self.S))
        for b in self.spec.lattice.basis:
            for b2 in self.spec.lattice.basis:
                N = lcm(N, self.chi_exponent(rm.vadd(b[: self.n], b[self.n :]), rm.vadd(b2[: self.n], b2[self.n :])).denominator)
        return context(N)

    def word_value(self, u: Word, v: Word, inverse: bool = False) -> FieldScalar | None:
        g, d = _p_word(u, self.n), _p_word(v, self.n)
        if g is None or d is None:
            return None
        r = self.chi_exponent(g, d)
        return self._ctx().q_power(-r if inverse else r)

    def eval(self, x: AlgebraElement, y: AlgebraElement, inverse: bool = False) -> FieldScalar:
        out = self._ctx().zero
        for u, cu in x.terms.items():
            for v, cv in y.terms.items():
                val = self.word_value(u, v, inverse)
                if val is not None:
                    out = out + cu * cv * val
        return out


def cocycle_eval(sigma: ToralCocycle, x, y) -> FieldScalar:
    return sigma.eval(x, y)


def cocycle_inverse_eval(sigma: ToralCocycle, x, y) -> FieldScalar:
    return sigma.eval(x, y, inverse=True)


def _delta2(h: HopfSpec, w: Word) -> dict:
    out: dict = {}
    for (a, b), c in h.delta_word(w).items():
        for (a1, a2), ca in h.delta_word(a).items():
            k = (a1, a2, b)
            out[k] = out.get(k, 0) + c * ca
    return {k: v for k, v in out.items() if v}


def _deltak(h: HopfSpec, w: Word, k: int) -> dict:
    cur = {(w,): h.system.one}
    for _ in range(k):
        nxt: dict = {}
        for ks, c in cur.items():
            for (a, b), v in h.delta_word(ks[0]).items():
                key = (a, b) + ks[1:]
                nxt[key] = nxt.get(key, 0) + c * v
        cur = {kk: v for kk, v in nxt.items() if v}
    return cur


def deformed_product_words(sigma: ToralCocycle, u: Word, v: Word) -> dict:
    h = sigma.h
    s = h.system
    out: dict = {}
    du = [(k, c) for k, c in _delta2(h, u).items() if k[0].is_toral and k[2].is_toral]
    dv = [(k, c) for k, c in _delta2(h, v).items() if k[0].is_toral and k[2].is_toral]
    for (a1, a2, a3), ca in du:
        for (b1, b2, b3), cb in dv:
            c = ca * cb * sigma.word_value(a1, b1) * sigma.word_value(a3, b3, inverse=True)
            for w, cw in s.mul_words(a2, b2).items():
                out[w] = out.get(w, 0) + c * cw
    return {k: x for k, x in out.items() if x}


def deformed_product(sigma: ToralCocycle, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    out: dict = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            for w, cw in deformed_product_words(sigma, u, v).items():
                out[w] = out.get(w, 0) + cu * cv * cw
    return AlgebraElement(sigma.h.system, out)


def deformed_letters(sigma: ToralCocycle, letters) -> AlgebraElement:
    """Iterated sigma-product of a sequence of generator letters."""
    s = sigma.h.system
    cur = s.scalar(1)
    for letter in letters:
        cur = deformed_product(sigma, cur, s.word([letter]))
    return cur


def deformed_antipode(sigma: ToralCocycle, a: AlgebraElement) -> AlgebraElement:
    h = sigma.h
    s = h.system
    out: dict = {}
    for w, c in a.terms.items():
        for (a1, a2, a3, a4, a5), v in _deltak(h, w, 4).items():
            if not (a1.is_toral and a5.is_toral):
                continue
            s2 = h.antipode_word(a2)
            s4 = h.antipode_word(a4)
            left = sum((cc * sigma.word_value(a1, x) for x, cc in s2.items() if x.is_toral), s.ctx.zero)
            if not left:
                continue
            right = sum((cc * sigma.word_value(x, a5, inverse=True) for x, cc in s4.items() if x.is_toral), s.ctx.zero)
            if not right:
                continue
            for ww, cw in h.antipode_word(a3).items():
                out[ww] = out.get(ww, 0) + c * v * left * right * cw
    return AlgebraElement(s, out)


@dataclass
class CocycleReport:
    triples_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.failures


def cocycle_identity_check(sigma: ToralCocycle, degree_bound: int, words=None, rng=None, samples: int = 0) -> CocycleReport:
    """sigma(b1,c1) sigma(a,b2c2) = sigma(a1,b1) sigma(a2b2,c) on triples of basis words.

    Exhaustive over triples with total degree <= degree_bound, plus `samples` random
    triples whose individual degrees are <= degree_bound.
    """
    h = sigma.h
    s = h.system
    basis = words if words is not None else s.basis_words(degree_bound)
    rep = CocycleReport()
    triples = [(a, b, c) for a in basis for b in basis for c in basis if a.degree + b.degree + c.degree <= degree_bound]
    if rng is not None and samples:
        for _ in range(samples):
            idx = rng.integers(0, len(basis), size=3)
            triples.append(tuple(basis[int(i)] for i in idx))
    for a, b, c in triples:
        rep.triples_checked += 1
        lhs = s.ctx.zero
        for (b1, b2), cb in h.delta_word(b).items():
            for (c1, c2), cc in h.delta_word(c).items():
                v1 = sigma.word_value(b1, c1)
                if v1 is None:
                    continue
                for w, cw in s.mul_words(b2, c2).items():
                    v2 = sigma.word_value(a, w)
                    if v2 is not None:
                        lhs = lhs + cb * cc * v1 * cw * v2
        rhs = s.ctx.zero
        for (a1, a2), ca in h.delta_word(a).items():
            for (b1, b2), cb in h.delta_word(b).items():
                v1 = sigma.word_value(a1, b1)
                if v1 is None:
                    continue
                for w, cw in s.mul_words(a2, b2).items():
                    v2 = sigma.word_value(w, c)
                    if v2 is not None:
                        rhs = rhs + ca * cb * v1 * cw * v2
        if lhs != rhs:
            rep.failures.append((a, b, c))
    return rep


# pairings


class PairingContext:
    """Skew-Hopf pairing between a positive and a negative Borel part."""

    def __init__(self, positive: HopfSpec, negative: HopfSpec, B: rm.Matrix, eta_EF: Sequence[FieldScalar], name: str):
        if positive.spec.flavor != "borel_plus" or negative.spec.flavor != "borel_minus":
            raise FlavorMismatch("pairing needs a borel_plus and a borel_minus algebra")
        self.positive = positive
        self.negative = negative
        self.B = rm.mat(B)
        self.eta_EF = list(eta_EF)
        self.name = name
        self.n = positive.n
        N = lcm(positive.spec.N, negative.spec.N)
        for a in positive.spec.lattice.basis:
            for b in negative.spec.lattice.basis:
                N = lcm(N, rm.bilinear(a[: self.n], self.B, b[self.n :]).denominator)
        self.ctx = context(N)
        self._memo: dict = {}
        self.short_circuit = True

    def toral_value(self, k, l) -> FieldScalar:
        return self.ctx.q_power(rm.bilinear(k, self.B, l))

    def _kpart(self, w: Word):
        return _zero(self.n) if w.t is None else w.t[: self.n]

    def _lpart(self, w: Word):
        return _zero(self.n) if w.t is None else w.t[self.n :]

    def eval_words(self, x: Word, y: Word) -> FieldScalar:
        key = (x, y, self.short_circuit)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        ctx = self.ctx
        if y == ONE_WORD:
            res = ctx.one if x.is_toral else ctx.zero
        elif self.short_circuit and sorted(x.e) != sorted(y.f):
            res = ctx.zero
        else:
            if y.t is not None:
                yp, last = Word(y.f, None, ()), ("T", y.t)
            else:
                yp, last = Word(y.f[:-1], None, ()), ("F", y.f[-1])
            res = ctx.zero
            for (x1, x2), c in self.positive.delta_word(x).items():
                b = self._base(x2, last)
                if not b:
                    continue
                a = self.eval_words(x1, yp)
                if a:
                    res = res + c * a * b
        self._memo[key] = res
        return res

    def _base(self, x2: Word, last) -> FieldScalar:
        ctx = self.ctx
        if last[0] == "T":
            if not x2.is_toral:
                return ctx.zero
            return self.toral_value(self._kpart(x2), last[1][self.n :])
        j = last[1]
        if x2.f or x2.e != (j,):
            return ctx.zero
        return self.toral_value(self._kpart(x2), rm.unit(self.n, j)) * self.eta_EF[j]

    def eval(self, x: AlgebraElement, y: AlgebraElement) -> FieldScalar:
        if x.system is not self.positive.system or y.system is not self.negative.system:
            raise FlavorMismatch("pairing arguments must come from the positive and negative Borel parts")
        out = self.ctx.zero
        for u, cu in x.terms.items():
            for v, cv in y.terms.items():
                val = self.eval_words(u, v)
                if val:
                    out = out + cu * cv * val
        return out


def borel_pair(cartan: CartanDatum, R, gamma_plus=None, gamma_minus=None, convention="mp", root_order: int = 1):
    n = cartan.rank
    gp = gamma_plus or root_lattice(cartan)
    gm = gamma_minus or root_lattice(cartan)
    R = rm.mat(R)
    form = [rm.bilinear(a, R, b) for a in gp.basis for b in gm.basis]
    N = lcm(root_order, rm.common_denominator([form]) if form else 1)
    if convention == "mp":
        pos = build_mpquea(cartan, R, gp, gm, "borel_plus", N)
        neg = build_mpquea(cartan, R, gp, gm, "borel_minus", N)
    else:
        pos = build_jimbo(cartan, _flavor_lattice(n, gp, gm, "borel_plus"), "borel_plus", root_order=N)
        neg = build_jimbo(cartan, _flavor_lattice(n, gp, gm, "borel_minus"), "borel_minus", root_order=N)
    return pos, neg


def pairing_context(cartan: CartanDatum, R, gamma_plus=None, gamma_minus=None, root_order: int = 1) -> PairingContext:
    """eta(K_gamma, L_delta) = q^(gamma^T R delta), eta(E_i, F_j) = -delta_ij q_ii/(q_ii - 1)."""
    pos, neg = borel_pair(cartan, R, gamma_plus, gamma_minus, "mp", root_order)
    R = rm.mat(R)
    ctx = pos.spec.ctx
    eta = []
    for i in range(cartan.rank):
        qii = ctx.q_power(R[i][i])
        eta.append(-qii / (qii - 1))
    return PairingContext(pos, neg, R, eta, "mp")


def canonical_pairing_context(cartan: CartanDatum, gamma_plus=None, gamma_minus=None, root_order: int = 1) -> PairingContext:
    """eta(K_gamma, K_{delta,-}) = q^-(gamma,delta), eta(E_i, F_j) = delta_ij/(q_i^-1 - q_i)."""
    pos, neg = borel_pair(cartan, cartan.DA, gamma_plus, gamma_minus, "jimbo", root_order)
    ctx = pos.spec.ctx
    eta = [(ctx.q_power(-d) - ctx.q_power(d)).inv() for d in cartan.D]
    return PairingContext(pos, neg, cartan.DA, eta, "canonical")


def pairing_eval(ctx: PairingContext, x, y) -> FieldScalar:
    return ctx.eval(x, y)


def pairing_eval_canonical(ctx: PairingContext, x, y) -> FieldScalar:
    if ctx.name != "canonical":
        raise FlavorMismatch("context was not built with the canonical convention")
    return ctx.eval(x, y)


@dataclass
class PairingReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.failures


def pairing_law_check(ctx: PairingContext, xs: Sequence[Word], ys: Sequence[Word]) -> PairingReport:
    """Skew-pairing laws on the given positive and negative words."""
    P, Nn = ctx.positive, ctx.negative
    sp, sn = P.system, Nn.system
    rep = PairingReport()
    ev = ctx.eval_words

    def pair_dicts(a: dict, b: dict):
        out = ctx.ctx.zero
        for u, cu in a.items():
            for v, cv in b.items():
                val = ev(u, v)
                if val:
                    out = out + cu * cv * val
        return out

    for x in xs:
        rep.checked += 1
        if ev(x, ONE_WORD) != P.counit_word(x):
            rep.failures.append(("eta(h,1)=eps(h)", x, ONE_WORD))
    for y in ys:
        rep.checked += 1
        if ev(ONE_WORD, y) != Nn.counit_word(y):
            rep.failures.append(("eta(1,k)=eps(k)", ONE_WORD, y))
    for x in xs:
        for y1 in ys:
            for y2 in ys:
                rep.checked += 1
                lhs = pair_dicts({x: sp.one}, sn.mul_words(y1, y2))
                rhs = ctx.ctx.zero
                for (x1, x2), c in P.delta_word(x).items():
                    rhs = rhs + c * ev(x1, y1) * ev(x2, y2)
                if lhs != rhs:
                    rep.failures.append(("eta(h,k'k'')", x, (y1, y2)))
    for x1 in xs:
        for x2 in xs:
            for y in ys:
                rep.checked += 1
                lhs = pair_dicts(sp.mul_words(x1, x2), {y: sn.one})
                rhs = ctx.ctx.zero
                for (y1, y2), c in Nn.delta_word(y).items():
                    rhs = rhs + c * ev(x1, y2) * ev(x2, y1)
                if lhs != rhs:
                    rep.failures.append(("eta(h'h'',k)", (x1, x2), y))
    for x in xs:
        for y in ys:
            rep.checked += 1
            # equivalent to eta(S h, k) = eta(h, S^-1 k)
            lhs = pair_dicts(P.antipode_word(x), Nn.antipode_word(y))
            if lhs != ev(x, y):
                rep.failures.append(("eta(S h,S k)=eta(h,k)", x, y))
    return rep


def double_cross_check(
    full: HopfSpec, ctx: PairingContext, degree_bound: int, orientation: str = "positive-first", words=None
) -> PairingReport:
    """Cross relation of the Drinfeld double inside the presented full algebra.

    positive-first: sum x1 y1 eta(x2, y2) = sum eta(x1, y1) y2 x2 for x positive, y negative.
    literal: the same identity with the roles of the two Borel parts exchanged.
    """
    s = full.system
    P, Nn = ctx.positive, ctx.negative
    rep = PairingReport()
    if words is None:
        xs = [w for w in P.system.basis_words(degree_bound) if w.degree <= degree_bound]
        ys = [w for w in Nn.system.basis_words(degree_bound) if w.degree <= degree_bound]
    else:
        xs, ys = words
    ev = ctx.eval_words
    for x in xs:
        for y in ys:
            if x.degree + y.degree > degree_bound:
                continue
            rep.checked += 1
            lhs: dict = {}
            rhs: dict = {}
            dx = P.delta_word(x)
            dy = Nn.delta_word(y)
            for (x1, x2), cx in dx.items():
                for (y1, y2), cy in dy.items():
                    if orientation == "positive-first":
                        a = ev(x2, y2)
                        b = ev(x1, y1)
                        left_words, right_words = (x1, y1), (y2, x2)
                    else:
                        a = ev(x1, y2)
                        b = ev(x2, y1)
                        left_words, right_words = (y1, x1), (x2, y2)
                    if a:
                        for w, c in s.mul_words(*left_words).items():
                            lhs[w] = lhs.get(w, 0) + cx * cy * a * c
                    if b:
                        for w, c in s.mul_words(*right_words).items():
                            rhs[w] = rhs.get(w, 0) + cx * cy * b * c
            lhs = {k: v for k, v in lhs.items() if v}
            rhs = {k: v for k, v in rhs.items() if v}
            if lhs != rhs:
                rep.failures.append((x, y, AlgebraElement(s, lhs) - AlgebraElement(s, rhs)))
    return rep


def predicted_commutator(full: HopfSpec, ctx: PairingContext, i: int) -> AlgebraElement:
    """[E_i, F_i] as forced by the cross relation: -eta(E_i, F_i) (K_i - L_i)."""
    spec = full.spec
    a = rm.unit(spec.n, i)
    return (spec.K(a) - spec.L(a)) * (-ctx.eta_EF[i])
