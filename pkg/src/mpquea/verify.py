"""Executable checks of the duality, isomorphism and cocycle-equivalence theorems."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Sequence

import numpy as np

from . import ratmat as rm
from .cartan import CartanDatum, build_cartan
from .errors import InputError, NotApproxEquivalent, NotEquivalent, PsiNotStable
from .freealg import ONE_WORD, AlgebraElement, TensorElement, Word, render_word
from .lattice import (
    Lattice,
    as_twist,
    image_lattice,
    lattice_sum,
    product_lattice,
    psi_matrix,
    q_psi,
    random_antisymmetric,
    root_lattice,
    stable_closure,
)
from .mpmatrix import (
    approx_equivalent,
    chevalley_permute,
    equivalence_witness,
    permute,
    sigma_from_psi,
    theta,
    twist_equivalent,
)
from .quantumalg import (
    HopfSpec,
    PairingContext,
    ToralCocycle,
    build_algebra,
    _flavor_lattice,
    build_jimbo,
    build_mpquea,
    check_hopf_axioms,
    deformed_letters,
    deformed_product,
    quotient_to_g,
)
from .twist import Carrier, TwistedHopfSpec, build_twquea

# reports


@dataclass
class VerificationReport:
    suite: str
    params: dict
    checks: list = field(default_factory=list)
    timing: float = 0.0

    def add(self, name: str, ok: bool, witness: str = "0", control: bool = False) -> None:
        self.checks.append(
            {
                "name": name,
                "kind": "control" if control else "check",
                "status": "pass" if ok else "fail",
                "witness": "0" if ok else witness,
            }
        )

    @property
    def controls(self) -> list:
        return [c for c in self.checks if c["kind"] == "control"]

    @property
    def passed(self) -> bool:
        """All checks pass and every corrupted control fails."""
        return all((c["status"] == "pass") == (c["kind"] == "check") for c in self.checks)

    @property
    def theorem_passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks if c["kind"] == "check")

    def failures(self) -> list:
        return [c for c in self.checks if c["kind"] == "check" and c["status"] == "fail"]

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {"suite": self.suite, "params": self.params, "checks": self.checks, "passed": self.passed}
        if include_timing:
            d["timing"] = round(self.timing, 6)
        return d

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)

    def render(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            tag = "control" if c["kind"] == "control" else "check"
            lines.append(f"  [{tag}] {c['name']}: {c['status']}" + ("" if c["witness"] == "0" else f"  witness: {c['witness']}"))
        return "\n".join(lines)


def _mat_json(m) -> list:
    return rm.to_json(m)


# generator maps


class GeneratorMap:
    """Algebra map given on generators; toral letters map by a linear rule on exponents."""

    def __init__(
        self,
        source: HopfSpec,
        target: HopfSpec,
        image_E: Callable[[int], AlgebraElement] | None,
        image_F: Callable[[int], AlgebraElement] | None,
        toral: Callable[[rm.Vector], AlgebraElement],
        name: str = "",
    ):
        self.source = source
        self.target = target
        self.image_E = image_E
        self.image_F = image_F
        self.toral = toral
        self.name = name
        self._cache: dict = {}

    def letter(self, letter) -> dict:
        hit = self._cache.get(letter)
        if hit is not None:
            return hit
        kind = letter[0]
        if kind == "E":
            x = self.image_E(letter[1])
        elif kind == "F":
            x = self.image_F(letter[1])
        else:
            x = self.toral(letter[1])
        self._cache[letter] = x.terms
        return x.terms

    def letters(self, seq) -> dict:
        s = self.target.system
        cur = {ONE_WORD: s.one}
        for l in seq:
            cur = s.mul_dicts(cur, self.letter(l))
        return cur

    def word(self, w: Word) -> dict:
        return self.letters(w.letters())

    def element(self, x: AlgebraElement) -> AlgebraElement:
        out: dict = {}
        for w, c in x.terms.items():
            for k, v in self.word(w).items():
                out[k] = out.get(k, 0) + c * v
        return AlgebraElement(self.target.system, out)

    def tensor(self, terms: dict) -> dict:
        out: dict = {}
        for (a, b), c in terms.items():
            for wa, ca in self.word(a).items():
                for wb, cb in self.word(b).items():
                    out[(wa, wb)] = out.get((wa, wb), 0) + c * ca * cb
        return {k: v for k, v in out.items() if v}


def _render_tensor(system, terms: dict) -> str:
    return TensorElement((system, system), terms).render()


def relation_kill(rep: VerificationReport, m: GeneratorMap, label: str, control: bool = False, first_only: bool = False):
    """Every defining relation of the source maps to zero. Returns True if all vanish."""
    all_ok = True
    for name, raw in m.source.system.relations():
        out: dict = {}
        for c, letters in raw:
            for k, v in m.letters(letters).items():
                out[k] = out.get(k, 0) + c * v
        res = AlgebraElement(m.target.system, out)
        ok = res.is_zero()
        all_ok &= ok
        if not control and not first_only:
            rep.add(f"{label}: relation {name}", ok, res.render())
        elif not ok:
            rep.add(f"{label}: relation {name}", False, res.render(), control=control)
            return False
    if control and all_ok:
        rep.add(f"{label}: relations", True, control=True)
    return all_ok


def hopf_compat(rep: VerificationReport, m: GeneratorMap, label: str, control: bool = False) -> bool:
    s, t = m.source, m.target
    all_ok = True
    for g in s.generator_letters():
        gname = _letter_name(g)
        lhs = {}
        for w, c in m.letter(g).items():
            for k, v in t.delta_word(w).items():
                lhs[k] = lhs.get(k, 0) + c * v
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = m.tensor(s.delta_letter(g))
        diff = dict(lhs)
        for k, v in rhs.items():
            diff[k] = diff.get(k, 0) - v
        diff = {k: v for k, v in diff.items() if v}
        ok_d = not diff
        eps_t = sum((c for w, c in m.letter(g).items() if w.is_toral), t.system.ctx.zero)
        ok_e = eps_t == s.counit_letters([g])
        ant_l = {}
        for w, c in m.letter(g).items():
            for k, v in t.antipode_word(w).items():
                ant_l[k] = ant_l.get(k, 0) + c * v
        ant_r = {}
        for w, c in s.antipode_letter(g).items():
            for k, v in m.word(w).items():
                ant_r[k] = ant_r.get(k, 0) + c * v
        adiff = AlgebraElement(t.system, ant_l) - AlgebraElement(t.system, ant_r)
        ok_s = adiff.is_zero()
        all_ok &= ok_d and ok_e and ok_s
        if not control:
            rep.add(f"{label}: coproduct on {gname}", ok_d, _render_tensor(t.system, diff))
            rep.add(f"{label}: counit on {gname}", ok_e, "counit mismatch")
            rep.add(f"{label}: antipode on {gname}", ok_s, adiff.render())
        elif not (ok_d and ok_e and ok_s):
            rep.add(f"{label}: Hopf compatibility on {gname}", False, _render_tensor(t.system, diff) if diff else adiff.render(), control=True)
            return False
    if control:
        rep.add(f"{label}: Hopf compatibility", True, control=True)
    return all_ok


def inverse_check(rep: VerificationReport, fwd: GeneratorMap, back: GeneratorMap, label: str, letters=None) -> None:
    """back o fwd = id on the generators of fwd.source (compared inside back.target)."""
    dom = fwd.source
    home = back.target.system
    for g in letters if letters is not None else dom.generator_letters():
        img = fwd.letter(g)
        out: dict = {}
        for w, c in img.items():
            for k, v in back.word(w).items():
                out[k] = out.get(k, 0) + c * v
        res = AlgebraElement(home, out) - home.word([g])
        rep.add(f"{label} on {_letter_name(g)}", res.is_zero(), res.render())


def _letter_name(g) -> str:
    if g[0] == "T":
        return "T[" + ",".join(rm.fmt_frac(x) for x in g[1]) + "]"
    return f"{g[0]}{g[1] + 1}"


def _T(h: HopfSpec, kl) -> AlgebraElement:
    return h.system.word([("T", tuple(kl))])


# shared linear data


def _P(cartan, psi):
    psi = as_twist(psi)
    psi.require_antisymmetric()
    cartan.require_finite()
    return psi, psi_matrix(cartan, psi, "+"), psi_matrix(cartan, psi, "-")


def _block(a, b, c, d) -> rm.Matrix:
    """2n x 2n matrix [[a, b], [c, d]]."""
    return tuple(tuple(a[i]) + tuple(b[i]) for i in range(len(a))) + tuple(
        tuple(c[i]) + tuple(d[i]) for i in range(len(c))
    )


def _phi_T_matrix(pp, pm) -> rm.Matrix:
    n = len(pp)
    I = rm.identity(n)
    return _block(rm.add(I, pp), pp, pm, rm.add(I, pm))


# duality


def verify_duality(
    cartan: CartanDatum,
    psi,
    S=None,
    gamma_plus: Lattice | None = None,
    gamma_minus: Lattice | None = None,
    seed: int = 0,
    perturbations: int = 5,
) -> VerificationReport:
    t0 = time.perf_counter()
    psi = as_twist(psi)
    psi.require_antisymmetric()
    cartan.require_finite()
    match = sigma_from_psi(cartan, psi).S
    S = match if S is None else rm.mat(S)
    gp = gamma_plus or q_psi(cartan, psi)
    gm = gamma_minus or root_lattice(cartan)
    rep = VerificationReport(
        "duality",
        {"type": cartan.name or _mat_json(cartan.A), "psi": _mat_json(psi.psi), "S": _mat_json(S), "seed": seed},
    )
    ctx = _duality_setup(cartan, psi, gp, gm)
    fails = _duality_conditions(ctx, S, rep, record=True)
    ok = not fails
    rep.add("pass iff S = -A^T Psi A", ok == (S == match), "pass status disagrees with the formula")
    rng = np.random.default_rng(seed)
    n = cartan.rank
    for k in range(perturbations):
        i, j = (int(x) for x in rng.integers(0, n, size=2))
        num = int(rng.integers(1, 4)) * (1 if rng.integers(0, 2) else -1)
        den = int(rng.integers(1, 13))
        bad = [list(r) for r in match]
        bad[i][j] += Fraction(num, den)
        f = _duality_conditions(ctx, rm.mat(bad), rep, record=False)
        w = f"perturbed ({i + 1},{j + 1}) by {rm.fmt_frac(Fraction(num, den))}; first failure {f[0]}" if f else "no failure"
        rep.add(f"perturbed S #{k + 1}", not f, w, control=True)
    rep.timing = time.perf_counter() - t0
    return rep


@dataclass
class _DualityCtx:
    tw: TwistedHopfSpec
    neg: HopfSpec
    eta: PairingContext


def _duality_setup(cartan, psi, gp, gm) -> _DualityCtx:
    n = cartan.rank
    tw = build_twquea(cartan, psi, gp, flavor="borel_plus")
    neg = build_jimbo(cartan, Lattice.from_generators([(Fraction(0),) * n + tuple(b) for b in gm.basis], 2 * n), "borel_minus", root_order=tw.spec.N)
    ctx = tw.spec.ctx
    eta = [(ctx.q_power(-d) - ctx.q_power(d)).inv() for d in cartan.D]
    return _DualityCtx(tw, neg, PairingContext(tw.base, neg, cartan.DA, eta, "canonical"))


def _duality_conditions(dc: _DualityCtx, S, rep: VerificationReport, record: bool) -> list:
    tw, neg, eta = dc.tw, dc.neg, dc.eta
    n = tw.n
    sigma = ToralCocycle(neg, S)
    ns = neg.system
    ps = tw.system
    fails = []

    def pair2(terms, y1, y2):
        out = eta.ctx.zero
        for (a, b), c in terms.items():
            v = eta.eval_words(a, y1)
            if v:
                out = out + c * v * eta.eval_words(b, y2)
        return out

    def pair1(x: Word, y: AlgebraElement):
        out = eta.ctx.zero
        for w, c in y.terms.items():
            out = out + c * eta.eval_words(x, w)
        return out

    minus_basis = [b for b in neg.spec.lattice.basis]
    plus_basis = [b for b in tw.spec.lattice.basis]
    for cond in ("I", "II"):
        for bi, b in enumerate(minus_basis):
            # b = (0, d); T(0, -d) is K_{d,-}
            kd = ns.word([("T", rm.vneg(b))])
            kdw = next(iter(kd.terms))
            for j in range(n):
                ej = Word((), None, (j,))
                fj = ns.word([("F", j)])
                fjw = Word((j,), None, ())
                dE = tw.delta_word(ej)
                if cond == "I":
                    lhs = pair2(dE, kdw, fjw)
                    rhs = pair1(ej, deformed_product(sigma, kd, fj))
                else:
                    lhs = pair2(dE, fjw, kdw)
                    rhs = pair1(ej, deformed_product(sigma, fj, kd))
                ok = lhs == rhs
                lab = f"condition {cond} ({bi + 1},{j + 1})"
                if not ok:
                    fails.append(lab)
                if record:
                    rep.add(lab, ok, f"{lhs.render()} != {rhs.render()}")
    for ai, a in enumerate(plus_basis):
        kw = ps.toral_word(a)
        dK = tw.delta_word(kw)
        for bi, b in enumerate(minus_basis):
            for ci, c in enumerate(minus_basis):
                x, y = ns.word([("T", rm.vneg(b))]), ns.word([("T", rm.vneg(c))])
                lhs = pair2(dK, next(iter(x.terms)), next(iter(y.terms)))
                rhs = pair1(kw, deformed_product(sigma, x, y))
                ok = lhs == rhs
                lab = f"({ai + 1},{bi + 1},{ci + 1})"
                if not ok:
                    fails.append("condition III " + lab)
                if record:
                    rep.add(f"condition III {lab}", ok, f"{lhs.render()} != {rhs.render()}")
    return fails


# TwQUEA over g_D


def _twisted_over(cartan, psi, lattice2n: Lattice, flavor: str, root_order: int) -> TwistedHopfSpec:
    base = build_jimbo(cartan, lattice2n, flavor, root_order=root_order)
    return TwistedHopfSpec(base, psi, Carrier("doubled", cartan.rank))


def _double_lattices(cartan, psi, pp, pm, Mp: Lattice, Mm: Lattice):
    """Target lattice Lambda = Phi_T(M x M) + Q x Q + shifts, and Phi_T^-1(Lambda)."""
    n = cartan.rank
    z = (Fraction(0),) * n
    PhiT = _phi_T_matrix(pp, pm)
    src = product_lattice(Mp, Mm)
    gens = [rm.matvec(PhiT, b) for b in src.basis]
    for i in range(n):
        a = rm.unit(n, i)
        gens += [a + z, z + a, rm.matvec(pp, a) + z, z + rm.matvec(pm, a)]
    lam = Lattice.from_generators(gens, 2 * n)
    src_ext = image_lattice(rm.inv(PhiT), lam)
    return PhiT, lam, src, src_ext


def verify_iso_double(
    cartan: CartanDatum, psi, M_plus: Lattice | None = None, M_minus: Lattice | None = None
) -> VerificationReport:
    t0 = time.perf_counter()
    psi, pp, pm = _P(cartan, psi)
    n = cartan.rank
    Mp = M_plus or root_lattice(cartan)
    Mm = M_minus or root_lattice(cartan)
    rep = VerificationReport(
        "iso-double",
        {"type": cartan.name or _mat_json(cartan.A), "psi": _mat_json(psi.psi), "M_plus": _mat_json(Mp.basis), "M_minus": _mat_json(Mm.basis)},
    )
    R = theta(cartan, psi)
    PhiT, lam, src_lat, ext_lat = _double_lattices(cartan, psi, pp, pm, Mp, Mm)
    PhiTinv = rm.inv(PhiT)
    N = psi.root_denominator
    tgt = _twisted_over(cartan, psi, lam, "full", N)
    src = HopfSpec(build_algebra(cartan, R, src_lat, "full", "mp", root_order=N))
    ext = HopfSpec(build_algebra(cartan, R, ext_lat, "full", "mp", root_order=N))
    z = (Fraction(0),) * n
    ts = tgt.spec

    def fwd(source, with_qi=True):
        def E(i):
            c = ts.ctx.q_power(cartan.D[i]) if with_qi else ts.ctx.one
            return _T(tgt, z + rm.matvec(pm, rm.unit(n, i))) * ts.E(i) * c

        def F(i):
            return _T(tgt, rm.matvec(pp, rm.unit(n, i)) + z) * ts.F(i)

        return GeneratorMap(source, tgt, E, F, lambda v: _T(tgt, rm.matvec(PhiT, v)), "Phi")

    def back():
        es = ext.spec

        def E(i):
            sh = rm.vneg(rm.matvec(PhiTinv, z + rm.matvec(pm, rm.unit(n, i))))
            return _T(ext, sh) * es.E(i) * es.ctx.q_power(-cartan.D[i])

        def F(i):
            sh = rm.vneg(rm.matvec(PhiTinv, rm.matvec(pp, rm.unit(n, i)) + z))
            return _T(ext, sh) * es.F(i)

        return GeneratorMap(tgt, ext, E, F, lambda v: _T(ext, rm.matvec(PhiTinv, v)), "Phi'")

    phi = fwd(src)
    relation_kill(rep, phi, "Phi")
    hopf_compat(rep, phi, "Phi")
    inverse_check(rep, phi, back(), "Phi' o Phi = id")
    inverse_check(rep, back(), fwd(ext), "Phi o Phi' = id")
    relation_kill(rep, fwd(src, with_qi=False), "corrupted Phi (no q_i)", control=True)
    rep.timing = time.perf_counter() - t0
    return rep


def verify_iso_borel(cartan: CartanDatum, psi, M: Lattice | None = None, flavor: str = "borel_plus") -> VerificationReport:
    t0 = time.perf_counter()
    if flavor not in ("borel_plus", "borel_minus"):
        raise InputError("flavor must be borel_plus or borel_minus")
    psi, pp, pm = _P(cartan, psi)
    n = cartan.rank
    M = M or root_lattice(cartan)
    rep = VerificationReport(
        "iso-borel",
        {"type": cartan.name or _mat_json(cartan.A), "psi": _mat_json(psi.psi), "M": _mat_json(M.basis), "flavor": flavor},
    )
    R = theta(cartan, psi)
    PhiT, lam, _, ext_lat = _double_lattices(cartan, psi, pp, pm, M, M)
    PhiTinv = rm.inv(PhiT)
    z = (Fraction(0),) * n
    N = psi.root_denominator
    plus = flavor == "borel_plus"
    src_lat = Lattice.from_generators([(tuple(b) + z) if plus else (z + tuple(b)) for b in M.basis], 2 * n)
    tgt = _twisted_over(cartan, psi, lam, flavor, N)
    src = HopfSpec(build_algebra(cartan, R, src_lat, flavor, "mp", root_order=N))
    ext = HopfSpec(build_algebra(cartan, R, ext_lat, flavor, "mp", root_order=N))
    ts = tgt.spec

    def fwd(source, toral=None, extra=False):
        def E(i):
            x = _T(tgt, z + rm.matvec(pm, rm.unit(n, i))) * ts.E(i)
            return x * _T(tgt, rm.unit(n, i) + z) if extra else x

        def F(i):
            x = _T(tgt, rm.matvec(pp, rm.unit(n, i)) + z) * ts.F(i)
            return x * _T(tgt, z + rm.unit(n, i)) if extra else x

        tor = toral or (lambda v: _T(tgt, rm.matvec(PhiT, v)))
        return GeneratorMap(source, tgt, E if plus else None, None if plus else F, tor, "Phi")

    def back():
        es = ext.spec

        def E(i):
            return _T(ext, rm.vneg(rm.matvec(PhiTinv, z + rm.matvec(pm, rm.unit(n, i))))) * es.E(i)

        def F(i):
            return _T(ext, rm.vneg(rm.matvec(PhiTinv, rm.matvec(pp, rm.unit(n, i)) + z))) * es.F(i)

        return GeneratorMap(tgt, ext, E if plus else None, None if plus else F, lambda v: _T(ext, rm.matvec(PhiTinv, v)), "Phi'")

    phi = fwd(src)
    relation_kill(rep, phi, "Phi")
    hopf_compat(rep, phi, "Phi")
    inverse_check(rep, phi, back(), "Phi' o Phi = id")
    inverse_check(rep, back(), fwd(ext), "Phi o Phi' = id")
    hopf_compat(rep, fwd(src, extra=True), "corrupted Phi (extra toral factor)", control=True)
    if any(x for row in psi.psi for x in row):
        relation_kill(rep, fwd(src, toral=lambda v: _T(tgt, v)), "corrupted Phi (untwisted torus)", control=True)
    _collapse(rep, cartan, psi, pp, pm, flavor)
    rep.timing = time.perf_counter() - t0
    return rep


def collapse_support(cartan, psi, M: Lattice, flavor: str, twisted: bool) -> set:
    """K_M-module support of products of <= 2 root-vector generators in the one-copy Borel over M.

    Each product is a single monomial (no Serre relation has degree <= 2), recorded as
    (root-vector word, toral coset mod M).
    """
    n = cartan.rank
    tw = build_twquea(cartan, psi, lattice_sum(M, q_psi(cartan, psi)), flavor=flavor)
    s = tw.spec
    C = tw.carrier
    kind = "E" if flavor == "borel_plus" else "F"
    gens = []
    for i in range(n):
        g = s.E(i) if kind == "E" else s.F(i)
        if twisted:
            sh = C.minus(rm.vneg(rm.matvec(tw.pm, rm.unit(n, i)))) if kind == "E" else C.plus(rm.matvec(tw.pp, rm.unit(n, i)))
            g = _T(tw, sh) * g
        gens.append(g)
    prods = [s.one()] + gens + [a * b for a in gens for b in gens]
    sup = set()
    zero = (Fraction(0),) * (2 * n)
    for p in prods:
        for w in p.terms:
            t = w.t if w.t is not None else zero
            coords = M.coordinates(t[:n] if kind == "E" else t[n:])
            sup.add((w.e if kind == "E" else w.f, tuple(x - floor(x) for x in coords)))
    return sup


def _collapse(rep, cartan, psi, pp, pm, flavor) -> None:
    Mbig = q_psi(cartan, psi)
    a = collapse_support(cartan, psi, Mbig, flavor, True)
    b = collapse_support(cartan, psi, Mbig, flavor, False)
    rep.add("collapse at M = Q^Psi: twisted and plain degree<=2 spans agree", a == b, f"{len(a ^ b)} differing support entries")
    Q = root_lattice(cartan)
    if not Mbig.same_span(Q):
        a = collapse_support(cartan, psi, Q, flavor, True)
        b = collapse_support(cartan, psi, Q, flavor, False)
        rep.add("collapse at M = Q (psi-shifts outside Q)", a == b, f"{len(a ^ b)} differing support entries", control=True)


# TwQUEA over g


def stable_psi_lattice(cartan: CartanDatum, psi, M: Lattice | None = None) -> Lattice:
    """Smallest lattice containing M (default Q) and stable under psi_+; PsiNotStable if none exists."""
    base = M or root_lattice(cartan)
    m = psi_matrix(cartan, psi, "+")
    L = stable_closure(m, base)
    if L is None:
        raise PsiNotStable("no psi_+-stable lattice contains M", witness=rm.to_json(m))
    return L


def verify_iso_g(cartan: CartanDatum, psi, M: Lattice | None = None) -> VerificationReport:
    t0 = time.perf_counter()
    psi, pp, pm = _P(cartan, psi)
    n = cartan.rank
    M = M or root_lattice(cartan)
    rep = VerificationReport(
        "iso-g", {"type": cartan.name or _mat_json(cartan.A), "psi": _mat_json(psi.psi), "M": _mat_json(M.basis)}
    )
    src = quotient_to_g(cartan, psi, M, root_order=psi.root_denominator)
    tgt = build_twquea(cartan, psi, lattice_sum(M, q_psi(cartan, psi)), flavor="single")
    if not tgt.spec.lattice.same_span(product_lattice(M, M)):
        raise PsiNotStable("psi-shifts of the roots leave M")
    I = rm.identity(n)
    P = pp
    z = (Fraction(0),) * n
    ts, ss = tgt.spec, src.spec
    A_plus = rm.add(I, rm.scale(2, P))
    A_minus = rm.sub(I, rm.scale(2, P))

    def phi_T(v):
        k, l = v[:n], v[n:]
        return rm.vsub(rm.matvec(A_plus, k), rm.matvec(A_minus, l)) + z

    def phihat_T(v):
        x = rm.vsub(v[:n], v[n:])
        return rm.matvec(rm.sub(I, P), x) + rm.matvec(P, x)

    def phi(with_qi=True):
        def E(i):
            c = ts.ctx.q_power(cartan.D[i]) if with_qi else ts.ctx.one
            return _T(tgt, rm.matvec(P, rm.unit(n, i)) + z) * ts.E(i) * c

        def F(i):
            return _T(tgt, rm.matvec(P, rm.unit(n, i)) + z) * ts.F(i)

        return GeneratorMap(src, tgt, E, F, lambda v: _T(tgt, phi_T(v)), "phi")

    def phihat():
        def E(i):
            sh = rm.vneg(phihat_T(rm.matvec(P, rm.unit(n, i)) + z))
            return _T(src, sh) * ss.E(i) * ss.ctx.q_power(-cartan.D[i])

        def F(i):
            sh = rm.vneg(phihat_T(rm.matvec(P, rm.unit(n, i)) + z))
            return _T(src, sh) * ss.F(i)

        return GeneratorMap(tgt, src, E, F, lambda v: _T(src, phihat_T(v)), "phihat")

    f = phi()
    relation_kill(rep, f, "phi")
    hopf_compat(rep, f, "phi")
    inverse_check(rep, f, phihat(), "phihat o phi = id")
    inverse_check(rep, phihat(), f, "phi o phihat = id")
    for i, mu in enumerate(M.basis):
        img = phihat().letters([("T", phi_T(tuple(mu) + z))])
        res = AlgebraElement(src.system, img) - _T(src, tuple(mu) + z)
        rep.add(f"phihat(K_(id+2psi_+)(mu_{i + 1})) = K_mu_{i + 1}", res.is_zero(), res.render())
    relation_kill(rep, phi(with_qi=False), "corrupted phi (no q_i)", control=True)
    rep.timing = time.perf_counter() - t0
    return rep


# cocycle equivalence


def verify_cocycle_equiv(
    cartan: CartanDatum, R1, R2, gamma_plus: Lattice | None = None, gamma_minus: Lattice | None = None
) -> VerificationReport:
    """Relations of U_{R2}, multiplied with the sigma-product of U_{R1}, vanish (sigma from the witness N)."""
    t0 = time.perf_counter()
    R1, R2 = rm.mat(R1), rm.mat(R2)
    if not twist_equivalent(R1, R2):
        raise NotEquivalent("multiparameters are not twist equivalent")
    Nw = equivalence_witness(R1, R2)
    gp = gamma_plus or root_lattice(cartan)
    gm = gamma_minus or root_lattice(cartan)
    rep = VerificationReport(
        "cocycle-equiv",
        {"type": cartan.name or _mat_json(cartan.A), "R1": _mat_json(R1), "R2": _mat_json(R2), "N": _mat_json(Nw)},
    )
    for flavor in ("full", "borel_plus", "borel_minus"):
        base = _mp(cartan, R1, gp, gm, flavor)
        goal = _mp(cartan, R2, gp, gm, flavor)
        _deformed_relations(rep, base, goal, Nw, flavor, control=False)
    bump = [list(r) for r in Nw]
    n = cartan.rank
    if n > 1:
        bump[0][1] += 1
    else:
        bump[0][0] += Fraction(1, 2)
        bump = [[bump[0][0]]]
    for flavor in ("full",):
        base = _mp(cartan, R1, gp, gm, flavor)
        goal = _mp(cartan, R2, gp, gm, flavor)
        _deformed_relations(rep, base, goal, rm.mat(bump), flavor, control=True)
    rep.timing = time.perf_counter() - t0
    return rep


def _mp(cartan, R, gp, gm, flavor) -> HopfSpec:
    lat = _flavor_lattice(cartan.rank, gp, gm, flavor)
    return HopfSpec(build_algebra(cartan, R, lat, flavor, "mp", cartan_check="identity"))


def _deformed_relations(rep, base: HopfSpec, goal: HopfSpec, S, flavor: str, control: bool) -> None:
    sigma = ToralCocycle(base, S)
    bs = base.system
    for name, raw in goal.system.relations():
        out = bs.zero()
        for c, letters in raw:
            out = out + deformed_letters(sigma, letters) * c
        ok = out.is_zero()
        if not control:
            rep.add(f"{flavor}: relation {name} under sigma-product", ok, out.render())
        elif not ok:
            rep.add(f"{flavor}: perturbed sigma, relation {name}", False, out.render(), control=True)
            return
    if control:
        rep.add(f"{flavor}: perturbed sigma", True, control=True)


# approximate equivalence


def verify_approx_iso(cartan: CartanDatum, R, gamma: Sequence[int], chevalley: bool = False) -> VerificationReport:
    """Forward map U_R -> U_R' for R' obtained by relabeling (plain) or the Chevalley-type flip."""
    t0 = time.perf_counter()
    R = rm.mat(R)
    n = cartan.rank
    g = tuple(int(x) for x in gamma)
    if sorted(g) != list(range(n)):
        raise InputError("gamma must be a permutation of 0..n-1")
    ginv = tuple(g.index(i) for i in range(n))
    Rp = chevalley_permute(R, ginv) if chevalley else permute(R, ginv)
    Ap = permute(cartan.A, ginv)
    if approx_equivalent(Rp, R) is None:
        raise NotApproxEquivalent("gamma does not relate the multiparameters")
    cp = build_cartan(Ap)
    rep = VerificationReport(
        "approx-iso",
        {"type": cartan.name or _mat_json(cartan.A), "R": _mat_json(R), "gamma": [x + 1 for x in g], "chevalley": chevalley, "R_target": _mat_json(Rp)},
    )
    Q = root_lattice(cartan)
    src = HopfSpec(build_algebra(cartan, R, product_lattice(Q, Q), "full", "mp", cartan_check="identity"))
    tgt = HopfSpec(build_algebra(cp, Rp, product_lattice(Q, Q), "full", "mp", cartan_check="identity"))
    ts = tgt.spec

    def perm_vec(v):
        out = [Fraction(0)] * n
        for i in range(n):
            out[g[i]] = v[i]
        return tuple(out)

    def make(corrupt=False):
        if not chevalley:
            E = lambda i: ts.E(g[i])
            F = lambda i: ts.F(g[i]) * (ts.scalar(2) if corrupt else ts.scalar(1))
            tor = lambda v: _T(tgt, perm_vec(v[:n]) + perm_vec(v[n:]))
        else:
            z = (Fraction(0),) * n
            E = lambda i: _T(tgt, z + rm.vneg(rm.unit(n, g[i]))) * ts.F(g[i])
            F = lambda i: _T(tgt, rm.vneg(rm.unit(n, g[i])) + z) * ts.E(g[i]) * (ts.scalar(2) if corrupt else ts.scalar(1))
            tor = lambda v: _T(tgt, rm.vneg(perm_vec(v[n:])) + rm.vneg(perm_vec(v[:n])))
        return GeneratorMap(src, tgt, E, F, tor, "approx")

    m = make()
    relation_kill(rep, m, "map")
    hopf_compat(rep, m, "map")
    relation_kill(rep, make(corrupt=True), "corrupted map (F rescaled)", control=True)
    rep.timing = time.perf_counter() - t0
    return rep


# seeded parameter helpers


def seeded_psis(cartan: CartanDatum, seed: int, count: int, max_den: int = 12) -> list:
    """Seeded distinct nonzero antisymmetric twists."""
    if cartan.rank < 2:
        raise InputError("rank 1 admits only the zero twist")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = random_antisymmetric(rng, cartan.rank, 3, max_den)
        if any(x for r in p for x in r) and p not in out:
            out.append(p)
    return out


def seeded_stable_psis(cartan: CartanDatum, seed: int, count: int, max_den: int = 12, tries: int = 10000) -> list:
    """Seeded antisymmetric Psi admitting a psi_+-stable lattice over Q (rejection sampling)."""
    if cartan.rank < 2:
        raise InputError("rank 1 admits only the zero twist")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(tries):
        p = random_antisymmetric(rng, cartan.rank, 3, max_den)
        if not any(x for r in p for x in r) or p in out:
            continue
        if stable_closure(psi_matrix(cartan, p, "+"), root_lattice(cartan)) is not None:
            out.append(p)
            if len(out) == count:
                return out
    raise PsiNotStable("could not sample enough psi_+-stable twists")


# Hopf axioms


def verify_hopf(
    cartan: CartanDatum, R=None, lattice: Lattice | None = None, degree_bound: int = 3, psi=None
) -> VerificationReport:
    """Hopf axioms of U_R over lattice x lattice (or of the twisted algebra when psi is given)."""
    t0 = time.perf_counter()
    R = cartan.DA if R is None else rm.mat(R)
    L = lattice or root_lattice(cartan)
    params = {"type": cartan.name or _mat_json(cartan.A), "R": _mat_json(R), "lattice": _mat_json(L.basis), "degree_bound": degree_bound}
    if psi is not None:
        params["psi"] = _mat_json(as_twist(psi).psi)
        h = build_twquea(cartan, psi, lattice_sum(L, q_psi(cartan, psi)), doubled=True)
    else:
        h = build_mpquea(cartan, R, L, L)
    rep = VerificationReport("hopf", params)
    res = check_hopf_axioms(h, degree_bound)
    n = h.n
    for kind in ("coassociativity", "counit", "antipode"):
        bad = [w for k, w in res.failures if k == kind]
        rep.add(f"{kind} on {res.words_checked} basis words", not bad, render_word(bad[0], n) if bad else "0")
    bad = [k for k, w in res.failures if w is None]
    rep.add(f"coproduct, counit and antipode kill {res.relations_checked} relations", not bad, bad[0] if bad else "0")
    s = h.spec
    broken = HopfSpec(s, h._dE, h._dF, lambda i: -s.E(i), h._sF, label="corrupted")
    cres = check_hopf_axioms(broken, 1)
    rep.add("corrupted antipode S(E_i) = -E_i", cres.clean, str(cres.failures[0][0]) if cres.failures else "0", control=True)
    rep.timing = time.perf_counter() - t0
    return rep
