"""Acceptance gate: twelve exact criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly:
    python tests/test_acceptance.py
"""

import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from mpquea import build_cartan, build_mpquea, root_lattice, theta, weight_lattice, xi
from mpquea import ratmat as rm
from mpquea.cartan import root_pairing
from mpquea.freealg import overlap_check, pbw_counts
from mpquea.lattice import psi_matrix, random_antisymmetric, random_rational_matrix
from mpquea.mpmatrix import random_theta_image, sigma_from_psi
from mpquea.qscalar import (
    context,
    q_bracket_binomial,
    q_bracket_factorial,
    q_bracket_number,
    q_paren_binomial,
    q_paren_factorial,
    q_paren_number,
)
from mpquea.quantumalg import (
    ToralCocycle,
    canonical_pairing_context,
    check_hopf_axioms,
    cocycle_identity_check,
    deformed_product,
    double_cross_check,
    pairing_context,
    pairing_law_check,
    predicted_commutator,
)
from mpquea.twist import iterate_twist_check
from mpquea.verify import (
    seeded_psis,
    seeded_stable_psis,
    stable_psi_lattice,
    verify_approx_iso,
    verify_cocycle_equiv,
    verify_duality,
    verify_hopf,
    verify_iso_borel,
    verify_iso_double,
    verify_iso_g,
)

F = Fraction
SEED = 2026
TYPES = ["A2", "A3", "B2", "G2"]
PSI_A2 = ((0, F(1, 6)), (F(-1, 6), 0))
REPORTS: list = []


class Gate:
    """Collects failures for one criterion and enforces its time budget."""

    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.problems: list[str] = []
        self.t0 = time.perf_counter()

    def expect(self, ok: bool, what: str) -> None:
        if not ok:
            self.problems.append(what)

    def finish(self) -> tuple[bool, str]:
        dt = time.perf_counter() - self.t0
        self.expect(dt < self.budget, f"runtime {dt:.1f}s exceeds {self.budget:.0f}s")
        ok = not self.problems
        detail = f"{dt:.2f}s" if ok else "; ".join(self.problems[:3])
        return ok, f"criterion {self.number:2d} {self.title}: {'PASS' if ok else 'FAIL'} ({detail})"


def c01_theta_xi():
    g = Gate(1, "theta/xi bijection", 5)
    rng = np.random.default_rng(SEED)
    for name in TYPES:
        c = build_cartan(name)
        for _ in range(100):
            psi = random_antisymmetric(rng, c.rank, 3, 12)
            g.expect(xi(c, theta(c, psi)).psi == psi, f"{name}: xi(theta(Psi)) != Psi")
        for _ in range(100):
            R = random_theta_image(c, rng)
            g.expect(theta(c, xi(c, R)) == R, f"{name}: theta(xi(R)) != R")
        for _ in range(100):
            m = random_rational_matrix(rng, c.rank, 3, 12)
            half = rm.scale(F(1, 2), rm.sub(m, rm.transpose(m)))
            g.expect(theta(c, m) == theta(c, half), f"{name}: theta sees the symmetric part")
    return g.finish()


def c02_root_twisting():
    g = Gate(2, "root-twisting lemmas", 2)
    rng = np.random.default_rng(SEED + 2)
    for name in TYPES:
        c = build_cartan(name)
        n = c.rank
        I = rm.identity(n)
        for _ in range(100):
            psi = random_antisymmetric(rng, n, 3, 12)
            P = rm.sub(psi_matrix(c, psi, "+"), psi_matrix(c, psi, "-"))
            for i in range(n):
                a = c.simple_root(i)
                Pa = rm.matvec(P, a)
                for j in range(n):
                    b = c.simple_root(j)
                    ok = root_pairing(c, Pa, b) == -root_pairing(c, a, rm.matvec(P, b))
                    g.expect(ok, f"{name}: psi_+ - psi_- not skew")
            g.expect(rm.det(rm.add(I, P)) != 0 and rm.det(rm.sub(I, P)) != 0, f"{name}: singular Id +/- P")
    return g.finish()


def c03_q_numbers():
    g = Gate(3, "q-number identities", 1)
    q = context(1).q_power(1)
    q2 = q * q
    for n in range(9):
        # (0)_q := 1 but [0]_q = 0, so the first identity only makes sense from n = 1
        if n:
            g.expect(q_paren_number(n, q2) == q ** (n - 1) * q_bracket_number(n, q), f"(n) n={n}")
        g.expect(q_paren_factorial(n, q2) == q ** (n * (n - 1) // 2) * q_bracket_factorial(n, q), f"(n)! n={n}")
        for k in range(n + 1):
            lhs = q_paren_binomial(n, k, q2)
            g.expect(lhs == q ** (k * (n - k)) * q_bracket_binomial(n, k, q), f"binomial n={n} k={k}")
    return g.finish()


def c04_rewriting():
    g = Gate(4, "rewriting soundness", 60)
    for name, bound in [("A1", 6), ("A2", 5), ("B2", 5)]:
        c = build_cartan(name)
        rep = overlap_check(build_mpquea(c, c.DA).system, bound)
        g.expect(rep.checked > 0 and rep.clean, f"{name} bound {bound}: {len(rep.failures)} overlap failures")
    c = build_cartan("A2")
    counts = pbw_counts(build_mpquea(c, c.DA, flavor="borel_plus").system, 6)
    g.expect(counts == [1, 2, 4, 6, 9, 12, 16], f"A2 PBW counts {counts}")
    return g.finish()


def _hopf_parameters(c):
    Rs = [c.DA]
    if c.rank > 1:
        Rs += [theta(c, p) for p in seeded_psis(c, SEED, 3)]
    return Rs


def c05_hopf():
    g = Gate(5, "Hopf axioms", 600 * 3)
    for name in ["A1", "A2", "B2"]:
        t0 = time.perf_counter()
        c = build_cartan(name)
        for R in _hopf_parameters(c):
            for L in (root_lattice(c), weight_lattice(c)):
                rep = check_hopf_axioms(build_mpquea(c, R, L, L), 4)
                g.expect(rep.words_checked > 0 and rep.clean, f"{name} R={rm.to_json(R)}: {rep.failures[:1]}")
        g.expect(time.perf_counter() - t0 < 600, f"{name} over 10 min")
    return g.finish()


def c06_cocycle():
    g = Gate(6, "toral cocycles", 300)
    rng = np.random.default_rng(SEED + 6)
    c = build_cartan("A2")
    h = build_mpquea(c, c.DA)
    s = h.system
    basis = s.basis_words(2)
    one = h.spec.one()
    for k in range(5):
        sigma = ToralCocycle(h, random_rational_matrix(rng, 2, 3, 12))
        rep = cocycle_identity_check(sigma, 3)
        g.expect(rep.triples_checked > 0 and rep.clean, f"cocycle {k}: {len(rep.failures)} failures")
        for _ in range(10):
            a, b, d = (s.element({basis[int(i)]: s.one}) for i in rng.integers(0, len(basis), 3))
            left = deformed_product(sigma, deformed_product(sigma, a, b), d)
            right = deformed_product(sigma, a, deformed_product(sigma, b, d))
            g.expect(left == right, f"cocycle {k}: deformed product not associative")
            g.expect(deformed_product(sigma, one, a) == a == deformed_product(sigma, a, one), f"cocycle {k}: not unital")
    return g.finish()


def c07_pairing():
    g = Gate(7, "skew-Hopf pairing", 120)
    rng = np.random.default_rng(SEED + 7)
    for name in ["A2", "B2"]:
        c = build_cartan(name)
        R = theta(c, seeded_psis(c, SEED, 1)[0])
        for ctx in (pairing_context(c, R), canonical_pairing_context(c)):
            xs = ctx.positive.system.basis_words(1)
            ys = ctx.negative.system.basis_words(1)
            rep = pairing_law_check(ctx, xs, ys)
            g.expect(rep.checked > 0 and rep.clean, f"{name} {ctx.name}: laws {rep.failures[:1]}")
        ctx = pairing_context(c, R)
        ctx.short_circuit = False
        xs = ctx.positive.system.basis_words(3)
        ys = ctx.negative.system.basis_words(3)
        tested = 0
        while tested < 100:
            x, y = xs[int(rng.integers(len(xs)))], ys[int(rng.integers(len(ys)))]
            if sorted(x.e) == sorted(y.f):
                continue
            tested += 1
            g.expect(ctx.eval_words(x, y).is_zero(), f"{name}: pairing of {x} and {y} is not zero")
        ctx = pairing_context(c, R)
        full = build_mpquea(c, R, root_order=ctx.ctx.N)
        rep = double_cross_check(full, ctx, 2)
        g.expect(rep.checked > 0 and rep.clean, f"{name}: double cross {rep.failures[:1]}")
        s = full.spec
        for i in range(c.rank):
            comm = s.E(i) * s.F(i) - s.F(i) * s.E(i)
            g.expect(comm == predicted_commutator(full, ctx, i), f"{name}: relation (e) at {i + 1}")
    return g.finish()


def c08_duality():
    g = Gate(8, "Borel duality", 120)
    c = build_cartan("A2")
    rep = verify_duality(c, PSI_A2, seed=SEED)
    REPORTS.append(rep)
    g.expect(sigma_from_psi(c, PSI_A2).S == ((0, F(-1, 2)), (F(1, 2), 0)), "S oracle")
    g.expect(rep.params["S"] == [[0, "-1/2"], ["1/2", 0]], f"report S {rep.params['S']}")
    g.expect(rep.theorem_passed, f"compatibility fails: {rep.failures()[:1]}")
    g.expect(len(rep.controls) == 5, "expected 5 perturbations")
    g.expect(all(x["status"] == "fail" and x["witness"] != "0" for x in rep.controls), "a perturbation passed")
    return g.finish()


def c09_isomorphisms():
    g = Gate(9, "isomorphism theorems", 900)
    reps = []
    for name in ["A2", "B2"]:
        c = build_cartan(name)
        for psi in seeded_psis(c, SEED, 3):
            for rep in (
                verify_iso_double(c, psi),
                verify_iso_borel(c, psi, flavor="borel_plus"),
                verify_iso_borel(c, psi, flavor="borel_minus"),
            ):
                inverse = [x for x in rep.checks if x["name"].startswith(("Phi' o Phi", "Phi o Phi'"))]
                g.expect(bool(inverse), f"{name} {rep.suite}: no inverse-composition checks")
                reps.append((name, rep))
        for psi in seeded_stable_psis(c, SEED, 3):
            rep = verify_iso_g(c, psi, stable_psi_lattice(c, psi))
            g.expect(any(x["name"].startswith("phihat o phi") for x in rep.checks), f"{name} iso_g: no inverse checks")
            reps.append((name, rep))
    for name, rep in reps:
        REPORTS.append(rep)
        g.expect(rep.theorem_passed, f"{name} {rep.suite}: {rep.failures()[:1]}")
        g.expect(rep.controls and all(x["status"] == "fail" for x in rep.controls), f"{name} {rep.suite}: control passed")
    return g.finish()


def c10_cocycle_equivalence():
    g = Gate(10, "cocycle-deformation equivalence", 600)
    rng = np.random.default_rng(SEED + 10)
    cases = [(build_cartan("A2"), build_cartan("A2").DA, theta(build_cartan("A2"), PSI_A2))]
    B2 = build_cartan("B2")
    cases.append((B2, B2.DA, theta(B2, seeded_psis(B2, SEED, 1)[0])))
    for name in ["A2", "B2", "A2"]:
        c = build_cartan(name)
        cases.append((c, random_theta_image(c, rng), random_theta_image(c, rng)))
    reps = [verify_cocycle_equiv(c, R1, R2) for c, R1, R2 in cases]
    A2 = build_cartan("A2")
    R = theta(A2, PSI_A2)
    reps += [
        verify_approx_iso(A2, R, (0, 1)),
        verify_approx_iso(A2, R, (1, 0)),
        verify_approx_iso(A2, R, (0, 1), chevalley=True),
    ]
    for rep in reps:
        REPORTS.append(rep)
        g.expect(rep.theorem_passed, f"{rep.suite} {rep.params}: {rep.failures()[:1]}")
        g.expect(rep.controls and all(x["status"] == "fail" for x in rep.controls), f"{rep.suite}: control passed")
    return g.finish()


def c11_twist_iteration():
    g = Gate(11, "twist iteration", 60)
    rng = np.random.default_rng(SEED + 11)
    c = build_cartan("A2")
    for k in range(10):
        a = random_antisymmetric(rng, 2, 3, 12)
        b = random_antisymmetric(rng, 2, 3, 12)
        rep = iterate_twist_check(c, a, b)
        g.expect(rep.checked > 0 and rep.clean, f"pair {k}: (Psi then Psi') != Psi + Psi'")
        rep = iterate_twist_check(c, a, rm.scale(-1, a))
        g.expect(rep.checked > 0 and rep.clean, f"pair {k}: -Psi does not recover the untwisted tables")
    return g.finish()


SUITE_RUNNERS = {
    "duality": lambda c: verify_duality(c, PSI_A2, seed=SEED),
    "iso_double": lambda c: verify_iso_double(c, PSI_A2),
    "iso_borel": lambda c: verify_iso_borel(c, PSI_A2),
    "iso_g": lambda c: verify_iso_g(c, ((0, 1), (-1, 0))),
    "cocycle_equiv": lambda c: verify_cocycle_equiv(c, c.DA, theta(c, PSI_A2)),
    "approx_iso": lambda c: verify_approx_iso(c, theta(c, PSI_A2), (1, 0)),
    "hopf": lambda c: verify_hopf(c, degree_bound=2),
}


def c12_negative_controls():
    g = Gate(12, "negative-control meta-check", 600)
    c = build_cartan("A2")
    seen = set()
    for suite, runner in SUITE_RUNNERS.items():
        rep = runner(c)
        seen.add(rep.suite)
        g.expect(len(rep.controls) >= 1, f"{suite}: no corrupted-input control")
        g.expect(rep.passed, f"{suite}: a control passed or a check failed")
    for rep in REPORTS:
        g.expect(rep.controls and all(x["status"] == "fail" for x in rep.controls), f"{rep.suite}: control passed")
    g.expect(len(seen) == len(SUITE_RUNNERS), f"suites seen: {sorted(seen)}")
    return g.finish()


CRITERIA = [
    c01_theta_xi,
    c02_root_twisting,
    c03_q_numbers,
    c04_rewriting,
    c05_hopf,
    c06_cocycle,
    c07_pairing,
    c08_duality,
    c09_isomorphisms,
    c10_cocycle_equivalence,
    c11_twist_iteration,
    c12_negative_controls,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion, acceptance_log):
    ok, line = criterion()
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [f() for f in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
