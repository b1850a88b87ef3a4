from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from strategies import antisymmetric

from mpquea import build_cartan, build_mpquea, root_lattice, theta, weight_lattice
from mpquea import ratmat as rm
from mpquea.errors import FlavorMismatch, PsiNotStable
from mpquea.freealg import ONE_WORD, TensorElement, Word
from mpquea.quantumalg import (
    HopfSpec,
    ToralCocycle,
    build_jimbo_single,
    canonical_pairing_context,
    check_bialgebra_law,
    check_hopf_axioms,
    cocycle_eval,
    cocycle_identity_check,
    cocycle_inverse_eval,
    deformed_antipode,
    deformed_product,
    double_cross_check,
    pairing_context,
    pairing_eval,
    pairing_eval_canonical,
    pairing_law_check,
    predicted_commutator,
    project_p,
    quotient_to_g,
)

F = Fraction
R_EX = ((2, -2), (0, 2))


def _h(name, R=None, **kw):
    c = build_cartan(name)
    return build_mpquea(c, c.DA if R is None else R, **kw)


def test_a1_presentation():
    h = _h("A1", [[2]])
    summ = h.spec.summary()
    assert summ["generator_families"] == ["E", "F", "T"]
    assert len(summ["toral_lattice_basis"]) == 2


def test_borel_plus_generators():
    h = _h("A2", flavor="borel_plus")
    assert h.system.has_E and not h.system.has_F


def test_basic_hopf_values():
    h = _h("A2")
    s = h.spec
    one = s.one()
    assert h.coproduct(one) == TensorElement.pure(one, one)
    assert h.counit(one).is_one()
    assert h.antipode(one) == one
    for i in range(2):
        a = rm.unit(2, i)
        assert h.coproduct(s.F(i)) == TensorElement.pure(s.F(i), s.L(a)) + TensorElement.pure(one, s.F(i))
        assert h.coproduct(s.E(i)) == TensorElement.pure(s.E(i), one) + TensorElement.pure(s.K(a), s.E(i))


def test_coproduct_of_square_is_q_binomial():
    h = _h("A1", [[2]])
    s = h.spec
    E, K, one = s.E(0), s.K((1,)), s.one()
    q2 = s.q(-2)
    want = TensorElement.pure(E * E, one) + TensorElement.pure(K * E, E) * (1 + q2) + TensorElement.pure(K * K, E * E)
    assert h.coproduct(E * E) == want


@pytest.mark.parametrize("name, R", [("A1", None), ("A2", R_EX)])
def test_hopf_axioms_examples(name, R):
    rep = check_hopf_axioms(_h(name, R), 4)
    assert rep.words_checked > 0 and rep.relations_checked > 0
    assert rep.clean, rep.failures[:3]


def test_hopf_axioms_larger_torus():
    c = build_cartan("B2")
    P = weight_lattice(c)
    assert check_hopf_axioms(build_mpquea(c, c.DA, P, P), 3).clean


def test_corrupted_coproduct_detected():
    good = _h("A2")
    s = good.spec
    e = Word((), None, (0,))

    def bad_delta(i):
        if i == 0:
            return {(e, ONE_WORD): s.ctx.one, (good._tw(k=(0, 1)), e): s.ctx.one}
        return good._std_delta_E(i)

    bad = HopfSpec(s, delta_E=bad_delta, label="corrupted")
    names = {f[0] for f in check_hopf_axioms(bad, 3).failures}
    assert any(n.startswith("coproduct kills") or n == "coassociativity" for n in names)


def test_iterated_coproduct_slot_choice():
    h = _h("A2")
    s = h.spec
    x = s.E(0) * s.E(1) + s.F(0) * s.K((1, 0))
    assert h.iterated_coproduct(x, 2) == h.iterated_coproduct_right(x, 2)


def test_bialgebra_law():
    h = _h("A2", R_EX)
    assert check_bialgebra_law(h, h.system.basis_words(2)) == []


def test_project_p():
    c = build_cartan("A3")
    s = build_mpquea(c, c.DA).spec
    assert project_p(s, s.K((1, 0, 0)) * s.L((0, 1, 0))) == {(1, 1, 0): 1}
    assert project_p(s, s.E(0) * s.K((0, 0, 1))) == {}
    assert project_p(s, s.one()) == {(0, 0, 0): 1}


S_EX = ((F(1, 2), -1), (F(1, 3), 2))


def test_cocycle_values():
    h = _h("A2")
    s = h.spec
    sig = ToralCocycle(h, S_EX)
    q = sig._ctx().q_power
    anything = s.K((1, 1)) + s.F(0)
    assert cocycle_eval(sig, s.E(0), anything).is_zero()
    assert cocycle_eval(sig, s.K((1, 0)), s.F(1)).is_zero()
    for i in range(2):
        for j in range(2):
            Ki, Kj, Lj = s.K(rm.unit(2, i)), s.K(rm.unit(2, j)), s.L(rm.unit(2, j))
            assert cocycle_eval(sig, Ki, Lj) == cocycle_eval(sig, Ki, Kj) == q(S_EX[i][j])
            assert cocycle_inverse_eval(sig, Ki, Kj) == q(-S_EX[i][j])
    for x in [s.one(), s.K((1, 0)), s.E(1), s.F(0) * s.L((0, 1))]:
        assert cocycle_eval(sig, s.one(), x) == h.counit(x)


def test_cocycle_identity_a1():
    h = _h("A1", [[2]])
    assert cocycle_identity_check(ToralCocycle(h, [[F(2, 3)]]), 3).clean


def test_non_bimultiplicative_table_detected():
    h = _h("A1", [[2]])
    sig = ToralCocycle(h, [[0]], table=lambda g, d: g[0] * g[0] * d[0])
    assert not cocycle_identity_check(sig, 3).clean


def test_deformed_product_examples():
    h = _h("A2")
    s = h.spec
    sig = ToralCocycle(h, S_EX)
    q = sig._ctx().q_power
    Ka, Kb = s.K((1, 0)), s.K((0, 1))
    assert deformed_product(sig, Ka, Kb) == Ka * Kb
    for i in range(2):
        for j in range(2):
            Ki = s.K(rm.unit(2, i))
            # Delta(F_j) carries L_j and p(L_j) = G_j, so the scalar is q^(-s_ij)
            assert deformed_product(sig, Ki, s.F(j)) == Ki * s.F(j) * q(-S_EX[i][j])
    x = s.E(0) * s.F(1) + s.K((1, 1))
    assert deformed_product(sig, s.one(), x) == x == deformed_product(sig, x, s.one())


def test_deformed_antipode_is_convolution_inverse():
    h = _h("A2")
    s = h.spec
    sig = ToralCocycle(h, S_EX)
    for x in [s.E(0), s.F(1), s.K((1, 0)), s.L((0, 1))]:
        sx = deformed_antipode(sig, x)
        total = s.system.zero()
        for (a, b), c in h.delta_word(next(iter(x.terms))).items():
            total = total + deformed_product(sig, deformed_antipode(sig, s.system.element({a: c})), s.system.element({b: s.ctx.one}))
        assert total == s.scalar(h.counit(x))
        assert sx.terms


def _word(system, letters):
    (w,) = system.word(letters).terms
    return w


def test_pairing_generator_values():
    c = build_cartan("A2")
    R = R_EX
    ctx = pairing_context(c, R)
    P, N = ctx.positive.spec, ctx.negative.spec
    q = ctx.ctx.q_power
    for i in range(2):
        for j in range(2):
            want = -q(R[i][i]) / (q(R[i][i]) - 1) if i == j else ctx.ctx.zero
            assert pairing_eval(ctx, P.E(i), N.F(j)) == want
    assert pairing_eval(ctx, P.K((1, 1)), N.L((1, 0))) == q(R[0][0] + R[1][0])
    assert pairing_eval(ctx, P.E(0), N.F(0) * N.F(1)).is_zero()
    assert pairing_eval(ctx, P.E(0), N.L((1, 0))).is_zero()
    ek, fl = P.E(0) * P.K((0, 1)), N.F(0) * N.L((1, 1))
    assert pairing_eval(ctx, ek, fl) == pairing_eval(ctx, P.E(0), N.F(0)) * pairing_eval(ctx, P.K((0, 1)), N.L((1, 1)))
    with pytest.raises(FlavorMismatch):
        pairing_eval(ctx, N.F(0), P.E(0))


def test_canonical_pairing_values():
    c = build_cartan("B2")
    ctx = canonical_pairing_context(c)
    P, N = ctx.positive.spec, ctx.negative.spec
    q = ctx.ctx.q_power
    for i in range(2):
        for j in range(2):
            Kj_minus = N.L(rm.vneg(rm.unit(2, j)))
            assert pairing_eval_canonical(ctx, P.K(rm.unit(2, i)), Kj_minus) == q(-c.D[i] * c.A[i][j])
        qi = q(c.D[i])
        assert pairing_eval_canonical(ctx, P.E(i), N.F(i)) == (qi.inv() - qi).inv()
    y = N.F(1) * N.L((0, -1))
    assert pairing_eval_canonical(ctx, P.one(), y) == ctx.negative.counit(y)
    with pytest.raises(FlavorMismatch):
        pairing_eval_canonical(pairing_context(c, c.DA), P.one(), N.one())


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_pairing_laws(name):
    c = build_cartan(name)
    for ctx in [pairing_context(c, theta(c, [[0, F(1, 6)], [F(-1, 6), 0]])), canonical_pairing_context(c)]:
        xs = ctx.positive.system.basis_words(1) + [_word(ctx.positive.system, [("T", (-1, 0, 0, 0))])]
        ys = ctx.negative.system.basis_words(1)
        rep = pairing_law_check(ctx, xs, ys)
        assert rep.checked > 0 and rep.clean, rep.failures[:3]


def test_grading_orthogonality_without_shortcut():
    c = build_cartan("A2")
    ctx = pairing_context(c, R_EX)
    ctx.short_circuit = False
    xs = ctx.positive.system.basis_words(3)
    ys = ctx.negative.system.basis_words(3)
    for x in xs:
        for y in ys:
            if sorted(x.e) != sorted(y.f):
                assert ctx.eval_words(x, y).is_zero()


@pytest.mark.parametrize("R", [None, R_EX])
def test_double_cross_reproduces_commutator(R):
    c = build_cartan("A2")
    R = c.DA if R is None else R
    ctx = pairing_context(c, R)
    full = build_mpquea(c, R)
    rep = double_cross_check(full, ctx, 2)
    assert rep.checked > 0 and rep.clean
    s = full.spec
    for i in range(2):
        for j in range(2):
            comm = s.E(i) * s.F(j) - s.F(j) * s.E(i)
            assert comm == (predicted_commutator(full, ctx, i) if i == j else s.system.zero())


def test_double_cross_literal_orientation_fails():
    c = build_cartan("A1")
    ctx = pairing_context(c, [[2]])
    assert not double_cross_check(build_mpquea(c, [[2]]), ctx, 2, orientation="literal").clean


def test_quotient_classical():
    c = build_cartan("A2")
    h = quotient_to_g(c, rm.zeros(2))
    s = h.spec
    for i in range(2):
        a = rm.unit(2, i)
        assert s.L(a) * s.K(a) == s.one()
    assert check_hopf_axioms(h, 3).clean
    single = build_jimbo_single(c)
    assert single.spec.L((1, 0)) * single.spec.K((1, 0)) == single.spec.one()


def test_quotient_requires_stable_lattice(A2, psi_a2):
    with pytest.raises(PsiNotStable):
        quotient_to_g(A2, psi_a2, root_lattice(A2))


@given(antisymmetric(2, allow_zero=False))
def test_hopf_axioms_on_theta_images(psi):
    c = build_cartan("A2")
    h = build_mpquea(c, theta(c, psi))
    assert check_hopf_axioms(h, 2).clean


def test_cocycle_identity_random_samples():
    h = _h("A2")
    rng = np.random.default_rng(3)
    rep = cocycle_identity_check(ToralCocycle(h, S_EX), 1, rng=rng, samples=20)
    assert rep.triples_checked > 20 and rep.clean
