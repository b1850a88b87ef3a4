from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import cartan_and_psi, small_fraction

from mpquea import build_cartan
from mpquea import ratmat as rm
from mpquea.cartan import root_pairing
from mpquea.errors import DimensionMismatch, NotAntisymmetric, RankDeficient
from mpquea.lattice import (
    Lattice,
    LatticeVector,
    TwistMatrix,
    image_lattice,
    lattice_contains,
    lattice_sum,
    psi_apply,
    psi_apply_double_sum,
    psi_matrix,
    q_psi,
    root_lattice,
    stable_closure,
    twisted_basis,
    weight_lattice,
)

F = Fraction


def test_zero_twist_is_zero_map(A2):
    for v in [(1, 0), (2, -3)]:
        assert psi_apply(A2, rm.zeros(2), "+", v) == (0, 0)
        assert psi_apply(A2, rm.zeros(2), "-", v) == (0, 0)


def test_psi_plus_example(A2, psi_a2):
    assert psi_apply(A2, psi_a2, "+", (1, 0)) == (F(-1, 6), F(-1, 3))
    assert psi_apply(A2, psi_a2, "-", (1, 0)) == (F(1, 6), F(1, 3))


def test_psi_apply_lattice_vector_keeps_side(A2, psi_a2):
    v = psi_apply(A2, psi_a2, "+", LatticeVector((1, 0), "plus"))
    assert v.side == "plus"
    assert v.doubled() == (F(-1, 6), F(-1, 3), 0, 0)


def test_psi_apply_dimension(A2, psi_a2):
    with pytest.raises(DimensionMismatch):
        psi_apply(A2, psi_a2, "+", (1, 0, 0))


def test_side_mismatch():
    with pytest.raises(DimensionMismatch):
        LatticeVector((1,), "plus") + LatticeVector((1,), "minus")


def test_twist_matrix_checks():
    with pytest.raises(NotAntisymmetric):
        TwistMatrix([[0, 1], [1, 0]]).require_antisymmetric()
    assert TwistMatrix([[0, F(1, 6)], [F(-1, 4), 0]]).root_denominator == 12


def test_membership_examples(A2):
    Q = root_lattice(A2)
    assert lattice_contains(Q, (1, 1)) == (True, (1, 1))
    assert lattice_contains(Q, (F(1, 2), 0))[0] is False
    G = Lattice.from_basis([(F(1, 2), 0), (0, 1)])
    assert lattice_contains(G, (F(3, 2), 1)) == (True, (3, 1))


def test_rank_deficient_basis():
    with pytest.raises(RankDeficient):
        Lattice.from_basis([(1, 2), (2, 4)])


def test_sum_and_image_examples(A2):
    Q = root_lattice(A2)
    assert lattice_sum(Q, Q).same_span(Q)
    assert image_lattice(rm.identity(2), Q).same_span(Q)
    with pytest.raises(DimensionMismatch):
        lattice_sum(Q, root_lattice(build_cartan("A3")))


def test_weight_lattice_index(A2):
    assert weight_lattice(A2).index_over(root_lattice(A2)) == 3


def test_q_psi_example(A2, psi_a2):
    L = q_psi(A2, psi_a2)
    assert L.contains_lattice(root_lattice(A2))
    assert (F(-1, 6), F(-1, 3)) in L
    assert L.index_over(root_lattice(A2)) == 12


def test_twisted_basis_zero(A2):
    Q = root_lattice(A2)
    tb = twisted_basis(A2, rm.zeros(2), Q, Q)
    assert tb["varpi_plus"] == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert tb["varpi_minus"] == ((0, 0, 1, 0), (0, 0, 0, 1))
    assert tb["tau_plus"] == tb["varpi_plus"]


def test_stable_closure_fails_for_example(A2, psi_a2):
    assert stable_closure(psi_matrix(A2, psi_a2, "+"), root_lattice(A2)) is None


@given(cartan_and_psi(), st.lists(small_fraction, min_size=4, max_size=4))
def test_matrix_and_double_sum_agree(cp, v):
    c, psi = cp
    v = v[: c.rank] + [F(0)] * max(0, c.rank - len(v))
    for sign in "+-":
        assert psi_apply(c, psi, sign, v) == psi_apply_double_sum(c, psi, sign, v)


@given(cartan_and_psi())
def test_psi_minus_is_minus_psi_plus(cp):
    c, psi = cp
    assert psi_matrix(c, psi, "-") == rm.scale(-1, psi_matrix(c, psi, "+"))


@given(cartan_and_psi())
def test_difference_is_skew_for_root_form(cp):
    c, psi = cp
    P = rm.sub(psi_matrix(c, psi, "+"), psi_matrix(c, psi, "-"))
    for i in range(c.rank):
        for j in range(c.rank):
            a, b = c.simple_root(i), c.simple_root(j)
            assert root_pairing(c, rm.matvec(P, a), b) == -root_pairing(c, a, rm.matvec(P, b))


@given(cartan_and_psi())
def test_id_plus_minus_difference_invertible(cp):
    c, psi = cp
    P = rm.sub(psi_matrix(c, psi, "+"), psi_matrix(c, psi, "-"))
    I = rm.identity(c.rank)
    assert rm.det(rm.add(I, P)) != 0
    assert rm.det(rm.sub(I, P)) != 0


@given(cartan_and_psi())
def test_q_psi_contains_images(cp):
    c, psi = cp
    L = q_psi(c, psi)
    for i in range(c.rank):
        assert psi_apply(c, psi, "+", c.simple_root(i)) in L
        assert psi_apply(c, psi, "-", c.simple_root(i)) in L


@given(st.lists(st.tuples(small_fraction, small_fraction), min_size=1, max_size=4))
def test_sum_contains_summands(gens):
    gens = [g for g in gens if any(g)] or [(F(1), F(0))]
    L = Lattice.from_generators(gens, 2)
    Q = Lattice(rm.identity(2), 2)
    S = lattice_sum(L, Q)
    assert S.contains_lattice(L) and S.contains_lattice(Q)
    assert lattice_sum(Q, L).same_span(S)
