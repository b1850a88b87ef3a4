from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpquea import build_cartan
from mpquea import ratmat as rm
from mpquea.cartan import fundamental_weights, root_pairing
from mpquea.errors import Decomposable, DimensionMismatch, NotFiniteType, NotGCM, NotSymmetrizable

NAMES = ["A1", "A2", "A3", "B2", "C3", "D4", "G2"]


@pytest.mark.parametrize(
    "A, D, finite",
    [
        ([[2]], (1,), True),
        ([[2, -1], [-1, 2]], (1, 1), True),
        ([[2, -2], [-1, 2]], (1, 2), True),
        ([[2, -2], [-2, 2]], (1, 1), False),
    ],
)
def test_symmetrizer_and_type(A, D, finite):
    c = build_cartan(A)
    assert c.D == D
    assert c.finite_type is finite


def test_affine_is_rejected_where_finite_needed():
    c = build_cartan([[2, -2], [-2, 2]])
    with pytest.raises(NotFiniteType):
        c.require_finite()
    with pytest.raises(NotFiniteType):
        fundamental_weights(c)


@pytest.mark.parametrize("name", NAMES)
def test_named_types_are_finite_and_symmetrized(name):
    c = build_cartan(name)
    assert c.finite_type
    assert rm.is_symmetric(c.DA)
    assert all(d > 0 for d in c.D)


def test_named_matches_explicit():
    assert build_cartan("A2").A == build_cartan([[2, -1], [-1, 2]]).A


@pytest.mark.parametrize(
    "A, err",
    [
        ([[2, 1], [1, 2]], NotGCM),
        ([[3]], NotGCM),
        ([[2, -1], [0, 2]], NotGCM),
        ([[2, 0], [0, 2]], Decomposable),
        ([[2, -1, -1], [-1, 2, -1], [-2, -1, 2]], NotSymmetrizable),
        ("E9", NotGCM),
    ],
)
def test_invalid_cartan(A, err):
    with pytest.raises(err):
        build_cartan(A)


def test_root_pairing_examples():
    c = build_cartan("A2")
    assert root_pairing(c, (1, 0), (0, 1)) == -1
    assert root_pairing(c, (0, 0), (3, 5)) == 0
    with pytest.raises(DimensionMismatch):
        root_pairing(c, (1,), (1, 0))


@pytest.mark.parametrize("name", NAMES)
def test_simple_root_norm(name):
    c = build_cartan(name)
    for i in range(c.rank):
        a = c.simple_root(i)
        assert root_pairing(c, a, a) == 2 * c.D[i]


@pytest.mark.parametrize("name", NAMES)
def test_fundamental_weights_dual_to_roots(name):
    c = build_cartan(name)
    W = fundamental_weights(c)
    for i in range(c.rank):
        for j in range(c.rank):
            assert root_pairing(c, W[i], c.simple_root(j)) == (c.D[i] if i == j else 0)


def test_fundamental_weights_small():
    assert fundamental_weights(build_cartan("A1")) == ((Fraction(1, 2),),)
    assert fundamental_weights(build_cartan("A2")) == (
        (Fraction(2, 3), Fraction(1, 3)),
        (Fraction(1, 3), Fraction(2, 3)),
    )


vec3 = st.lists(st.integers(-5, 5), min_size=2, max_size=2)


@given(vec3, vec3)
def test_root_pairing_symmetric(u, v):
    c = build_cartan("G2")
    assert root_pairing(c, u, v) == root_pairing(c, v, u)
