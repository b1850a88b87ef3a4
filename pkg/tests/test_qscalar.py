from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpquea.errors import BinomialRange, DivisionByZero, ExponentDenominatorExceedsRoot
from mpquea.qscalar import (
    FieldScalar,
    context,
    q_bracket_binomial,
    q_bracket_factorial,
    q_bracket_number,
    q_paren_binomial,
    q_paren_factorial,
    q_paren_number,
    render_scalar,
    root_order_for,
)


def test_q_power_examples():
    assert context(2).q_power(1) == FieldScalar.t_power(2, 2)
    assert context(6).q_power(Fraction(-1, 3)) == FieldScalar.t_power(-2, 6)
    assert context(1).q_power(0).is_one()


def test_q_power_needs_root():
    with pytest.raises(ExponentDenominatorExceedsRoot):
        context(2).q_power(Fraction(1, 3))


def test_field_arithmetic_examples():
    ctx = context(1)
    t = ctx.q_power(1)
    assert (t - 1).inv() * (t * t - 1) == t + 1
    x = t * t - 3 * t + ctx.const(Fraction(1, 2))
    assert (x + (-x)).is_zero()
    h = context(2).q_power(Fraction(1, 2))
    assert h * h == ctx.q_power(1)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        context(1).zero.inv()


def test_mixed_root_orders_lift():
    a = context(2).q_power(Fraction(1, 2))
    b = context(3).q_power(Fraction(1, 3))
    assert (a * b) == context(6).q_power(Fraction(5, 6))


def test_root_order_for():
    assert root_order_for([[0, Fraction(1, 6)], [Fraction(-1, 4), 2]]) == 12


def test_q_numbers_examples():
    q = context(1).q_power(1)
    assert q_paren_number(3, q) == 1 + q + q * q
    assert q_paren_number(0, q).is_one()
    assert q_paren_binomial(2, 1, q) == 1 + q
    assert q_bracket_number(2, q) == q.inv() + q
    assert q_bracket_binomial(5, 0, q).is_one()
    assert q_paren_number(3, q * q) == q * q * q_bracket_number(3, q)


def test_binomial_range():
    q = context(1).q_power(1)
    with pytest.raises(BinomialRange):
        q_paren_binomial(2, 3, q)
    with pytest.raises(BinomialRange):
        q_bracket_number(-1, q)


def test_render():
    ctx = context(2)
    assert render_scalar(ctx.q_power(1)) == "q"
    assert render_scalar(ctx.q_power(Fraction(1, 2))) == "q^(1/2)"


@given(st.integers(0, 7), st.integers(0, 7))
def test_bracket_binomial_symmetric_and_pascal(n, k):
    q = context(1).q_power(1)
    if k > n:
        n, k = k, n
    assert q_bracket_binomial(n, k, q) == q_bracket_binomial(n, n - k, q)
    if 0 < k < n:
        lhs = q_paren_binomial(n, k, q)
        rhs = q_paren_binomial(n - 1, k - 1, q) + q**k * q_paren_binomial(n - 1, k, q)
        assert lhs == rhs


@given(st.integers(-20, 20), st.integers(-20, 20), st.sampled_from([1, 2, 3, 4, 6, 12]))
def test_q_power_is_a_homomorphism(a, b, N):
    ctx = context(N)
    x, y = Fraction(a, N), Fraction(b, N)
    assert ctx.q_power(x) * ctx.q_power(y) == ctx.q_power(x + y)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4), st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_field_axioms_on_polynomials(a, b):
    x = FieldScalar(a)
    y = FieldScalar(b)
    assert x * y == y * x
    assert (x + y) - y == x
    if not y.is_zero():
        assert (x / y) * y == x


def test_factorial_identity_small():
    q = context(2).q_power(Fraction(1, 2))
    assert q_paren_factorial(3, q * q) == q**3 * q_bracket_factorial(3, q)
