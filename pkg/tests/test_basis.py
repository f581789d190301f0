from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from charlier_sobolev.basis import (
    FactorialPolynomial,
    coefficient_residual,
    falling_factorial,
    linearize,
    pochhammer,
    stirling1,
    stirling2,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(rationals, min_size=0, max_size=8).map(FactorialPolynomial)
points = st.integers(-30, 30).map(Fraction) | rationals


def test_falling_factorial_values():
    assert falling_factorial(0, 7) == 1
    assert falling_factorial(3, 5) == 60
    assert falling_factorial(4, 2) == 0
    assert falling_factorial(2, Fraction(1, 2)) == Fraction(-1, 4)
    assert pochhammer(Fraction(3, 2), 3) == Fraction(3, 2) * Fraction(5, 2) * Fraction(7, 2)


def test_stirling_tables():
    assert [stirling1(5, k) for k in range(6)] == [0, 24, -50, 35, -10, 1]
    assert [stirling2(5, k) for k in range(6)] == [0, 1, 15, 25, 10, 1]
    assert stirling1(0, 0) == stirling2(0, 0) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.integers(0, 12), points)
def test_linearization_pointwise(n, m, x):
    lhs = falling_factorial(n, x) * falling_factorial(m, x)
    assert lhs == sum(w * falling_factorial(k, x) for k, w in linearize(n, m))


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_product_pointwise(p, q, x):
    assert (p * q)(x) == p(x) * q(x)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_monomial_roundtrip(p):
    assert FactorialPolynomial.from_monomial(p.to_monomial()) == p


@settings(max_examples=60, deadline=None)
@given(polys, points)
def test_monomial_pointwise(p, x):
    assert sum(c * x**k for k, c in enumerate(p.to_monomial())) == p(x)


@settings(max_examples=60, deadline=None)
@given(polys, points, st.integers(-6, 6))
def test_difference_operators(p, x, a):
    assert p.delta()(x) == p(x + 1) - p(x)
    assert p.nabla()(x) == p(x) - p(x - 1)
    assert p.shift()(x) == p(x + 1)
    assert p.translate(a)(x) == p(x + a)
    assert p.times_x()(x) == x * p(x)


@given(polys)
def test_shift_is_identity_plus_delta(p):
    assert p.shift() == p + p.delta()


def test_delta_lowers_basis():
    assert FactorialPolynomial.basis(5).delta() == FactorialPolynomial.basis(4) * 5


def test_degree_and_zero():
    zero = FactorialPolynomial([0, 0])
    assert zero.degree == -1
    assert FactorialPolynomial([1, 2, 0]).degree == 1
    assert FactorialPolynomial([1, 2])[7] == 0


def test_coefficient_residual():
    p = FactorialPolynomial([1, 2, 3])
    assert coefficient_residual(p, FactorialPolynomial([1, 2]), FactorialPolynomial([0, 0, 3])) == 0
    assert coefficient_residual(p, FactorialPolynomial([1, 2, 2])) == Fraction(1, 3)
