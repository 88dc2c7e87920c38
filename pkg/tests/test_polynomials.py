"""Integer and rational polynomial arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona.polynomials import (
    IntegerPolynomial,
    rat_divmod,
    rat_eval,
    rat_gcd_monic,
    rat_mul,
    rat_trim,
    rat_xgcd,
)

small_polys = st.lists(st.integers(-9, 9), min_size=0, max_size=6).map(
    IntegerPolynomial
)
nonzero_polys = small_polys.filter(lambda p: not p.is_zero())


def test_monomial_and_degree():
    p = IntegerPolynomial.monomial(3, 2)
    assert p.coeffs == (0, 0, 0, 2)
    assert p.degree == 3
    assert IntegerPolynomial([]).degree == -1
    assert IntegerPolynomial.one().coeffs == (1,)


def test_trailing_zeros_trimmed():
    assert IntegerPolynomial([1, 2, 0, 0]).coeffs == (1, 2)


def test_evaluation_and_sign():
    p = IntegerPolynomial([-2, 0, 1])  # x^2 - 2
    assert p(2) == 2
    assert p.sign_at(Fraction(1)) == -1
    assert p.sign_at(Fraction(3, 2)) == 1
    assert IntegerPolynomial([0, 1]).sign_at(Fraction(0)) == 0


def test_divmod_exact_and_try_divide():
    a = IntegerPolynomial([-1, 0, 0, 1])  # x^3 - 1
    b = IntegerPolynomial([-1, 1])  # x - 1
    quot = a.try_divide(b)
    assert quot == IntegerPolynomial([1, 1, 1])
    assert a.try_divide(IntegerPolynomial([1, 1, 1, 7])) is None


def test_derivative_reciprocal_content():
    p = IntegerPolynomial([1, -1, -1, 1])
    assert p.derivative() == IntegerPolynomial([-1, -2, 3])
    assert p.is_reciprocal()
    assert not IntegerPolynomial([1, 2]).is_reciprocal()
    assert IntegerPolynomial([6, -9, 12]).content() == 3


@given(small_polys, nonzero_polys)
@settings(max_examples=150, deadline=None)
def test_product_division_roundtrip(a, b):
    quot = (a * b).try_divide(b)
    assert quot == a


@given(small_polys, small_polys, st.integers(-5, 5))
@settings(max_examples=150, deadline=None)
def test_ring_identities(a, b, x):
    assert (a + b)(x) == a(x) + b(x)
    assert (a * b)(x) == a(x) * b(x)
    assert (a - b)(x) == a(x) - b(x)


def _rp(*coeffs):
    return rat_trim([Fraction(c) for c in coeffs])


def test_rat_divmod_reconstruction():
    a = _rp(1, 0, -3, 1)
    b = _rp(-1, 1)
    q, r = rat_divmod(a, b)
    from cremona.polynomials import rat_add

    assert rat_add(rat_mul(q, b), r) == a


def test_rat_xgcd_bezout():
    a = _rp(-1, 0, 1)  # x^2 - 1
    b = _rp(-1, 1)  # x - 1
    g, s, t = rat_xgcd(a, b)
    from cremona.polynomials import rat_add

    assert rat_add(rat_mul(s, a), rat_mul(t, b)) == g
    # gcd of x^2 - 1 and x - 1 is x - 1 (monic)
    assert g == _rp(-1, 1)


def test_rat_gcd_coprime_is_one():
    g = rat_gcd_monic(_rp(-2, 0, 1), _rp(-1, 1))
    assert g == _rp(1)


def test_rat_eval():
    assert rat_eval(_rp(1, 2, 1), Fraction(2)) == 9


def test_divmod_exact_rejects_inexact():
    a = IntegerPolynomial([1, 1])
    b = IntegerPolynomial([0, 2])
    assert a.divmod_exact(b) is None or a.try_divide(b) is None
