from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adelic.errors import ReduciblePolynomial, ZeroInput
from adelic.numfield import (compare_abs, field_arithmetic, height, is_root_of_unity, mahler_measure,
                             nf_create, rationals)
from adelic.realalg import LogAlgebraic, RealAlgebraic

from _util import KZ, Q, ZETA

small = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def test_degree_one_field():
    K = nf_create((-1, 1))
    assert K.degree == 1
    assert K(3) * K(Fraction(1, 3)) == K.one()


def test_cyclotomic_field_embeddings():
    assert KZ.degree == 2
    assert KZ.n_real == 0
    assert KZ.n_complex == 1


def test_reducible_rejected():
    with pytest.raises(ReduciblePolynomial):
        nf_create((-1, 0, 1))


def test_zeta_arithmetic():
    z = ZETA
    assert field_arithmetic(z, z, "mul") == -1 - z
    assert field_arithmetic(z, z * z, "add") == KZ(-1)
    assert field_arithmetic(Q(Fraction(1, 2)), Q(2), "mul") == Q(1)
    assert field_arithmetic(Q(1), Q(4), "div") == Q(Fraction(1, 4))


def test_roots_of_unity():
    assert is_root_of_unity(ZETA) == 3
    assert is_root_of_unity(KZ(-1)) == 2
    assert is_root_of_unity(Q(-1)) == 2
    assert is_root_of_unity(Q(2)) is None
    assert is_root_of_unity(-ZETA) == 6


def test_heights():
    assert height(Q(Fraction(1, 2))) == LogAlgebraic(RealAlgebraic.from_rational(2), 1)
    assert height(ZETA).is_zero()
    h = height(5 * ZETA)
    assert h == LogAlgebraic(RealAlgebraic.from_rational(5), 1)
    assert abs(float(h) - 1.6094379124341003) < 1e-12
    with pytest.raises(ZeroInput):
        height(Q(0))


def test_compare_abs_examples():
    assert compare_abs(5 * ZETA, 5 * ZETA * ZETA, 0) == 0
    assert compare_abs(Q(Fraction(1, 2)), Q(5), 0) < 0
    assert compare_abs(Q(2), Q(-2), 0) == 0


def test_mahler_measure_of_quadratic():
    # x^2 - 3x + 1 has roots (3 +- sqrt5)/2, measure (3 + sqrt5)/2
    m = mahler_measure([1, -3, 1])
    assert abs(float(m) - (3 + 5 ** 0.5) / 2) < 1e-12


@settings(max_examples=25, deadline=None)
@given(small, small, st.integers(0, 5))
def test_height_invariant_under_roots_of_unity(a, b, k):
    x = KZ([a, b])
    if x.is_zero():
        return
    w = ZETA ** k * (-1) ** k
    assert height(w * x) == height(x)


@settings(max_examples=15, deadline=None)
@given(small, small, st.integers(1, 4))
def test_height_of_power(a, b, k):
    x = KZ([a, b])
    if x.is_zero():
        return
    assert height(x ** k) == height(x) * k


@settings(max_examples=30, deadline=None)
@given(small, small)
def test_root_of_unity_order_is_exact(a, b):
    x = KZ([a, b])
    if x.is_zero():
        return
    N = is_root_of_unity(x)
    if N is not None:
        assert x ** N == KZ.one()
        assert all(x ** j != KZ.one() for j in range(1, N))


@settings(max_examples=30, deadline=None)
@given(small, small, small, small)
def test_compare_abs_consistent_with_norms(a, b, c, d):
    # in an imaginary quadratic field |sigma(x)|^2 is the norm
    x, y = KZ([a, b]), KZ([c, d])
    expected = (x.norm() > y.norm()) - (x.norm() < y.norm())
    assert compare_abs(x, y, 0) == expected


@settings(max_examples=40, deadline=None)
@given(small, small, small, small)
def test_field_axioms(a, b, c, d):
    x, y = KZ([a, b]), KZ([c, d])
    assert x * y == y * x
    assert (x + y) - y == x
    if not y.is_zero():
        assert (x / y) * y == x
    assert (x * y).norm() == x.norm() * y.norm()


def test_rationals_singleton_behaviour():
    assert rationals().degree == 1
