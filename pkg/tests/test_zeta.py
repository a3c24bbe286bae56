from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adelic.dichotomy import NATURAL_BOUNDARY, RATIONAL
from adelic.errors import NonIntegerFixedPointCount, RootOfUnityInput
from adelic.numfield import nf_create
from adelic.rational import series_exp
from adelic.zeta import (ZetaSpec, check_log_derivative, classify_zeta, deg_k, fixed_point_series,
                         insep_k, lambda_radius, log_coeffs, zeta_coeffs)

from _util import Q

K = nf_create((5, 3, 1))  # Frobenius pair of y^2 = x^3 + x + 1 over F_5
XI = K.gen()
PAIR = (XI, -3 - XI)


def test_deg_k():
    spec = ZetaSpec.separable(PAIR, 5)
    assert deg_k(spec, 1) == 9
    assert deg_k(spec, 2) == 27
    assert deg_k(ZetaSpec.separable((Q(2), Q(3))), 1) == 2


def test_insep_k():
    assert insep_k(ZetaSpec.separable((Q(2),)), 7) == 1
    assert insep_k(ZetaSpec((Q(2),), 3, (1,), (-1,)), 9) == 9
    assert insep_k(ZetaSpec((Q(2),), 5, (1,), (-1,)), 5) == 5


def test_lambda_radius():
    assert lambda_radius(ZetaSpec.separable((Q(2), Q(3)))).contains(Fraction(1, 6))
    assert lambda_radius(ZetaSpec.separable(PAIR, 5)).contains(Fraction(1, 5))
    assert lambda_radius(ZetaSpec.separable((Q(2), Q(Fraction(1, 2))))).contains(Fraction(1, 2))


def test_zeta_coefficients():
    Z = zeta_coeffs(ZetaSpec.separable(PAIR, 5), 4)
    assert Z[:2] == [1, 9]
    # N_k = 1 for every k gives 1/(1 - x)
    assert series_exp([0] + [Fraction(1, k) for k in range(1, 11)], 10) == [1] * 11


def test_frobenius_zeta_is_weil():
    spec = ZetaSpec.separable(PAIR, 5)
    Z = zeta_coeffs(spec, 30)
    v = classify_zeta(spec)
    assert v.kind == RATIONAL
    rf = v.witness["Z"]
    assert rf.num == (1, 3, 5) and rf.den == (1, -6, 5)
    assert rf.series(31) == Z


def test_inseparable_is_natural_boundary():
    spec = ZetaSpec((Q(6), Q(11)), 5, (1,), (-1,))
    v = classify_zeta(spec)
    assert v.kind == NATURAL_BOUNDARY
    assert v.radius.contains(Fraction(1, 66))
    assert v.witness["k"] == 5


def test_non_integer_counts_rejected():
    with pytest.raises(NonIntegerFixedPointCount):
        classify_zeta(ZetaSpec((Q(2), Q(3)), 3, (1, Fraction(1, 3)), (0, 0)))


def test_roots_of_unity_rejected():
    with pytest.raises(RootOfUnityInput):
        ZetaSpec.separable((Q(-1),))


def test_log_derivative_identity():
    assert check_log_derivative(ZetaSpec.separable(PAIR, 5), 50)
    assert check_log_derivative(ZetaSpec((Q(6), Q(11)), 5, (1,), (-1,)), 40)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(2, 7), min_size=1, max_size=3))
def test_separable_zeta_rational_with_predicted_poles(xs):
    spec = ZetaSpec.separable(tuple(Q(x) for x in xs))
    v = classify_zeta(spec)
    assert v.kind == RATIONAL
    prod = 1
    for x in xs:
        prod *= x
    assert v.radius.contains(Fraction(1, prod))
    rf = v.witness["Z"]
    assert rf.series(40) == zeta_coeffs(spec, 39)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(2, 9), min_size=1, max_size=2), st.integers(1, 30))
def test_log_inverts_exp(xs, N):
    spec = ZetaSpec.separable(tuple(Q(x) for x in xs))
    a = log_coeffs(zeta_coeffs(spec, N), N)
    F = fixed_point_series(spec, N)
    assert [k * a[k] for k in range(N + 1)] == F
