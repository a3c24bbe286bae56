from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adelic.ecoracle import (Curve, count_points, crosscheck_Nk, field, frobenius_spec, frobenius_trace,
                             is_supersingular, multiplication_insep_degree, multiplication_zeta_spec,
                             on_curve, ec_add, ec_mul, points, torsion_count)
from adelic.errors import BudgetExceeded, SingularCurve
from adelic.rational import rationality_test, series_exp
from adelic.zeta import classify_zeta, insep_k, zeta_coeffs

E = Curve(5, 1, 1)
S = Curve(5, 0, 1)


def test_point_counts():
    assert count_points(E, 1) == 9
    assert count_points(E, 2) == 27
    assert count_points(S, 1) == 6
    assert count_points(S, 2) == 36


def test_singular_rejected():
    with pytest.raises(SingularCurve):
        Curve(5, 0, 0)


def test_budget():
    with pytest.raises(BudgetExceeded):
        count_points(E, 9)


def test_frobenius_data():
    assert frobenius_trace(E) == -3
    spec = frobenius_spec(E)
    assert spec.xi[0].field.min_poly == (5, 3, 1)
    assert frobenius_trace(S) == 0
    assert frobenius_spec(S).xi[0].field.min_poly == (5, 0, 1)
    assert is_supersingular(S) and not is_supersingular(E)
    for c in (E, S):
        xi = frobenius_spec(c).xi[0]
        assert xi.norm() == 5  # |xi|^2 = p


def test_crosschecks():
    assert crosscheck_Nk(E, 4).ok
    rep = crosscheck_Nk(S, 4)
    assert rep.ok and rep.rows[1][1] == 36
    assert crosscheck_Nk(Curve(7, 3, 2), 3).ok


def test_torsion():
    assert torsion_count(E, 5, 4) == 5
    for r in (1, 2, 3, 4):
        assert torsion_count(S, 5, r) == 1
    assert torsion_count(E, 3, 2) == 9
    assert torsion_count(S, 3, 2) == 9
    assert torsion_count(E, 2, 3) == 4
    assert torsion_count(S, 2, 2) == 4


def test_multiplication_model():
    assert multiplication_insep_degree(E, 5) == 5
    assert multiplication_insep_degree(S, 5) == 25
    assert multiplication_insep_degree(E, 3) == 1
    spec = multiplication_zeta_spec(E, 6)
    assert spec.r == (5,) and spec.s == (-1,)
    assert insep_k(spec, 1) == 5
    assert classify_zeta(spec).kind == "NaturalBoundary"


def test_group_law():
    F = field(5, 2)
    pts = points(E, 2)
    assert len(pts) == 27
    for P in pts[:10]:
        assert ec_mul(E, F, 27, P) is None
        for Q_ in pts[:10]:
            R = ec_add(E, F, P, Q_)
            assert on_curve(E, F, R)
            assert R == ec_add(E, F, Q_, P)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([5, 7, 11, 13]), st.integers(0, 12), st.integers(0, 12))
def test_hasse_and_crosscheck(p, a, b):
    try:
        c = Curve(p, a, b)
    except SingularCurve:
        return
    t = frobenius_trace(c)
    assert t * t <= 4 * p
    assert crosscheck_Nk(c, 2).ok


def test_weil_zeta_from_enumeration():
    counts = [count_points(E, k) for k in range(1, 9)]
    Z = series_exp([Fraction(0)] + [Fraction(c, k) for k, c in enumerate(counts, start=1)], 8)
    assert Z == zeta_coeffs(frobenius_spec(E), 8)
    rf = rationality_test(Z, 4, guard=2)
    assert rf is not None and rf.den == (1, -6, 5)
