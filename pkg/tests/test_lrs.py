from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adelic.lrs import (ZERO, PolyExpSeq, essential_part, from_xi_product, growth_check,
                        is_nondegenerate, is_v_stable, is_v_stable_bruteforce, section, seq_add,
                        seq_mul, term)
from adelic.places import arch_places, place_from_selector, places_above
from adelic.powerproduct import PowerProduct

from _util import KZ, Q, ZETA, mixed_sequence, seq

INF = place_from_selector(Q, "inf:0")


def test_terms():
    u = mixed_sequence()
    assert term(u, 0) == KZ(1 + 1 + 1 + 2 + 3)
    assert term(u, 3) == KZ(750)
    assert term(seq(Q, (1, 2), (1, 1)), 5) == Q(33)


def test_add():
    assert seq_add(seq(Q, (1, 2)), seq(Q, (-1, 2))) is ZERO
    s = seq_add(seq(Q, (1, 2), (1, 1)), seq(Q, (1, 3)))
    assert s == seq(Q, (1, 2), (1, 3), (1, 1))
    assert seq_add(seq(Q, ([0, 1], 2)), seq(Q, (1, 2))) == seq(Q, ([1, 1], 2))


def test_mul():
    u = seq(Q, (1, 2), (1, -2), (1, 1))
    t = seq(Q, (1, 2), (-1, -2))
    assert seq_mul(u, t) == t
    assert seq_mul(seq(Q, (1, 2)), seq(Q, (1, 3))) == seq(Q, (1, 6))
    assert seq_mul(seq(Q, (1, 2), (1, -2)), t) is ZERO


def test_sections():
    u = seq(Q, (1, 2), (1, -2))
    assert section(u, 2, 0) == seq(Q, (2, 4))
    assert section(u, 2, 1) is ZERO
    ess = essential_part(mixed_sequence(), place_from_selector(KZ, "2:0"))
    assert section(ess.sequence, 2, 1) is ZERO


def test_essential_parts():
    u = mixed_sequence()
    e2 = essential_part(u, place_from_selector(KZ, "2:0"))
    assert set(map(str, e2.roots)) == {str(KZ(Fraction(1, 2))), str(KZ(Fraction(-1, 2)))}
    assert e2.M == PowerProduct.prime_power(2, 1)
    einf = essential_part(u, place_from_selector(KZ, "inf:0"))
    assert len(einf.roots) == 3 and float(einf.M) == pytest.approx(5)
    e = essential_part(seq(Q, (1, 2), (1, 1)), INF)
    assert e.roots == [Q(2)] and float(e.M) == 2


def test_mixed_sequence_stability():
    u = mixed_sequence()
    v2 = is_v_stable(u, place_from_selector(KZ, "2:0"))
    assert not v2.stable and v2.L == 2 and v2.witness == 1
    vinf = is_v_stable(u, place_from_selector(KZ, "inf:0"))
    assert vinf.stable and vinf.L == 3
    assert vinf.normalized_section_coefficients(KZ(5)) == {0: KZ(6), 1: -ZETA - 2, 2: ZETA - 1}


def test_nondegenerate():
    assert is_nondegenerate(seq(Q, (1, 2), (1, 3)))
    assert not is_nondegenerate(seq(Q, (1, 2), (1, -2)))
    assert not is_nondegenerate(mixed_sequence())


def test_nondegenerate_is_stable_everywhere():
    u = seq(Q, (1, 2), (1, 3), ([1, 1], 5))
    for sel in ("2:0", "3:0", "5:0", "7:0", "inf:0"):
        assert is_v_stable(u, place_from_selector(Q, sel)).stable


def test_growth_examples():
    u = from_xi_product([Q(2)])
    rep = growth_check(u, INF, Fraction(3, 2), (0, 200))
    assert rep.confined and rep.threshold <= 5
    w3 = place_from_selector(Q, "3:0")
    rep = growth_check(seq(Q, (1, 2), (-1, 1)), w3, Fraction(1, 2), (1, 100))
    assert rep.failures == []
    u = mixed_sequence()
    rep = growth_check(u, place_from_selector(KZ, "2:0"), Fraction(3, 2), (0, 200))
    assert rep.recurrent
    # every odd n fails (the odd section of the essential part vanishes)
    assert set(range(1, 201, 2)) <= set(rep.failures)
    assert max(n for n in rep.failures if n % 2 == 0) <= 2


def test_from_xi_product():
    assert from_xi_product([Q(2)]) == seq(Q, (1, 2), (-1, 1))
    assert from_xi_product([Q(2), Q(3)]) == seq(Q, (1, 6), (-1, 3), (-1, 2), (1, 1))
    u = from_xi_product([Q(2), Q(-2)])
    for n in range(9):
        assert term(u, n) == Q((2 ** n - 1) * ((-2) ** n - 1))


def test_essential_parts_need_stability():
    u = seq(Q, (1, 2), (1, -2), (1, 1))
    t = seq(Q, (1, 2), (-1, -2))
    eu, et = essential_part(u, INF), essential_part(t, INF)
    assert seq_mul(eu.sequence, et.sequence) is ZERO
    assert essential_part(seq_mul(u, t), INF).sequence == t


coef = st.integers(-3, 3).filter(bool)
root = st.sampled_from([1, 2, 3, -2, Fraction(1, 2), Fraction(-1, 3), 5])


@st.composite
def sequences(draw, max_terms=3):
    roots = draw(st.lists(root, min_size=1, max_size=max_terms, unique=True))
    return PolyExpSeq.make(Q, [([Q(draw(coef)), Q(draw(st.integers(-1, 1)))], Q(r)) for r in roots])


@settings(max_examples=40, deadline=None)
@given(sequences(), sequences())
def test_ring_operations_are_termwise(a, b):
    s, p = seq_add(a, b), seq_mul(a, b)
    for n in range(0, 51, 5):
        x, y = term(a, n), term(b, n)
        assert (Q(0) if s is ZERO else term(s, n)) == x + y
        assert (Q(0) if p is ZERO else term(p, n)) == x * y


@settings(max_examples=40, deadline=None)
@given(sequences(), st.integers(1, 4), st.integers(0, 3), st.integers(0, 6))
def test_section_consistency(u, a, b, m):
    s = section(u, a, b)
    assert (Q(0) if s is ZERO else term(s, m)) == term(u, a * m + b)


@settings(max_examples=30, deadline=None)
@given(sequences(), st.sampled_from(["2:0", "3:0", "5:0", "inf:0"]))
def test_stability_agrees_with_bruteforce(u, sel):
    w = place_from_selector(Q, sel)
    assert is_v_stable(u, w).stable == is_v_stable_bruteforce(u, w)


@settings(max_examples=25, deadline=None)
@given(sequences(2), sequences(2), st.sampled_from(["2:0", "3:0", "inf:0"]))
def test_stable_product_law(u, t, sel):
    w = place_from_selector(Q, sel)
    if not (is_v_stable(u, w).stable and is_v_stable(t, w).stable):
        return
    prod = seq_mul(u, t)
    assert prod is not ZERO
    lhs = essential_part(prod, w).sequence
    rhs = seq_mul(essential_part(u, w).sequence, essential_part(t, w).sequence)
    assert lhs == rhs
    assert is_v_stable(prod, w).stable


def test_xi_products_stable_on_battery():
    xis = [[Q(2)], [Q(3), Q(5)], [Q(-2)], [KZ(2) + ZETA], [Q(Fraction(3, 2)), Q(7)]]
    for xi in xis:
        u = from_xi_product(xi)
        K = xi[0].field
        battery = [w for p in (2, 3, 7) for w in places_above(K, p)] + arch_places(K)
        for w in battery:
            assert is_v_stable(u, w).stable
