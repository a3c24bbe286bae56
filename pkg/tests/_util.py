"""Small builders shared by the test modules."""
from fractions import Fraction

from adelic.lrs import PolyExpSeq
from adelic.numfield import nf_create, rationals

Q = rationals()
KZ = nf_create((1, 1, 1))  # Q(zeta_3)
ZETA = KZ.gen()


def seq(K, *terms):
    """seq(K, (coeff, root), ...) with constant coefficient polynomials;
    a coefficient given as a list is a polynomial in n."""
    out = []
    for c, r in terms:
        poly = [K(x) for x in c] if isinstance(c, list) else [K(c)]
        out.append((poly, K(r) if not hasattr(r, "field") else r))
    return PolyExpSeq.make(K, out)


def mixed_sequence():
    """(1/2)^n + (-1/2)^n + 5^n + 2 (5z)^n + 3 (5z^2)^n over Q(zeta_3)."""
    z = ZETA
    return PolyExpSeq.make(KZ, [([KZ(1)], KZ(Fraction(1, 2))), ([KZ(1)], KZ(Fraction(-1, 2))),
                                ([KZ(1)], KZ(5)), ([KZ(2)], 5 * z), ([KZ(3)], 5 * z * z)])


def vp(n, p):
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
