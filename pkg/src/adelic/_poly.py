"""Dense univariate polynomial helpers.

Polynomials are lists of coefficients, lowest degree first.  The helpers work
for any coefficient type closed under ``+ - *`` (and ``/`` for the division
routines): ``Fraction``, ``int``, or :class:`adelic.numfield.AlgebraicNumber`.
The zero polynomial is the empty list.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, gcd


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(trim(p)) - 1


def add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        elif i < len(a):
            out.append(a[i])
        else:
            out.append(b[i])
    return trim(out)


def neg(a):
    return [-c for c in a]


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    return trim([x * c for x in a])


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def divmod_(a, b):
    """Quotient and remainder over a field; ``b`` must be nonzero."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        if lead == 1:
            c = r[-1]
        elif isinstance(lead, int) and isinstance(r[-1], int):
            c = Fraction(r[-1], lead)
        else:
            c = r[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = r[shift + i] - c * y
        r.pop()
        r = trim(r)
    return trim(q), trim(r)


def _div(x, y):
    if isinstance(x, int) and isinstance(y, int):
        return Fraction(x, y)
    return x / y


def monic(a):
    a = trim(a)
    if not a:
        return a
    lead = a[-1]
    return [_div(c, lead) for c in a]


def gcd_(a, b):
    """Monic gcd over a field."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return monic(r0), [_div(c, lead) for c in s0], [_div(c, lead) for c in t0]


def deriv(a):
    return trim([a[i] * i for i in range(1, len(a))])


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def compose_linear(a, s, t):
    """Return the coefficients of ``a(s*x + t)``."""
    out = []
    for c in reversed(a):
        out = add(mul(out, [t, s]), [c])
    return out


def sqf_part(a):
    """Squarefree part over a field of characteristic zero (monic)."""
    a = trim(a)
    if len(a) <= 2:
        return monic(a)
    g = gcd_(a, deriv(a))
    return monic(divmod_(a, g)[0])


def to_fractions(a):
    return [Fraction(c) for c in a]


def primitive_int(a):
    """Scale a rational polynomial to coprime integers with positive lead."""
    a = trim(to_fractions(a))
    if not a:
        return []
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


# -- power sums -------------------------------------------------------------

def power_sums(f, count):
    """Newton power sums ``p_1..p_count`` of the roots of a monic ``f``."""
    f = to_fractions(trim(f))
    d = len(f) - 1
    if f[-1] != 1:
        f = [c / f[-1] for c in f]
    # e_k with sign: f = x^d + c_{d-1} x^{d-1} + ... ; e_k = (-1)^k c_{d-k}
    e = [Fraction(1)] + [(-1) ** k * f[d - k] for k in range(1, d + 1)]
    p = [Fraction(d)]
    for k in range(1, count + 1):
        s = Fraction(0)
        for i in range(1, min(k - 1, d) + 1):
            s += (-1) ** (i - 1) * e[i] * p[k - i]
        if k <= d:
            s += (-1) ** (k - 1) * k * e[k]
        p.append(s)
    return p[1:]


def from_power_sums(ps, d):
    """Monic degree-``d`` polynomial whose roots have power sums ``ps``."""
    e = [Fraction(1)]
    for k in range(1, d + 1):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * ps[i - 1]
        e.append(s / k)
    # x^d - e1 x^{d-1} + e2 x^{d-2} ...
    coeffs = [Fraction(0)] * (d + 1)
    for k in range(d + 1):
        coeffs[d - k] = (-1) ** k * e[k]
    return coeffs


def _elementary_from_sums(q, k):
    e = [Fraction(1)]
    for j in range(1, k + 1):
        s = Fraction(0)
        for i in range(1, j + 1):
            s += (-1) ** (i - 1) * e[j - i] * q[i - 1]
        e.append(s / j)
    return e[k]


def subset_product_poly(f, k):
    """Monic polynomial whose roots are the products over all k-subsets of
    the roots of ``f`` (taken with multiplicity by position)."""
    f = to_fractions(trim(f))
    d = len(f) - 1
    if not 0 <= k <= d:
        raise ValueError("subset size out of range")
    n = comb(d, k)
    if k == 0:
        return [Fraction(-1), Fraction(1)]
    ps = power_sums(f, k * n)
    sums = []
    for m in range(1, n + 1):
        q = [ps[j * m - 1] for j in range(1, k + 1)]
        sums.append(_elementary_from_sums(q, k))
    return from_power_sums(sums, n)


def power_root_poly(f, k):
    """Monic polynomial whose roots are the k-th powers of the roots of ``f``."""
    f = to_fractions(trim(f))
    d = len(f) - 1
    ps = power_sums(f, k * d)
    return from_power_sums([ps[k * j - 1] for j in range(1, d + 1)], d)


def reflect(f):
    """Coefficients of ``f(-x)``."""
    return [c if i % 2 == 0 else -c for i, c in enumerate(f)]


def substitute_square(f):
    """Coefficients of ``f(x^2)``."""
    out = []
    for i, c in enumerate(f):
        out.extend([c] if i == 0 else [0, c])
    return out
