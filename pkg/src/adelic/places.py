"""Places of a number field and p-adic completions at finite precision.

Non-archimedean places come from the factorisation of the defining
polynomial modulo p, lifted to Z_p by Hensel's lemma.  The completion K_w is
presented as Q_p[x]/(G_w) where G_w is the lifted local factor, and local
elements are integer coordinate vectors in the basis 1, theta, ... modulo a
power of p, times an explicit power of p.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import IndexDivisor, OutsideConvergenceDomain, PrecisionLoss, ZeroInput
from .numfield import AlgebraicNumber, NumberField, abs_arch
from .powerproduct import PowerProduct

_X = sympy.Symbol("x")


def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ZeroInput("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_frac(q: Fraction, p: int) -> int:
    q = Fraction(q)
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


# -- polynomials over Z/p^k (lists, low degree first) -------------------------

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m):
    return _ptrim([c % m for c in a])


def _pmul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m)


def _psub(a, b, m):
    n = max(len(a), len(b))
    return _pmod([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], m)


def _padd(a, b, m):
    n = max(len(a), len(b))
    return _pmod([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], m)


def _pdivmod(a, g, m):
    """Division by a polynomial whose leading coefficient is a unit mod m."""
    a = _pmod(a, m)
    g = _pmod(g, m)
    inv = pow(g[-1], -1, m)
    q = [0] * max(len(a) - len(g) + 1, 0)
    r = list(a)
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = (r[-1] * inv) % m
        q[shift] = c
        for i, y in enumerate(g):
            r[shift + i] = (r[shift + i] - c * y) % m
        r = _ptrim(r[:-1]) if r[-1] == 0 else _ptrim(r)
    return _ptrim(q), r


def _pxgcd_field(a, b, p):
    """(s, t) with s*a + t*b = 1 over F_p (a, b coprime)."""
    r0, r1 = _pmod(a, p), _pmod(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    if len(r0) != 1:
        raise ArithmeticError("factors are not coprime mod p")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def _frac_mod(c: Fraction, m: int) -> int:
    return c.numerator * pow(c.denominator, -1, m) % m


def _poly_mod(coeffs, m):
    return [_frac_mod(Fraction(c), m) for c in coeffs]


def hensel_lift(f, factors, p: int, k: int):
    """Lift monic pairwise-coprime factors of ``f`` mod p to factors mod p^k.

    ``f`` is monic with p-integral rational coefficients.  Factors are monic
    integer lists mod p; the result is a list of monic lists mod p^k.
    """
    if len(factors) == 1:
        return [_poly_mod(f, p ** k)]
    g0 = factors[0]
    rest = [1]
    for h in factors[1:]:
        rest = _pmul(rest, h, p)
    g, h = _lift_two(f, g0, rest, p, k)
    return [g] + hensel_lift_from(h, factors[1:], p, k)


def hensel_lift_from(f_int, factors, p, k):
    return hensel_lift([Fraction(c) for c in f_int], factors, p, k)


def _lift_two(f, g, h, p, k):
    s, t = _pxgcd_field(g, h, p)
    g, h = list(g), list(h)
    fk = _poly_mod(f, p ** k)
    pj = p
    for _ in range(1, k):
        m_next = pj * p
        e = _psub(fk, _pmul(g, h, m_next), m_next)
        e = [c // pj for c in e]
        e = _pmod(e, p)
        q, r = _pdivmod(_pmul(t, e, p), g, p)
        dh = _padd(_pmul(e, s, p), _pmul(q, h, p), p)
        g = _padd(g, [c * pj for c in r], m_next)
        h = _padd(h, [c * pj for c in dh], m_next)
        pj = m_next
    return g, h


def _resultant_int(a, b) -> int:
    A = sympy.Poly(list(reversed(a)), _X)
    B = sympy.Poly(list(reversed(b)), _X)
    return int(sympy.resultant(A, B))


# -- places ------------------------------------------------------------------

class Place:
    field: NumberField
    delta: int

    def is_archimedean(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Arch(Place):
    field: NumberField
    index: int
    delta: int

    def is_archimedean(self):
        return True

    @property
    def selector(self) -> str:
        return f"inf:{self.index}"

    def __repr__(self):
        return f"Arch({self.selector}, delta={self.delta})"


@dataclass(frozen=True, eq=False)
class NonArch(Place):
    """A prime above p, given by a residue factor of min_poly mod p."""
    field: NumberField
    p: int
    index: int
    residue_factor: tuple  # monic irreducible mod p
    e: int
    f: int
    _others: tuple = dc_field(default=(), repr=False)  # all (residue_factor^e) in order
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = dc_field(default_factory=threading.Lock, repr=False, compare=False)

    def is_archimedean(self):
        return False

    @property
    def delta(self) -> int:
        return self.e * self.f

    @property
    def selector(self) -> str:
        return f"{self.p}:{self.index}"

    def __eq__(self, other):
        return (isinstance(other, NonArch) and self.field == other.field
                and self.p == other.p and self.index == other.index)

    def __hash__(self):
        return hash((self.field, self.p, self.index))

    def __repr__(self):
        return f"NonArch({self.selector}, e={self.e}, f={self.f})"

    def local_factor(self, k: int):
        """Monic G_w mod p^k (integer list, low degree first)."""
        with self._lock:
            for kk, G in self._cache.items():
                if kk >= k:
                    return [c % self.p ** k for c in G]
        if self.field.degree == 1:
            G = _poly_mod(self.field.min_poly, self.p ** k)
        else:
            lifted = hensel_lift(list(self.field.min_poly), [list(g) for g in self._others], self.p, k)
            G = lifted[self.index]
        with self._lock:
            self._cache[k] = G
        return G


def _factor_mod(coeffs, p):
    P = sympy.Poly(list(reversed(_poly_mod(coeffs, p))), _X, modulus=p)
    _, facs = P.factor_list()
    out = []
    for g, m in facs:
        gl = [int(c) % p for c in reversed(g.all_coeffs())]
        inv = pow(gl[-1], -1, p)
        gl = [c * inv % p for c in gl]
        out.append((gl, m))
    return out


def _factor_key(p):
    # degree first; for linear factors x - r this orders roots ascending
    return lambda item: (len(item[0]), [(-c) % p for c in item[0]])


def _dedekind_ok(coeffs, factors, p) -> bool:
    """Dedekind's criterion: Z[theta] is p-maximal."""
    m = p * p
    fz = _poly_mod(coeffs, m)
    prod_all = [1]
    rad = [1]
    for g, e in factors:
        for _ in range(e):
            prod_all = _pmul(prod_all, g, m)
        rad = _pmul(rad, g, p)
    diff = _psub(prod_all, fz, m)
    if any(c % p for c in diff):
        raise ArithmeticError("factorisation mismatch")
    F = _pmod([c // p for c in diff], p)
    hbar, rem = _pdivmod(_pmod(fz, p), rad, p)
    if rem:
        raise ArithmeticError("radical does not divide")
    g = F
    for other in (rad, hbar):
        a, b = g, other
        while b:
            a, b = b, _pdivmod(a, b, p)[1]
        g = a
    return len(g) <= 1


def places_above(field: NumberField, p: int) -> list:
    """All places of ``field`` above the prime ``p``, in factor order."""
    return list(_places_above(field, p))


@lru_cache(maxsize=None)
def _places_above(field: NumberField, p: int) -> tuple:
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    coeffs = field.min_poly
    if any(c.denominator % p == 0 for c in coeffs):
        raise IndexDivisor(f"generator is not integral at {p}; re-present the field", witness=p)
    if field.degree == 1:
        return [NonArch(field, p, 0, (0, 1), 1, 1, ((0, 1),))]
    facs = sorted(_factor_mod(coeffs, p), key=_factor_key(p))
    if not _dedekind_ok(coeffs, facs, p):
        raise IndexDivisor(f"{p} divides the index [O_K : Z[theta]]; re-present the field", witness=p)
    powered = []
    for g, e in facs:
        ge = [1]
        for _ in range(e):
            ge = _pmul(ge, g, p)
        powered.append(tuple(ge))
    return [NonArch(field, p, i, tuple(g), e, len(g) - 1, tuple(powered))
            for i, (g, e) in enumerate(facs)]


def arch_places(field: NumberField) -> list:
    return [Arch(field, k, field.embedding_delta(k)) for k in range(field.n_real + field.n_complex)]


def place_from_selector(field: NumberField, selector: str) -> Place:
    head, _, idx = selector.partition(":")
    if not idx:
        raise ValueError(f"bad place selector {selector!r}")
    i = int(idx)
    if head == "inf":
        ps = arch_places(field)
    else:
        ps = places_above(field, int(head))
    if not 0 <= i < len(ps):
        raise ValueError(f"place index {i} out of range for {selector!r}")
    return ps[i]


# -- absolute values -----------------------------------------------------------

def _integral_part(a: AlgebraicNumber, p: int):
    """(s, ints, den) with a = p^s * (ints / den), ints integral, den prime to p,
    and not every entry of ints divisible by p."""
    coords = a.coords
    s = min(vp_frac(c, p) for c in coords if c != 0)
    scaled = [c / Fraction(p) ** s for c in coords]
    den = 1
    for c in scaled:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in scaled]
    return s, ints, den


def valuation(a: AlgebraicNumber, w: NonArch) -> Fraction:
    """v_w(a) normalised so that v_w(p) = 1; |a|_w = p^(-v_w(a))."""
    if a.is_zero():
        raise ZeroInput("valuation of zero")
    p = w.p
    if a.field.degree == 1:
        return Fraction(vp_frac(a.coords[0], p))
    s, ints, _den = _integral_part(a, p)
    ints = _ptrim(ints)
    k = 4
    while True:
        G = w.local_factor(k)
        m = p ** k
        if len(G) == 2:
            r = (-G[0]) % m
            val = 0
            for c in reversed(ints):
                val = (val * r + c) % m
            res = val
            deg = 1
        else:
            res = _resultant_int(G, ints) % m if len(ints) > 1 else pow(ints[0], len(G) - 1, m)
            deg = len(G) - 1
        if res != 0:
            return Fraction(s) + Fraction(vp_int(res, p), deg)
        k *= 2


def abs_value(a: AlgebraicNumber, w: Place):
    """|a|_w: an exact PowerProduct (non-archimedean) or RealAlgebraic (archimedean)."""
    if a.is_zero():
        raise ZeroInput("absolute value of zero")
    if isinstance(w, Arch):
        return abs_arch(a, w.index)
    return PowerProduct.prime_power(w.p, -valuation(a, w))


# -- local elements -----------------------------------------------------------

@dataclass(frozen=True)
class LocalElement:
    """p^shift * sum(coords[i] theta^i), coordinates known modulo p^rel.

    ``precision`` is the absolute precision shift + rel."""
    place: NonArch
    shift: int
    coords: tuple
    rel: int

    @property
    def precision(self) -> int:
        return self.shift + self.rel

    @property
    def p(self) -> int:
        return self.place.p

    @property
    def degree(self) -> int:
        return len(self.place.local_factor(1)) - 1

    @staticmethod
    def make(place, shift, coords, rel) -> "LocalElement":
        p = place.p
        if rel <= 0:
            return LocalElement(place, shift + rel, tuple([0] * len(coords)), 0)
        m = p ** rel
        coords = [c % m for c in coords]
        while rel > 0 and all(c % p == 0 for c in coords) and any(coords):
            coords = [c // p for c in coords]
            rel -= 1
            shift += 1
        if not any(coords):
            # zero to the known precision: keep absolute precision, no information
            return LocalElement(place, shift + rel, tuple([0] * len(coords)), 0)
        return LocalElement(place, shift, tuple(coords), rel)

    def is_zero_to_precision(self) -> bool:
        return not any(self.coords)

    def _G(self, k):
        return self.place.local_factor(k)

    def __add__(self, other):
        if isinstance(other, int):
            other = local_constant(self.place, other, self.precision)
        s = min(self.shift, other.shift)
        prec = min(self.precision, other.precision)
        rel = prec - s
        if rel <= 0:
            return LocalElement.make(self.place, prec, [0] * len(self.coords), 0)
        m = self.p ** rel
        a = [c * self.p ** (self.shift - s) for c in self.coords]
        b = [c * self.p ** (other.shift - s) for c in other.coords]
        return LocalElement.make(self.place, s, [(x + y) % m for x, y in zip(a, b)], rel)

    def __neg__(self):
        return LocalElement.make(self.place, self.shift, [-c for c in self.coords], self.rel)

    def __sub__(self, other):
        if isinstance(other, int):
            other = local_constant(self.place, other, self.precision)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return local_constant(self.place, 0, self.precision)
            v = vp_int(other, self.p)
            u = other // self.p ** v
            return LocalElement.make(self.place, self.shift + v, [c * u for c in self.coords], self.rel)
        rel = min(self.rel, other.rel)
        shift = self.shift + other.shift
        if self.is_zero_to_precision() or other.is_zero_to_precision():
            prec = min(self._lb() + other.precision, other._lb() + self.precision)
            return LocalElement(self.place, prec, tuple([0] * len(self.coords)), 0)
        m = self.p ** rel
        G = self._G(rel)
        prod = _pmul(list(self.coords), list(other.coords), m)
        _, r = _pdivmod(prod, G, m)
        r = r + [0] * (len(self.coords) - len(r))
        return LocalElement.make(self.place, shift, r, rel)

    __rmul__ = __mul__

    def _lb(self) -> int:
        return self.precision if self.is_zero_to_precision() else self.shift

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        result = local_constant(self.place, 1, self.precision)
        base = self
        first = True
        while k:
            if k & 1:
                result = base if first else result * base
                first = False
            k >>= 1
            if k:
                base = base * base
        return result

    def divide_exact_int(self, n: int) -> "LocalElement":
        """Divide by a nonzero integer (p-part goes into the shift)."""
        v = vp_int(n, self.p)
        u = n // self.p ** v
        if self.rel == 0:
            return LocalElement(self.place, self.shift - v, self.coords, 0)
        m = self.p ** self.rel
        inv = pow(u % m, -1, m)
        return LocalElement.make(self.place, self.shift - v, [c * inv for c in self.coords], self.rel)

    def valuation(self):
        """Exact valuation if determined at the current precision, else None."""
        if self.is_zero_to_precision():
            return None
        m = self.p ** self.rel
        G = self._G(self.rel)
        ints = _ptrim(list(self.coords))
        deg = len(G) - 1
        if deg == 1:
            r = (-G[0]) % m
            val = 0
            for c in reversed(ints):
                val = (val * r + c) % m
            res = val
        elif len(ints) == 1:
            res = pow(ints[0], deg, m)
        else:
            res = _resultant_int(G, ints) % m
        if res == 0:
            return None
        return Fraction(self.shift) + Fraction(vp_int(res, self.p), deg)

    def valuation_lower_bound(self) -> Fraction:
        v = self.valuation()
        if v is not None:
            return v
        return Fraction(self.precision)

    def integer_value(self) -> int:
        """For degree-one completions: the p-adic value as an integer mod p^precision
        (requires shift >= 0)."""
        if self.degree != 1 or self.shift < 0:
            raise ValueError("integer_value needs an integral element of Q_p")
        return (self.coords[0] * self.p ** self.shift) % self.p ** self.precision

    def absolute_coords(self):
        """Coordinates of the value itself modulo p^precision (shift >= 0)."""
        if self.shift < 0:
            raise ValueError("element is not integral")
        m = self.p ** self.precision
        return tuple((c * self.p ** self.shift) % m for c in self.coords)

    def __repr__(self):
        return f"LocalElement(p^{self.shift}*{list(self.coords)} mod p^{self.rel}, place={self.place.selector})"


def local_constant(w: NonArch, n, precision: int) -> LocalElement:
    d = len(w.local_factor(1)) - 1
    q = Fraction(n)
    if q == 0:
        return LocalElement(w, precision, tuple([0] * d), 0)
    v = vp_frac(q, w.p)
    rel = precision - v
    if rel <= 0:
        return LocalElement(w, precision, tuple([0] * d), 0)
    u = q / Fraction(w.p) ** v
    return LocalElement.make(w, v, [_frac_mod(u, w.p ** rel)] + [0] * (d - 1), rel)


def embed_local(a: AlgebraicNumber, w: NonArch, precision: int) -> LocalElement:
    """Image of ``a`` in K_w, correct modulo p^precision (absolute)."""
    if not isinstance(w, NonArch):
        raise TypeError("embed_local needs a non-archimedean place")
    p = w.p
    d = len(w.local_factor(1)) - 1
    if a.is_zero():
        return LocalElement(w, precision, tuple([0] * d), 0)
    s, ints, den = _integral_part(a, p)
    rel = precision - s
    if rel <= 0:
        raise PrecisionLoss(f"precision {precision} is below the valuation bound {s}", witness=s)
    # reduction mod G may make the result divisible by p; give enough room
    extra = len(ints)
    work = rel + extra
    m = p ** work
    G = w.local_factor(work)
    inv = pow(den, -1, m)
    A = [c * inv % m for c in ints]
    _, r = _pdivmod(A, G, m)
    r = r + [0] * (d - len(r))
    el = LocalElement.make(w, s, r, work)
    # report at the requested absolute precision
    if el.precision > precision:
        cut = precision - el.shift
        if cut <= 0:
            return LocalElement(w, precision, tuple([0] * d), 0)
        el = LocalElement.make(w, el.shift, el.coords, cut)
    return el


def _threshold(p: int) -> Fraction:
    return Fraction(1, p - 1)


def local_log_exp(x: LocalElement, mode: str) -> LocalElement:
    """p-adic logarithm or exponential of ``x`` at the element's precision."""
    w = x.place
    p = w.p
    W = x.precision
    d = len(x.coords)
    if mode == "log":
        y = x - 1
        vy = y.valuation()
        if vy is None:
            return LocalElement(w, W, tuple([0] * d), 0)
        if vy <= _threshold(p):
            raise OutsideConvergenceDomain(f"v(x-1) = {vy} <= 1/(p-1)", witness=vy)
        return _series(y, vy, W, "log")
    if mode == "exp":
        vz = x.valuation()
        if vz is None:
            return local_constant(w, 1, W)
        if vz <= _threshold(p):
            raise OutsideConvergenceDomain(f"v(x) = {vz} <= 1/(p-1)", witness=vz)
        return _series(x, vz, W, "exp")
    raise ValueError(f"unknown mode {mode!r}")


def _series(y: LocalElement, vy: Fraction, W: int, mode: str) -> LocalElement:
    w = y.place
    p = w.p
    d = len(y.coords)
    slope = vy - (_threshold(p) if mode == "exp" else 0)
    # number of terms: past J every term has valuation >= W
    J = 1
    while True:
        J += 1
        lower = J * vy - (Fraction(J - 1, p - 1) if mode == "exp" else Fraction(math.floor(math.log(J, p) + 1e-9)))
        if lower >= W and J * float(slope) * math.log(p) > 1:
            break
    guard = (sum(vp_int(j, p) for j in range(1, J + 1)) if mode == "exp"
             else max(vp_int(j, p) for j in range(1, J + 1))) + 1
    Wi = W + guard
    m = p ** Wi
    G = w.local_factor(Wi)
    base = [c % m for c in y.absolute_coords()]  # y is integral here
    out_mod = p ** W
    acc = [0] * d
    power = [1] + [0] * (d - 1)
    fact_p = 0
    fact_u = 1
    for j in range(1, J + 1):
        power = _pmul(power, base, m)
        _, power = _pdivmod(power, G, m)
        power = power + [0] * (d - len(power))
        if mode == "exp":
            vj = vp_int(j, p)
            fact_p += vj
            fact_u = fact_u * (j // p ** vj) % m
            div_p, unit = fact_p, fact_u
            sign = 1
        else:
            div_p = vp_int(j, p)
            unit = (j // p ** div_p) % m
            sign = 1 if j % 2 == 1 else -1
        pk = p ** div_p
        if any(c % pk for c in power):
            raise PrecisionLoss("series term not divisible as expected")
        inv = pow(unit, -1, m)
        term = [(c // pk) * inv * sign for c in power]
        acc = [(a + t) % out_mod for a, t in zip(acc, term)]
    if mode == "exp":
        acc[0] = (acc[0] + 1) % out_mod
    return LocalElement.make(w, 0, acc, W)
