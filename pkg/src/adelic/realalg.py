"""Certified real algebraic numbers and complex root isolation.

A :class:`RealAlgebraic` pairs an integer annihilating polynomial with an
enclosure procedure returning outward-rounded intervals (``mpmath.iv``) at a
requested decimal precision.  Strict comparisons come from disjoint
enclosures; equality is certified algebraically: a common root of the two
annihilators inside the overlap of two isolating intervals.
"""
from __future__ import annotations

import math

import threading
from fractions import Fraction

import sympy
from mpmath import iv, libmp, mp, mpf

from . import _poly

_DPS_SCHEDULE = (30, 60, 120, 240, 480, 960, 1920)
_X = sympy.Symbol("z")


def _frac(x) -> Fraction:
    """Exact rational value of an mpf (or an mpf tuple)."""
    t = x if isinstance(x, tuple) else x._mpf_
    p, q = libmp.to_rational(t)
    return Fraction(int(p), int(q))


def _bounds(ivx):
    a, b = ivx._mpi_
    return _frac(a), _frac(b)


def _sympoly(coeffs):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                       for c in reversed(list(coeffs))], _X)


def _count_roots(coeffs, lo: Fraction, hi: Fraction) -> int:
    return _sympoly(coeffs).count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                        sympy.Rational(hi.numerator, hi.denominator))


def _ipoint(x):
    """Interval containing the exact value of ``x`` (Fraction, int or mpf)."""
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / x.denominator
    return iv.mpf(x)


# -- complex intervals as (re, im) pairs of iv.mpf --------------------------

def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _cabs_bounds(a):
    """(lower, upper) iv bounds of |a| for a complex interval."""
    sq = a[0] ** 2 + a[1] ** 2
    return iv.sqrt(sq)


class RootDiscs:
    """Certified isolating discs for every complex root of a squarefree
    rational polynomial.

    Each disc is ``(center, radius)`` with ``center`` an exact ``mpc`` and
    ``radius`` an upper bound; the discs are pairwise disjoint, so each holds
    exactly one root.  Roots whose disc is centred on the real axis are real.
    Ordering: real roots ascending, then complex roots with positive imaginary
    part (by real part, then imaginary part), then their conjugates.
    """

    def __init__(self, coeffs):
        self.coeffs = _poly.to_fractions(_poly.trim(coeffs))
        self.degree = len(self.coeffs) - 1
        if self.degree < 1:
            raise ValueError("need a nonconstant polynomial")
        self._cache = {}
        self._lock = threading.Lock()
        self.n_real = _sympoly(self.coeffs).count_roots()

    def discs(self, dps: int):
        with self._lock:
            hit = self._cache.get(dps)
        if hit is not None:
            return hit
        result = None
        d = dps
        while result is None:
            result = self._try(d)
            d *= 2
        with self._lock:
            self._cache[dps] = result
        return result

    def _radius(self, z, dps):
        iv.dps = dps + 10
        zc = (iv.mpf(z.real), iv.mpf(z.imag))
        fval = (iv.mpf(0), iv.mpf(0))
        dval = (iv.mpf(0), iv.mpf(0))
        for i in range(self.degree, -1, -1):
            c = _ipoint(self.coeffs[i])
            dval = _cadd(_cmul(dval, zc), fval)
            fval = _cadd(_cmul(fval, zc), (c, iv.mpf(0)))
        fab = _cabs_bounds(fval)
        dab = _cabs_bounds(dval)
        lo_d = dab.a
        if lo_d <= 0:
            return None
        return (self.degree * fab / lo_d).b

    def _try(self, dps):
        with mp.workdps(dps + 20):
            lead = self.coeffs[-1]
            cs = [mpf(c.numerator) / c.denominator for c in reversed(self.coeffs)]
            cs = [c / cs[0] for c in cs]
            try:
                roots = mp.polyroots(cs, maxsteps=400, extraprec=4 * dps + 50)
            except mp.NoConvergence:
                return None
            del lead
            items = []
            for z in roots:
                z = mp.mpc(z)
                r = self._radius(z, dps)
                if r is None:
                    return None
                if abs(z.imag) <= r:
                    z = mp.mpc(z.real, 0)
                    r = self._radius(z, dps)
                    if r is None:
                        return None
                items.append((z, r))
        # disjointness certifies one root per disc
        iv.dps = dps + 10
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                zi, ri = items[i]
                zj, rj = items[j]
                dist = iv.sqrt((iv.mpf(zi.real) - iv.mpf(zj.real)) ** 2 + (iv.mpf(zi.imag) - iv.mpf(zj.imag)) ** 2)
                if not dist.a > iv.mpf(ri) + iv.mpf(rj):
                    return None
        reals = sorted([t for t in items if t[0].imag == 0], key=lambda t: t[0].real)
        if len(reals) != self.n_real:
            return None
        upper = sorted([t for t in items if t[0].imag > 0], key=lambda t: (t[0].real, t[0].imag))
        lower = [t for t in items if t[0].imag < 0]
        if len(upper) != len(lower):
            return None
        lower = sorted(lower, key=lambda t: (t[0].real, -t[0].imag))
        return reals + upper + lower


def enclose_value(coords, disc, dps):
    """Complex interval plus extra radius for ``sum coords[i] * theta**i`` with
    ``theta`` anywhere in ``disc``.  Returns ``((re, im), extra)``."""
    z, rho = disc
    iv.dps = dps + 10
    zc = (iv.mpf(z.real), iv.mpf(z.imag))
    val = (iv.mpf(0), iv.mpf(0))
    for c in reversed(coords):
        val = _cadd(_cmul(val, zc), (_ipoint(Fraction(c)), iv.mpf(0)))
    absz = _cabs_bounds(zc)
    rho_i = iv.mpf(rho)
    extra = iv.mpf(0)
    for i, c in enumerate(coords):
        if i == 0 or c == 0:
            continue
        extra = extra + abs(_ipoint(Fraction(c))) * ((absz + rho_i) ** i - absz ** i)
    return val, extra


def enclose_abs(coords, disc, dps):
    """iv interval containing ``|sum coords[i] theta**i|``."""
    val, extra = enclose_value(coords, disc, dps)
    m = _cabs_bounds(val)
    lo = m.a - extra.b
    hi = m.b + extra.b
    if lo < 0:
        lo = iv.mpf(0)
    return iv.mpf([lo.a, hi.b])


class RealAlgebraic:
    """A real algebraic number: integer annihilator + interval enclosures.

    ``enclose(dps)`` must return an ``iv.mpf`` containing the value whose
    width shrinks as ``dps`` grows.
    """

    def __init__(self, annihilator, enclose):
        ann = _poly.primitive_int(_poly.sqf_part(_poly.to_fractions(annihilator)))
        if len(ann) < 2:
            raise ValueError("annihilator must be nonconstant")
        self.poly = tuple(ann)
        self._enclose = enclose
        self._cache = {}
        self._lock = threading.Lock()

    @classmethod
    def from_rational(cls, q) -> "RealAlgebraic":
        q = Fraction(q)

        def enc(dps):
            iv.dps = dps
            return _ipoint(q)

        obj = cls([-q, 1], enc)
        obj._exact = q
        return obj

    @property
    def rational(self):
        """The value as a Fraction if the annihilator is linear, else None."""
        if len(self.poly) == 2:
            return Fraction(-self.poly[0], self.poly[1])
        return None

    def enclosure(self, dps: int):
        with self._lock:
            hit = self._cache.get(dps)
        if hit is None:
            r = self.rational
            if r is not None:
                hit = (r, r)
            else:
                hit = _bounds(self._enclose(dps))
            with self._lock:
                self._cache[dps] = hit
        return hit

    def isolating_interval(self):
        """Rational interval containing exactly one root of the annihilator."""
        r = self.rational
        if r is not None:
            return r, r
        for dps in _DPS_SCHEDULE:
            lo, hi = self.enclosure(dps)
            if _count_roots(self.poly, lo, hi) == 1:
                return lo, hi
        raise ArithmeticError("could not isolate root")

    def __float__(self):
        lo, hi = self.enclosure(30)
        return float((lo + hi) / 2)

    def approx(self, dps: int = 30):
        lo, hi = self.enclosure(dps)
        with mp.workdps(dps):
            return (mpf(lo.numerator) / lo.denominator + mpf(hi.numerator) / hi.denominator) / 2

    def compare(self, other) -> int:
        """Exact three-way comparison: -1, 0 or 1."""
        if not isinstance(other, RealAlgebraic):
            other = RealAlgebraic.from_rational(other)
        a, b = self.rational, other.rational
        if a is not None and b is not None:
            return (a > b) - (a < b)
        common = None
        for dps in _DPS_SCHEDULE:
            lo1, hi1 = self.enclosure(dps)
            lo2, hi2 = other.enclosure(dps)
            if hi1 < lo2:
                return -1
            if hi2 < lo1:
                return 1
            if common is None:
                common = _poly.gcd_(_poly.to_fractions(self.poly), _poly.to_fractions(other.poly))
            if len(common) < 2:
                continue
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if (_count_roots(common, lo, hi) >= 1
                    and (a is not None or _count_roots(self.poly, lo1, hi1) == 1)
                    and (b is not None or _count_roots(other.poly, lo2, hi2) == 1)):
                return 0
        raise ArithmeticError("comparison did not terminate within precision schedule")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RealAlgebraic)):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    __hash__ = None

    def __repr__(self):
        return f"RealAlgebraic(~{float(self):.12g}, poly={list(self.poly)})"

    # -- constructions ------------------------------------------------------

    def sqrt(self) -> "RealAlgebraic":
        """Nonnegative square root of a nonnegative value."""
        q = self.rational
        if q is not None and q >= 0:
            rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if rn * rn == q.numerator and rd * rd == q.denominator:
                return RealAlgebraic.from_rational(Fraction(rn, rd))
        src = self

        def enc(dps):
            lo, hi = src.enclosure(dps + 5)
            iv.dps = dps + 10
            lo = max(lo, Fraction(0))
            return iv.sqrt(iv.mpf([_ipoint(lo).a, _ipoint(hi).b]))

        return RealAlgebraic(_poly.substitute_square(list(self.poly)), enc)

    def pow(self, k: int) -> "RealAlgebraic":
        if k < 0:
            return self.inverse().pow(-k)
        if k == 0:
            return RealAlgebraic.from_rational(1)
        r = self.rational
        if r is not None:
            return RealAlgebraic.from_rational(r ** k)
        src = self

        def enc(dps):
            lo, hi = src.enclosure(dps + k.bit_length() + 5)
            iv.dps = dps + 10
            x = iv.mpf([_ipoint(lo).a, _ipoint(hi).b])
            return x ** k

        return RealAlgebraic(_poly.power_root_poly(list(self.poly), k), enc)

    def scale(self, q) -> "RealAlgebraic":
        """Multiply by a positive rational."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError("scale factor must be positive")
        r = self.rational
        if r is not None:
            return RealAlgebraic.from_rational(r * q)
        src = self

        def enc(dps):
            lo, hi = src.enclosure(dps + 5)
            return iv.mpf([_ipoint(lo * q).a, _ipoint(hi * q).b])

        ann = [Fraction(c) / q ** i for i, c in enumerate(self.poly)]
        return RealAlgebraic(ann, enc)

    def inverse(self) -> "RealAlgebraic":
        r = self.rational
        if r is not None:
            return RealAlgebraic.from_rational(1 / r)
        src = self

        def enc(dps):
            lo, hi = src.enclosure(dps + 5)
            iv.dps = dps + 10
            x = iv.mpf([_ipoint(lo).a, _ipoint(hi).b])
            return 1 / x

        return RealAlgebraic(list(reversed(self.poly)), enc)

    def __mul__(self, other) -> "RealAlgebraic":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RealAlgebraic):
            return NotImplemented
        if other.rational is not None and other.rational > 0:
            return self.scale(other.rational)
        if self.rational is not None and self.rational > 0:
            return other.scale(self.rational)
        y = sympy.Symbol("y")
        f = sympy.Poly(list(reversed(self.poly)), y).as_expr()
        g_deg = len(other.poly) - 1
        # y^deg(g) * g(z/y) has roots z = y * beta
        g = sum(c * _X ** i * y ** (g_deg - i) for i, c in enumerate(other.poly))
        res = sympy.Poly(sympy.resultant(f, g, y), _X)
        ann = [Fraction(int(c)) for c in reversed(res.all_coeffs())]
        a, b = self, other

        def enc(dps):
            l1, h1 = a.enclosure(dps + 5)
            l2, h2 = b.enclosure(dps + 5)
            iv.dps = dps + 10
            x = iv.mpf([_ipoint(l1).a, _ipoint(h1).b])
            w = iv.mpf([_ipoint(l2).a, _ipoint(h2).b])
            return x * w

        return RealAlgebraic(ann, enc)

    __rmul__ = __mul__


class LogAlgebraic:
    """``scale * log(mantissa)`` with a RealAlgebraic mantissa >= 1 and a
    nonnegative rational scale; the carrier for Weil heights."""

    def __init__(self, mantissa: RealAlgebraic, scale):
        self.mantissa = mantissa
        self.scale = Fraction(scale)

    def __float__(self):
        with mp.workdps(30):
            return float(self.scale * mp.log(self.mantissa.approx(40)))

    def is_zero(self) -> bool:
        return self.scale == 0 or self.mantissa == 1

    def __mul__(self, k):
        return LogAlgebraic(self.mantissa, self.scale * Fraction(k))

    __rmul__ = __mul__

    def _cmp(self, other: "LogAlgebraic") -> int:
        z1, z2 = self.is_zero(), other.is_zero()
        if z1 or z2:
            return (not z1) - (not z2)
        s1, s2 = self.scale, other.scale
        e1 = s1.numerator * s2.denominator
        e2 = s2.numerator * s1.denominator
        return self.mantissa.pow(e1).compare(other.mantissa.pow(e2))

    def __eq__(self, other):
        if isinstance(other, LogAlgebraic):
            return self._cmp(other) == 0
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    __hash__ = None

    def __repr__(self):
        return f"LogAlgebraic(~{float(self):.12g})"
