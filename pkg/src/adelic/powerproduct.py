"""Exact products ``q * p1**e1 * p2**e2 ...`` with rational exponents.

Non-archimedean absolute values and the perturbation factors built from them
live here.  The representation is canonical: ``q`` is a Fraction and every
radical exponent lies strictly between 0 and 1, so two values are equal iff
their fields are equal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _floor(e: Fraction) -> int:
    return e.numerator // e.denominator


@dataclass(frozen=True)
class PowerProduct:
    rational: Fraction
    radical: tuple = ()  # sorted ((p, e), ...) with 0 < e < 1

    @staticmethod
    def make(rational, exps=None) -> "PowerProduct":
        q = Fraction(rational)
        rad = {}
        if q != 0:
            for p, e in (exps or {}).items():
                e = Fraction(e)
                whole = _floor(e)
                frac = e - whole
                q *= Fraction(p) ** whole
                if frac:
                    rad[p] = rad.get(p, 0) + frac
            # fractional parts of distinct inputs never collide, but be safe
            for p in list(rad):
                whole = _floor(rad[p])
                if whole:
                    q *= Fraction(p) ** whole
                    rad[p] -= whole
                if rad[p] == 0:
                    del rad[p]
        return PowerProduct(q, tuple(sorted(rad.items())))

    @staticmethod
    def prime_power(p: int, e) -> "PowerProduct":
        return PowerProduct.make(1, {p: Fraction(e)})

    @property
    def is_zero(self) -> bool:
        return self.rational == 0

    @property
    def is_rational(self) -> bool:
        return not self.radical

    def exponents(self) -> dict:
        """Full factorisation ``{p: e}`` of ``|value|`` (factors the rational part)."""
        if self.rational == 0:
            raise ValueError("zero has no factorisation")
        out = {}
        for p, e in sympy.factorint(abs(self.rational.numerator)).items():
            out[int(p)] = out.get(int(p), 0) + Fraction(e)
        for p, e in sympy.factorint(self.rational.denominator).items():
            out[int(p)] = out.get(int(p), 0) - Fraction(e)
        for p, e in self.radical:
            out[p] = out.get(p, 0) + e
        return {p: e for p, e in out.items() if e != 0}

    def as_prime_power(self):
        """``(p, e)`` if the value equals ``p**e`` for a single prime, else None.
        The value 1 is reported as ``(None, 0)``."""
        if self.rational <= 0:
            return None
        ex = self.exponents()
        if not ex:
            return (None, Fraction(0))
        if len(ex) == 1:
            (p, e), = ex.items()
            return (p, e)
        return None

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PowerProduct(Fraction(other))
        if not isinstance(other, PowerProduct):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return PowerProduct(Fraction(0))
        exps = dict(self.radical)
        for p, e in other.radical:
            exps[p] = exps.get(p, 0) + e
        return PowerProduct.make(self.rational * other.rational, exps)

    __rmul__ = __mul__

    def inverse(self) -> "PowerProduct":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return PowerProduct.make(1 / self.rational, {p: -e for p, e in self.radical})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PowerProduct(Fraction(other))
        return self * other.inverse()

    def __pow__(self, c):
        c = Fraction(c)
        if self.is_zero:
            if c > 0:
                return self
            raise ZeroDivisionError("zero to a nonpositive power")
        if c.denominator == 1:
            k = c.numerator
            return PowerProduct.make(self.rational ** k, {p: e * k for p, e in self.radical})
        if self.rational < 0:
            raise ValueError("fractional power of a negative value")
        return PowerProduct.make(1, {p: e * c for p, e in self.exponents().items()})

    def __neg__(self):
        return PowerProduct(-self.rational, self.radical)

    def sign(self) -> int:
        return (self.rational > 0) - (self.rational < 0)

    def common_denominator(self) -> int:
        d = 1
        for _, e in self.radical:
            d = _lcm(d, e.denominator)
        return d

    def compare(self, other) -> int:
        """Exact three-way comparison of real values."""
        if isinstance(other, (int, Fraction)):
            other = PowerProduct(Fraction(other))
        s1, s2 = self.sign(), other.sign()
        if s1 != s2 or s1 == 0:
            return (s1 > s2) - (s1 < s2)
        ratio = self / other  # positive
        D = ratio.common_denominator()
        lhs = ratio.rational ** D
        for p, e in ratio.radical:
            lhs *= Fraction(p) ** int(e * D)
        c = (lhs > 1) - (lhs < 1)
        return c if s1 > 0 else -c

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return not self.radical and self.rational == other
        if isinstance(other, PowerProduct):
            return self.rational == other.rational and self.radical == other.radical
        return NotImplemented

    def __hash__(self):
        return hash((self.rational, self.radical))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __float__(self):
        if self.is_zero:
            return 0.0
        return math.copysign(math.exp(self.log()), float(self.rational))

    def log(self) -> float:
        """Natural log of ``|value|`` as a float (works for huge rationals)."""
        q = abs(self.rational)
        out = math.log(q.numerator) - math.log(q.denominator)
        for p, e in self.radical:
            out += float(e) * math.log(p)
        return out

    def to_json(self):
        pp = self.as_prime_power()
        if pp is not None:
            p, e = pp
            return {"p": p if p is not None else 1, "exponent_num": e.numerator, "exponent_den": e.denominator}
        return {"rational": str(self.rational),
                "radical": [{"p": p, "exponent_num": e.numerator, "exponent_den": e.denominator}
                            for p, e in self.radical]}

    def __repr__(self):
        parts = [] if self.rational == 1 and self.radical else [str(self.rational)]
        parts += [f"{p}^({e})" for p, e in self.radical]
        return "*".join(parts)


ONE = PowerProduct(Fraction(1))
ZERO = PowerProduct(Fraction(0))
