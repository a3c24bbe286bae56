"""Exact arithmetic in K = Q[x]/(m(x)) with certified complex embeddings.

Elements are stored in the power basis.  Everything archimedean (moduli,
heights) is returned as a :class:`~adelic.realalg.RealAlgebraic` so that ties
such as ``|5| = |5 zeta|`` are decided exactly.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy
from mpmath import iv, mp

from . import _poly
from .errors import (DivisionByZero, FieldMismatch, NonMonic, ReduciblePolynomial,
                     ZeroInput)
from .realalg import LogAlgebraic, RealAlgebraic, RootDiscs, enclose_abs, enclose_value

_Z = sympy.Symbol("x")


def _totient(n: int) -> int:
    return int(sympy.totient(n))


class NumberField:
    """K = Q[x]/(min_poly).  Create through :func:`nf_create`."""

    def __init__(self, min_poly):
        self.min_poly = tuple(Fraction(c) for c in min_poly)
        self.degree = len(self.min_poly) - 1
        d = self.degree
        # x^k reduced mod min_poly for k < 2d - 1
        self._red = []
        for k in range(max(2 * d - 1, 1)):
            mono = [Fraction(0)] * k + [Fraction(1)]
            self._red.append(self._reduce_raw(mono))
        self._trace_basis = [Fraction(d)] + _poly.power_sums(list(self.min_poly), d - 1) if d > 1 else [Fraction(1)]
        self._lock = threading.Lock()
        self._discs = None

    def _reduce_raw(self, p):
        p = list(p)
        d = self.degree
        m = self.min_poly
        while len(p) > d:
            c = p.pop()
            if c:
                off = len(p) - d
                for i in range(d):
                    p[off + i] -= c * m[i]
        return p + [Fraction(0)] * (d - len(p))

    # -- embeddings ---------------------------------------------------------

    @property
    def root_discs(self) -> RootDiscs:
        with self._lock:
            if self._discs is None:
                self._discs = RootDiscs(list(self.min_poly))
            return self._discs

    @property
    def n_real(self) -> int:
        return self.root_discs.n_real if self.degree > 1 else 1

    @property
    def n_complex(self) -> int:
        return (self.degree - self.n_real) // 2

    @property
    def embeddings(self) -> list:
        """Embedding descriptors: ('real', i) then ('complex', j)."""
        return [("real", i) for i in range(self.n_real)] + [("complex", j) for j in range(self.n_complex)]

    def embedding_delta(self, k: int) -> int:
        return 1 if k < self.n_real else 2

    def disc(self, k: int, dps: int):
        if self.degree == 1:
            return (mp.mpc(-self.min_poly[0]), iv.mpf(0))
        return self.root_discs.discs(dps)[k]

    def embed(self, a: "AlgebraicNumber", k: int, dps: int = 30):
        """Complex approximation of sigma_k(a)."""
        with mp.workdps(dps):
            z, _ = self.disc(k, dps)
            acc = mp.mpc(0)
            for c in reversed(a.coords):
                acc = acc * z + mp.mpf(c.numerator) / c.denominator
            return acc

    # -- elements -----------------------------------------------------------

    def __call__(self, value) -> "AlgebraicNumber":
        if isinstance(value, AlgebraicNumber):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        if isinstance(value, (int, Fraction)):
            return AlgebraicNumber(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        coords = [Fraction(c) for c in value]
        if len(coords) > self.degree:
            coords = self._reduce_raw(coords)
        coords += [Fraction(0)] * (self.degree - len(coords))
        return AlgebraicNumber(self, tuple(coords))

    def gen(self) -> "AlgebraicNumber":
        if self.degree == 1:
            return self(-self.min_poly[0])
        return self([0, 1])

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({poly_str(self.min_poly)})"


def poly_str(coeffs, var="x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            terms.append(f"+{mono}")
        elif mono and c == -1:
            terms.append(f"-{mono}")
        else:
            s = str(c)
            terms.append(("+" if c > 0 else "") + s + ("*" + mono if mono else ""))
    out = "".join(terms).lstrip("+")
    return out or "0"


@lru_cache(maxsize=None)
def _cached_field(poly: tuple) -> NumberField:
    return NumberField(poly)


def nf_create(min_poly) -> NumberField:
    """Validate a monic irreducible rational polynomial (low degree first)
    and return its field.  Equal polynomials share one field object."""
    coeffs = _poly.trim(_poly.to_fractions(min_poly))
    if len(coeffs) < 2:
        raise ValueError("min_poly must have degree >= 1")
    if coeffs[-1] != 1:
        raise NonMonic(f"leading coefficient {coeffs[-1]} is not 1")
    if len(coeffs) > 2:
        P = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _Z,
                       domain="QQ")
        _, factors = P.factor_list()
        if len(factors) > 1 or factors[0][1] > 1:
            cands = []
            for f, _m in factors:
                fc = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                      for c in reversed(f.monic().all_coeffs())]
                cands.append(fc)
            cands.sort(key=lambda fc: (len(fc), fc))
            raise ReduciblePolynomial(f"{poly_str(coeffs)} is reducible", witness=cands[0])
    return _cached_field(tuple(coeffs))


def rationals() -> NumberField:
    return nf_create([0, 1])


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    field: NumberField
    coords: tuple

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other) -> "AlgebraicNumber":
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise FieldMismatch("operands live in different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        raise TypeError(f"cannot combine AlgebraicNumber with {type(other).__name__}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraicNumber(self.field, tuple(x + y for x, y in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-x for x in self.coords))

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraicNumber(self.field, tuple(x - y for x, y in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, tuple(x * other for x in self.coords))
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self.field.degree
        if d == 1:
            return AlgebraicNumber(self.field, (self.coords[0] * o.coords[0],))
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(self.coords):
            if x:
                for j, y in enumerate(o.coords):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:d])
        red = self.field._red
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                r = red[k]
                for i in range(d):
                    out[i] += c * r[i]
        return AlgebraicNumber(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.field.degree == 1:
            return AlgebraicNumber(self.field, (1 / self.coords[0],))
        g, s, _ = _poly.xgcd(_poly.trim(list(self.coords)), list(self.field.min_poly))
        # g is a nonzero constant because min_poly is irreducible
        return self.field(s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return AlgebraicNumber(self.field, tuple(x / other for x in self.coords))
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and all(c == 0 for c in self.coords[1:])
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def sort_key(self):
        return self.coords

    # -- invariants ---------------------------------------------------------

    def charpoly(self):
        """Characteristic polynomial of multiplication by self (monic, low first)."""
        d = self.field.degree
        if d == 1:
            return [-self.coords[0], Fraction(1)]
        return _charpoly_cached(self.field, self.coords)

    def minpoly(self):
        return _poly.sqf_part(self.charpoly())

    def trace(self) -> Fraction:
        tb = self.field._trace_basis
        return sum((c * tb[i] for i, c in enumerate(self.coords)), Fraction(0))

    def norm(self) -> Fraction:
        cp = self.charpoly()
        d = self.field.degree
        return (-1) ** d * cp[0]

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.coords[0])
        return poly_str(self.coords, "t")


@lru_cache(maxsize=4096)
def _charpoly_cached(field: NumberField, coords: tuple):
    a = AlgebraicNumber(field, coords)
    d = field.degree
    sums = []
    power = a
    for _ in range(d):
        sums.append(power.trace())
        power = power * a
    return _poly.from_power_sums(sums, d)


# -- operations -------------------------------------------------------------

def field_arithmetic(a: AlgebraicNumber, b: AlgebraicNumber, op: str) -> AlgebraicNumber:
    if a.field != b.field:
        raise FieldMismatch("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DivisionByZero("division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def is_root_of_unity(a: AlgebraicNumber):
    """Least N with a**N = 1, or None."""
    if a.is_zero():
        raise ZeroInput("zero is not a root of unity")
    if abs(a.norm()) != 1:
        return None
    mp_ = a.minpoly()
    if any(c.denominator != 1 for c in mp_):
        return None
    m = len(mp_) - 1
    d = a.field.degree
    for N in range(1, 2 * d * d + 3):
        if _totient(N) == m and a ** N == 1:
            return N
    return None


def _abs_sq_annihilator(a: AlgebraicNumber, k: int):
    cp = a.charpoly()
    if k < a.field.n_real:
        return _poly.power_root_poly(cp, 2)
    return _poly.subset_product_poly(cp, 2)


def abs_squared(a: AlgebraicNumber, k: int) -> RealAlgebraic:
    """|sigma_k(a)|^2 as a certified real algebraic number."""
    if a.is_rational():
        return RealAlgebraic.from_rational(a.coords[0] ** 2)
    field = a.field
    coords = list(a.coords)

    def enc(dps):
        m = enclose_abs(coords, field.disc(k, dps), dps)
        iv.dps = dps + 10
        return m ** 2

    return RealAlgebraic(_abs_sq_annihilator(a, k), enc)


def abs_arch(a: AlgebraicNumber, k: int) -> RealAlgebraic:
    """|sigma_k(a)| as a certified real algebraic number."""
    if a.is_rational():
        return RealAlgebraic.from_rational(abs(a.coords[0]))
    return abs_squared(a, k).sqrt()


def compare_abs(a: AlgebraicNumber, b: AlgebraicNumber, embedding: int) -> int:
    """Exact sign of |sigma(a)| - |sigma(b)|: -1 (LT), 0 (EQ) or 1 (GT)."""
    if a.field != b.field:
        raise FieldMismatch("operands live in different fields")
    return abs_squared(a, embedding).compare(abs_squared(b, embedding))


def mahler_measure(int_poly) -> RealAlgebraic:
    """Mahler measure of an integer polynomial that is irreducible over Q."""
    P = _poly.trim([Fraction(c) for c in int_poly])
    lead = abs(P[-1])
    d = len(P) - 1
    if d == 1:
        return RealAlgebraic.from_rational(max(lead, abs(P[0])))
    discs = RootDiscs(P)
    field_like = _poly.monic(P)
    outside = []
    for idx in range(d):
        # |r|^2 annihilator: all pairwise products for complex, squares for real
        def enc(dps, idx=idx):
            z, rho = discs.discs(dps)[idx]
            return enclose_abs([0, 1], (z, rho), dps) ** 2

        is_real = idx < discs.n_real
        ann = (_poly.power_root_poly(field_like, 2) if is_real
               else _poly.subset_product_poly(field_like, 2))
        if RealAlgebraic(ann, enc).compare(1) > 0:
            outside.append(idx)
    if not outside:
        return RealAlgebraic.from_rational(lead)
    k = len(outside)
    ek = _poly.subset_product_poly(field_like, k)
    ann = _poly.mul(ek, _poly.reflect(ek))

    def enc_prod(dps):
        ds = discs.discs(dps)
        acc = iv.mpf(1)
        for idx in outside:
            acc = acc * enclose_abs([0, 1], ds[idx], dps)
        return acc

    return RealAlgebraic(ann, enc_prod).scale(lead)


def height(a: AlgebraicNumber) -> LogAlgebraic:
    """Absolute logarithmic Weil height, as (1/deg) * log(Mahler measure)."""
    if a.is_zero():
        raise ZeroInput("height of zero is not defined here")
    mp_ = _poly.primitive_int(a.minpoly())
    if a.is_rational():
        q = a.coords[0]
        M = RealAlgebraic.from_rational(max(abs(q.numerator), q.denominator))
        return LogAlgebraic(M, 1)
    return LogAlgebraic(mahler_measure(mp_), Fraction(1, len(mp_) - 1))
