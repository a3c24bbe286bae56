"""Brute-force elliptic curves y^2 = x^3 + a4 x + a6 over small fields F_{p^r}.

Field elements are integers 0..q-1 read as base-p digit vectors (constant term
first) modulo a fixed primitive polynomial; multiplication goes through
discrete-log tables.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .errors import BudgetExceeded, SingularCurve, VerificationFailure
from .numfield import nf_create
from .zeta import ZetaSpec, deg_k

DEFAULT_BUDGET = 10 ** 6


def _pmulmod(a, b, f, p):
    """Product of digit lists a, b modulo the monic f (all low degree first)."""
    r = len(f) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, r - 1, -1):
        c = out[k]
        if c:
            for i in range(r + 1):
                out[k - r + i] = (out[k - r + i] - c * f[i]) % p
    out = out[:r] + [0] * max(0, r - len(out))
    return out


def _ppowmod(base, e, f, p):
    result = [1] + [0] * (len(f) - 2)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def primitive_modulus(p: int, r: int) -> tuple:
    """First monic degree-r polynomial (lowest coefficient code first) with x primitive."""
    q = p ** r
    primes = [int(l) for l in sympy.primefactors(q - 1)]
    one = [1] + [0] * (r - 1)
    x = ([0, 1] + [0] * (r - 2)) if r > 1 else None
    for code in range(q):
        f = [(code // p ** i) % p for i in range(r)] + [1]
        if f[0] == 0:
            continue
        if r == 1:
            g = (-f[0]) % p
            if all(pow(g, (q - 1) // l, p) != 1 for l in primes):
                return tuple(f)
            continue
        if _ppowmod(x, q - 1, f, p) != one:
            continue
        if all(_ppowmod(x, (q - 1) // l, f, p) != one for l in primes):
            return tuple(f)
    raise ArithmeticError("no primitive polynomial found")


class GF:
    """F_{p^r} with integer-coded elements."""

    def __init__(self, p: int, r: int):
        self.p, self.r = p, r
        self.q = q = p ** r
        self.modulus = primitive_modulus(p, r)
        f = self.modulus
        exp = np.zeros(q - 1, dtype=np.int64)
        if r == 1:
            g = (-f[0]) % p
            cur = 1
            for i in range(q - 1):
                exp[i] = cur
                cur = cur * g % p
        else:
            digits = [1] + [0] * (r - 1)
            pw = [p ** i for i in range(r)]
            for i in range(q - 1):
                exp[i] = sum(d * w for d, w in zip(digits, pw))
                top = digits[-1]
                digits = [0] + digits[:-1]
                if top:
                    digits = [(d - top * c) % p for d, c in zip(digits, f[:r])]
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self.exp = exp
        self.log = log
        self._pw = [p ** i for i in range(r)]

    # scalar operations
    def add(self, a: int, b: int) -> int:
        out = 0
        for w in self._pw:
            out += ((a // w + b // w) % self.p) * w
        return out

    def neg(self, a: int) -> int:
        out = 0
        for w in self._pw:
            out += ((-(a // w)) % self.p) * w
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def const(self, c: int) -> int:
        return c % self.p

    # vectorised operations
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(a)
        for w in self._pw:
            out += (((a // w) + (b // w)) % self.p) * w
        return out

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a: np.ndarray, k: int) -> np.ndarray:
        out = self.exp[(self.log[a] * k) % (self.q - 1)]
        return np.where(a == 0, 0, out)


@functools.lru_cache(maxsize=None)
def field(p: int, r: int) -> GF:
    return GF(p, r)


@dataclass(frozen=True)
class Curve:
    p: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.p < 5 or not sympy.isprime(self.p):
            raise ValueError("p must be a prime >= 5")
        object.__setattr__(self, "a4", self.a4 % self.p)
        object.__setattr__(self, "a6", self.a6 % self.p)
        if (4 * self.a4 ** 3 + 27 * self.a6 ** 2) % self.p == 0:
            raise SingularCurve(f"4a^3 + 27b^2 vanishes mod {self.p}", witness=(self.a4, self.a6))


def _field_for(curve: Curve, r: int, budget: int) -> GF:
    if r < 1:
        raise ValueError("extension degree must be positive")
    if curve.p ** r > budget:
        raise BudgetExceeded(f"p^r = {curve.p}^{r} exceeds the enumeration budget {budget}",
                             witness=curve.p ** r)
    return field(curve.p, r)


def _rhs(curve: Curve, F: GF) -> np.ndarray:
    xs = np.arange(F.q, dtype=np.int64)
    a4 = np.full_like(xs, F.const(curve.a4))
    a6 = np.full_like(xs, F.const(curve.a6))
    return F.vadd(F.vadd(F.vpow(xs, 3), F.vmul(a4, xs)), a6)


def count_points(curve: Curve, r: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    """#E(F_{p^r}) by running over every x (Euler's criterion via discrete logs)."""
    F = _field_for(curve, r, budget)
    rhs = _rhs(curve, F)
    zero = int(np.count_nonzero(rhs == 0))
    squares = int(np.count_nonzero((rhs != 0) & (F.log[rhs] % 2 == 0)))
    return 1 + zero + 2 * squares


def points(curve: Curve, r: int = 1, budget: int = DEFAULT_BUDGET) -> list:
    """Every affine point (x, y) over F_{p^r}; the point at infinity is None."""
    F = _field_for(curve, r, budget)
    rhs = _rhs(curve, F)
    out = [None]
    for x in range(F.q):
        v = int(rhs[x])
        if v == 0:
            out.append((x, 0))
        elif F.log[v] % 2 == 0:
            y = int(F.exp[F.log[v] // 2])
            out.append((x, y))
            out.append((x, F.neg(y)))
    return out


# -- group law -------------------------------------------------------------------------

def ec_neg(curve: Curve, F: GF, P):
    return None if P is None else (P[0], F.neg(P[1]))


def ec_add(curve: Curve, F: GF, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if F.add(y1, y2) == 0:
            return None
        num = F.add(F.mul(F.const(3), F.mul(x1, x1)), F.const(curve.a4))
        lam = F.mul(num, F.inv(F.mul(F.const(2), y1)))
    else:
        lam = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)))
    x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
    y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
    return (x3, y3)


def ec_mul(curve: Curve, F: GF, k: int, P):
    if k < 0:
        return ec_mul(curve, F, -k, ec_neg(curve, F, P))
    acc = None
    while k:
        if k & 1:
            acc = ec_add(curve, F, acc, P)
        P = ec_add(curve, F, P, P)
        k >>= 1
    return acc


def on_curve(curve: Curve, F: GF, P) -> bool:
    if P is None:
        return True
    x, y = P
    rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(F.const(curve.a4), x)), F.const(curve.a6))
    return F.mul(y, y) == rhs


def torsion_count(curve: Curve, m: int, r: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    """#E[m](F_{p^r}) by enumeration and scalar multiplication."""
    if m < 1:
        raise ValueError("m must be positive")
    F = _field_for(curve, r, budget)
    return sum(1 for P in points(curve, r, budget) if ec_mul(curve, F, m, P) is None)


# -- Frobenius ------------------------------------------------------------------------------

def frobenius_trace(curve: Curve) -> int:
    return curve.p + 1 - count_points(curve, 1)


def is_supersingular(curve: Curve) -> bool:
    return frobenius_trace(curve) % curve.p == 0


def frobenius_spec(curve: Curve) -> ZetaSpec:
    """The Frobenius pair (roots of T^2 - a T + p) with separable data r = 1, s = 0."""
    a = frobenius_trace(curve)
    if a * a > 4 * curve.p:
        raise VerificationFailure(f"trace {a} violates the Hasse bound for p = {curve.p}", witness=a)
    K = nf_create((curve.p, -a, 1))
    xi = K.gen()
    return ZetaSpec((xi, a - xi), curve.p, (1,), (0,))


@dataclass
class CrosscheckReport:
    rows: list  # (k, #E(F_{p^k}), deg_k)

    @property
    def ok(self) -> bool:
        return all(c == d for _, c, d in self.rows)


def crosscheck_Nk(curve: Curve, k_max: int, budget: int = DEFAULT_BUDGET) -> CrosscheckReport:
    """#E(F_{p^k}) against prod (xi^k - 1) for k = 1..k_max; a mismatch raises."""
    spec = frobenius_spec(curve)
    rows = []
    for k in range(1, k_max + 1):
        c = count_points(curve, k, budget)
        d = int(deg_k(spec, k))
        if c != d:
            raise VerificationFailure(f"#E(F_{curve.p}^{k}) = {c} but deg_k = {d}", witness=k)
        rows.append((k, c, d))
    return CrosscheckReport(rows)


# -- inseparability of multiplication maps ----------------------------------------------------

def multiplication_insep_degree(curve: Curve, m: int) -> int:
    """deg_i [m] = p^{v_p(m)} (ordinary) or p^{2 v_p(m)} (supersingular)."""
    v = 0
    while m % curve.p == 0:
        m //= curve.p
        v += 1
    return curve.p ** (v * (2 if is_supersingular(curve) else 1))


def multiplication_zeta_spec(curve: Curve, m: int) -> ZetaSpec:
    """ZetaSpec of phi = [m]: xi = (m, m) and deg_i([m^k - 1]) written as r_k |k|_p^{s_k}."""
    p = curve.p
    if m < 2:
        raise ValueError("m must be at least 2")
    Q = nf_create((0, 1))
    t = 2 if is_supersingular(curve) else 1
    if m % p == 0:
        return ZetaSpec((Q(m), Q(m)), p, (1,), (0,))
    o = sympy.n_order(m, p)
    v = 0
    x = m ** o - 1
    while x % p == 0:
        x //= p
        v += 1
    r = [1] * o
    s = [0] * o
    r[o - 1] = Fraction(p) ** (t * v)
    s[o - 1] = -t
    return ZetaSpec((Q(m), Q(m)), p, tuple(r), tuple(s))
