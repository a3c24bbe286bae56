"""Rational generating functions: Berlekamp-Massey, Hankel-rank profiles and
exact exp/log of power series.

Coefficient lists are low degree first.  The exact routines work over any
field whose elements support ``+ - * /`` and equality with 0 (Fraction,
AlgebraicNumber); the modular routines are fast lower bounds for ranks.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _poly

# Two Mersenne-ish primes used for modular rank evidence.
PRIMES = (2**61 - 1, 2**31 - 1)


def _is_zero(x) -> bool:
    return x == 0


def berlekamp_massey(seq, profile: bool = False):
    """Shortest connection polynomial C (C[0] = 1) with
    sum_i C[i] s[n-i] = 0 for all L <= n < len(seq).

    Returns (C, L), plus the list of linear complexities of every prefix when
    ``profile`` is set."""
    if not seq:
        return ([1], 0, []) if profile else ([1], 0)
    one = seq[0] ** 0 if not isinstance(seq[0], int) else Fraction(1)
    zero = one - one
    C = [one]
    B = [one]
    L = 0
    m = 1
    b = one
    prof = []
    for n in range(len(seq)):
        d = seq[n]
        for i in range(1, L + 1):
            if i < len(C):
                d = d + C[i] * seq[n - i]
        if _is_zero(d):
            m += 1
        else:
            coef = d / b
            T = list(C)
            need = len(B) + m
            if len(C) < need:
                C = C + [zero] * (need - len(C))
            for i, x in enumerate(B):
                C[i + m] = C[i + m] - coef * x
            if 2 * L <= n:
                L = n + 1 - L
                B = T
                b = d
                m = 1
            else:
                m += 1
        prof.append(L)
    while len(C) > 1 and _is_zero(C[-1]):
        C.pop()
    return (C, L, prof) if profile else (C, L)


def _to_mod(x, p: int) -> int:
    x = Fraction(x)
    den = x.denominator % p
    if den == 0:
        raise ZeroDivisionError("denominator vanishes modulo p")
    return x.numerator * pow(den, -1, p) % p


def berlekamp_massey_mod(seq, p: int):
    """Linear-complexity profile of ``seq`` reduced modulo the prime p."""
    s = [_to_mod(x, p) for x in seq]
    C = [1]
    B = [1]
    L = 0
    m = 1
    b = 1
    prof = []
    for n in range(len(s)):
        d = s[n]
        for i in range(1, min(L, len(C) - 1) + 1):
            d += C[i] * s[n - i]
        d %= p
        if d == 0:
            m += 1
        else:
            coef = d * pow(b, -1, p) % p
            T = list(C)
            need = len(B) + m
            if len(C) < need:
                C += [0] * (need - len(C))
            for i, x in enumerate(B):
                C[i + m] = (C[i + m] - coef * x) % p
            if 2 * L <= n:
                L = n + 1 - L
                B = T
                b = d
                m = 1
            else:
                m += 1
        prof.append(L)
    return prof


def hankel_rank_profile(coeffs, lengths, exact: bool = False) -> dict:
    """Linear complexity (the rank of the associated Hankel system) of each
    prefix coeffs[:N] for N in ``lengths``.

    Modular mode takes the maximum over :data:`PRIMES`; each value is a lower
    bound for the exact one and agrees with it unless a prime is unlucky."""
    top = max(lengths)
    seq = list(coeffs[:top])
    if exact:
        _, _, prof = berlekamp_massey(seq, profile=True)
    else:
        prof = None
        for p in PRIMES:
            try:
                pr = berlekamp_massey_mod(seq, p)
            except ZeroDivisionError:
                continue
            prof = pr if prof is None else [max(a, b) for a, b in zip(prof, pr)]
        if prof is None:
            _, _, prof = berlekamp_massey(seq, profile=True)
    return {N: prof[N - 1] for N in lengths}


@dataclass(frozen=True)
class RationalFunction:
    """num(x) / den(x) with den(0) = 1."""
    num: tuple
    den: tuple

    @property
    def order(self) -> int:
        return max(len(self.den) - 1, 0)

    def series(self, N: int) -> list:
        """First N Taylor coefficients."""
        num = list(self.num)
        den = list(self.den)
        zero = den[0] - den[0]
        out = []
        for n in range(N):
            c = num[n] if n < len(num) else zero
            for i in range(1, min(n, len(den) - 1) + 1):
                c = c - den[i] * out[n - i]
            out.append(c / den[0])
        return out

    def poles(self) -> list:
        """Complex poles (numeric, rational coefficients only)."""
        if len(self.den) <= 1:
            return []
        return sorted((complex(z) for z in np.roots([float(c) for c in reversed(self.den)])), key=lambda z: (abs(z), z.real, z.imag))

    def is_polynomial(self) -> bool:
        return len(self.den) <= 1

    def __repr__(self):
        def fmt(cs):
            return " + ".join(f"({c})*x^{i}" for i, c in enumerate(cs) if c != 0) or "0"
        return f"({fmt(self.num)}) / ({fmt(self.den)})"


def _from_connection(seq, C, L) -> RationalFunction:
    zero = C[0] - C[0]
    num = []
    for n in range(L):
        acc = zero
        for i in range(min(n, len(C) - 1) + 1):
            acc = acc + C[i] * seq[n - i]
        num.append(acc)
    while num and _is_zero(num[-1]):
        num.pop()
    return RationalFunction(tuple(num), tuple(C))


def reconstruct(seq, guard: int = 6):
    """Exact BM reconstruction, or None unless len(seq) >= 2 L + guard."""
    C, L = berlekamp_massey(list(seq))
    if len(seq) < 2 * L + guard:
        return None
    return _from_connection(seq, C, L)


def _modular_order(seq):
    best = None
    for p in PRIMES:
        try:
            prof = berlekamp_massey_mod(seq, p)
        except ZeroDivisionError:
            continue
        best = prof[-1] if best is None else max(best, prof[-1])
    return best


def rationality_test(coeffs, max_order: int, guard: int = 6):
    """Rational function matching every given coefficient, of order at most
    ``max_order`` and confirmed by at least 2*order + guard terms; else None."""
    seq = list(coeffs)
    if not seq:
        return None
    if all(isinstance(c, (int, Fraction)) for c in seq):
        seq = [Fraction(c) for c in seq]
        L = _modular_order(seq)
        if L is not None and (L > max_order or len(seq) < 2 * L + guard):
            return None
    C, L = berlekamp_massey(seq)
    if L > max_order or len(seq) < 2 * L + guard:
        return None
    rf = _from_connection(seq, C, L)
    if rf.series(len(seq)) != seq:
        return None
    return rf


# -- exact power series -------------------------------------------------------------

def series_exp(a, N: int) -> list:
    """Coefficients Z_0..Z_N of exp(sum_{k>=1} a_k x^k); a[0] is ignored."""
    Z = [Fraction(1)]
    for n in range(1, N + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if k < len(a):
                acc += k * a[k] * Z[n - k]
        Z.append(acc / n)
    return Z


def series_log(Z, N: int) -> list:
    """Coefficients a_0..a_N of log Z (Z[0] must be 1); a_0 = 0."""
    if Z[0] != 1:
        raise ValueError("log needs constant term 1")
    a = [Fraction(0)]
    for n in range(1, N + 1):
        acc = n * Fraction(Z[n])
        for k in range(1, n):
            acc -= k * a[k] * Z[n - k]
        a.append(acc / n)
    return a


def log_derivative(Z, N: int) -> list:
    """Coefficients 0..N of x Z'(x) / Z(x)."""
    a = series_log(Z, N)
    return [k * a[k] for k in range(N + 1)]


def poly_series_div(num, den, N: int) -> list:
    return RationalFunction(tuple(num), tuple(den)).series(N)


def rf_from_roots(beta_poly_pairs):
    """prod over (P, e) of R(x)^e, where R(x) = x^deg P(1/x) (normalised to
    constant term 1); e may be negative.  Returns a RationalFunction."""
    num = [Fraction(1)]
    den = [Fraction(1)]
    for P, e in beta_poly_pairs:
        R = list(reversed(_poly.trim(_poly.to_fractions(P))))
        R = [c / R[0] for c in R]
        for _ in range(abs(e)):
            if e > 0:
                num = _poly.mul(num, R)
            else:
                den = _poly.mul(den, R)
    g = _poly.gcd_(num, den)
    if len(g) > 1:
        num, _ = _poly.divmod_(num, g)
        den, _ = _poly.divmod_(den, g)
        c = den[0]
        num = [x / c for x in num]
        den = [x / c for x in den]
    return RationalFunction(tuple(_poly.trim(num)), tuple(_poly.trim(den)))
