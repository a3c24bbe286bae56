"""Dynamical zeta functions exp(sum_k N_k x^k / k) built from
deg(phi^k - 1) = prod_i (xi_i^k - 1) and inseparability data r_k |k|_p^{s_k}."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .dichotomy import (NATURAL_BOUNDARY, RATIONAL, DichotomyVerdict, Interval, _round_out)
from .errors import (NonIntegerDegree, NonIntegerFixedPointCount, RootOfUnityInput,
                     VerificationFailure)
from .numfield import AlgebraicNumber, abs_squared, is_root_of_unity
from .places import vp_int
from .rational import hankel_rank_profile, log_derivative, rationality_test, series_exp, series_log
from .realalg import RealAlgebraic

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZetaSpec:
    xi: tuple  # AlgebraicNumbers in one field
    p: int
    r: tuple  # r_1..r_L, positive rationals
    s: tuple  # s_1..s_L, nonpositive integers

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(self.xi))
        object.__setattr__(self, "r", tuple(Fraction(x) for x in self.r))
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        if not self.xi:
            raise ValueError("need at least one xi")
        if len({x.field for x in self.xi}) != 1:
            raise ValueError("all xi must lie in one field")
        for x in self.xi:
            if x.is_zero() or is_root_of_unity(x) is not None:
                raise RootOfUnityInput(f"{x} is zero or a root of unity", witness=x)
        if not self.r or len(self.r) != len(self.s):
            raise ValueError("r and s must be nonempty and of equal length")
        if any(x <= 0 for x in self.r):
            raise ValueError("r must be positive")
        if any(x > 0 for x in self.s):
            raise ValueError("s must be nonpositive")

    @property
    def L(self) -> int:
        return len(self.r)

    @staticmethod
    def separable(xi, p: int = 2) -> "ZetaSpec":
        return ZetaSpec(tuple(xi), p, (1,), (0,))


def deg_k(spec: ZetaSpec, k: int) -> Fraction:
    """prod_i (xi_i^k - 1), checked to be a rational integer."""
    if k < 1:
        raise ValueError("k must be positive")
    acc = spec.xi[0].field.one()
    for x in spec.xi:
        acc = acc * (x ** k - 1)
    if not acc.is_rational() or acc.coords[0].denominator != 1:
        raise NonIntegerDegree(f"deg(phi^{k} - 1) = {acc} is not a rational integer", witness=k)
    return acc.coords[0]


def insep_k(spec: ZetaSpec, k: int) -> Fraction:
    """r_k |k|_p^{s_k}, periodic indices r_k = r[(k - 1) mod L]."""
    if k < 1:
        raise ValueError("k must be positive")
    i = (k - 1) % spec.L
    val = spec.r[i] * Fraction(spec.p) ** (-vp_int(k, spec.p) * spec.s[i])
    if val.denominator != 1 or val < 1:
        raise NonIntegerFixedPointCount(f"inseparable degree {val} at k = {k} is not a positive integer",
                                        witness=k)
    return val


def fixed_points(spec: ZetaSpec, k: int) -> int:
    """N_k = deg_k / insep_k, a positive integer."""
    q = deg_k(spec, k) / insep_k(spec, k)
    if q.denominator != 1 or q <= 0:
        raise NonIntegerFixedPointCount(f"N_{k} = {q} is not a positive integer", witness=k)
    return int(q)


def lambda_value(spec: ZetaSpec) -> RealAlgebraic:
    """Lambda = prod_i max(|xi_i|, 1) at the reference embedding."""
    sq = RealAlgebraic.from_rational(1)
    for x in spec.xi:
        a2 = RealAlgebraic.from_rational(x.coords[0] ** 2) if x.is_rational() else abs_squared(x, 0)
        if a2.compare(1) > 0:
            sq = a2 if sq.rational == 1 else sq * a2
    return sq.sqrt() if sq.rational is None or sq.rational != 1 else sq


def lambda_radius(spec: ZetaSpec) -> Interval:
    lam = lambda_value(spec)
    if lam.rational is not None:
        return Interval(1 / lam.rational, 1 / lam.rational, f"1/{lam.rational}")
    lo, hi = lam.enclosure(40)
    lo2, hi2 = _round_out(1 / hi, 1 / lo)
    return Interval(lo2, hi2, f"1/{lam!r}")


def fixed_point_series(spec: ZetaSpec, N: int) -> list:
    """[0, N_1, ..., N_N]: the coefficients of x Z'(x) / Z(x)."""
    return [Fraction(0)] + [Fraction(fixed_points(spec, k)) for k in range(1, N + 1)]


def zeta_coeffs(spec: ZetaSpec, N: int) -> list:
    """Z_0..Z_N of exp(sum_{k=1}^N N_k x^k / k)."""
    if N < 1:
        raise ValueError("N must be positive")
    F = fixed_point_series(spec, N)
    a = [Fraction(0)] + [F[k] / k for k in range(1, N + 1)]
    return series_exp(a, N)


def log_coeffs(Z, N: int) -> list:
    return series_log(Z, N)


def check_log_derivative(spec: ZetaSpec, N: int) -> bool:
    """x Z'/Z reproduces N_k exactly up to order N."""
    return log_derivative(zeta_coeffs(spec, N), N) == fixed_point_series(spec, N)


def classify_zeta(spec: ZetaSpec, evidence_lengths=(40, 80, 160)) -> DichotomyVerdict:
    """Natural boundary on |x| = 1/Lambda iff some inseparable degree exceeds 1."""
    rad = lambda_radius(spec)
    hit = None
    # periodic r, s with s <= 0: k in 1..L p reaches every class with and without p | k
    for k in range(1, spec.L * spec.p + 1):
        fixed_points(spec, k)
        if insep_k(spec, k) > 1:
            hit = k
            break
    if hit is not None:
        N = max(evidence_lengths)
        ranks = hankel_rank_profile(fixed_point_series(spec, N), list(evidence_lengths))
        log.info("classify_zeta: Hankel ranks of sum N_k x^k: %s", ranks)
        return DichotomyVerdict(NATURAL_BOUNDARY, rad,
                                {"k": hit, "inseparable_degree": str(insep_k(spec, hit))},
                                {"hankel_ranks": ranks})
    order = 2 ** len(spec.xi)
    N = 4 * order + 8
    Z = zeta_coeffs(spec, N)
    rf = rationality_test(Z, order + 1)
    if rf is None:
        raise VerificationFailure("separable data but no rational zeta reconstruction")
    return DichotomyVerdict(RATIONAL, rad, {"Z": rf}, {"terms": N + 1})
