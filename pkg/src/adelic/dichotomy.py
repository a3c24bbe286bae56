"""Rational-or-natural-boundary classification of perturbed rational series.

A :class:`PerturbedSeries` is sum_n f(n) a_n x^n where a_n is a stable
polynomial-exponential sequence and f is a product of p-adic factors
|u_n|_w^c and an optional quasi-polynomial.  :func:`classify_main` decides
whether f is a quasi-polynomial; :func:`classify_bmw` handles the products
of |xi^n - 1| over archimedean places and a finite set S.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import sympy
from mpmath import iv

from . import _poly
from .aqp import (PAdicFactorSpec, QuasiPolynomial, aqc_certificate, decompose_with_budget,
                  zeros_in_Zp)
from .errors import (NotStable, RootOfUnityInput, StabilityError, UnsupportedExactForm,
                     VerificationFailure)
from .lrs import ZERO, PolyExpSeq, essential_part, is_v_stable, term
from .numfield import AlgebraicNumber, is_root_of_unity, mahler_measure, nf_create
from .places import Arch, NonArch, arch_places, place_from_selector, valuation
from .powerproduct import ONE, PowerProduct
from .rational import (RationalFunction, hankel_rank_profile, rationality_test,
                       rf_from_roots, series_exp)
from .realalg import RealAlgebraic, _bounds

log = logging.getLogger(__name__)

RATIONAL = "Rational"
NATURAL_BOUNDARY = "NaturalBoundary"
UNDECIDED = "Undecided"


# -- intervals --------------------------------------------------------------------

def _pp_bounds(pp: PowerProduct, dps: int = 40):
    """Rational lower and upper bounds for a positive PowerProduct."""
    if pp.is_rational:
        return pp.rational, pp.rational
    iv.dps = dps
    acc = iv.mpf(1)
    for p, e in pp.radical:
        acc = acc * iv.mpf(p) ** (iv.mpf(e.numerator) / e.denominator)
    lo, hi = _bounds(acc)
    q = pp.rational
    return (q * lo, q * hi) if q > 0 else (q * hi, q * lo)


@dataclass(frozen=True)
class Interval:
    """Certified enclosure [lo, hi] of a positive real; ``exact`` keeps the
    symbolic value (a string) when one is available."""
    lo: Fraction
    hi: Fraction
    exact: str = ""

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def to_json(self):
        return {"lo": f"{self.lo.numerator}/{self.lo.denominator}",
                "hi": f"{self.hi.numerator}/{self.hi.denominator}",
                "approx": repr(round(self.mid, 12)),
                "exact": self.exact}


def _round_out(lo: Fraction, hi: Fraction, digits: int = 30):
    """Outward rounding to a fixed denominator keeps JSON compact."""
    D = 10 ** digits
    return Fraction(math.floor(lo * D), D), Fraction(math.ceil(hi * D), D)


def _radius_interval(max_abs: RealAlgebraic, M: PowerProduct, dps: int = 40) -> Interval:
    """Enclosure of 1 / (max_abs * M)."""
    alo, ahi = max_abs.enclosure(dps)
    mlo, mhi = _pp_bounds(M, dps)
    if alo == ahi and mlo == mhi:
        r = 1 / (alo * mlo)
        return Interval(r, r, str(r))
    lo, hi = _round_out(1 / (ahi * mhi), 1 / (alo * mlo))
    return Interval(lo, hi, f"1/({max_abs!r} * {M!r})")


# -- verdicts -------------------------------------------------------------------------

@dataclass
class DichotomyVerdict:
    kind: str
    radius: Interval
    witness: object = None
    diagnostics: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class RationalWitness:
    """sum_n f(n) a_n x^n = sum_r r * R_r(M x): one rational function per
    radical r (a PowerProduct with rational part 1), in the variable y = M x."""
    scale: PowerProduct
    components: tuple  # ((radical, RationalFunction), ...)


# -- the series ------------------------------------------------------------------------

def reference_place(field) -> Arch:
    return arch_places(field)[0]


def _check_stable(base) -> None:
    if base is ZERO:
        raise StabilityError("the base sequence is zero")
    verdict = is_v_stable(base, reference_place(base.field))
    if not verdict.stable:
        raise StabilityError("base sequence is not stable at the archimedean place",
                             witness={"place": "inf:0", "class": verdict.witness, "L": verdict.L})


@dataclass(frozen=True)
class PerturbedSeries:
    """sum_n qp(n) prod_j |u_{j,n}|_{w_j}^{c_j} a_n x^n.

    Coefficient 0 uses ``f0`` (default 1) in place of f(0)."""
    base: PolyExpSeq
    factors: tuple = ()
    qp: QuasiPolynomial = None
    f0: Fraction = None
    check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.check:
            _check_stable(self.base)
        for fac in self.factors:
            if not fac.normalized:
                raise ValueError("factor specs must be normalised (use PAdicFactorSpec.create)")

    @property
    def M(self) -> PowerProduct:
        out = ONE
        for fac in self.factors:
            out = out * fac.M ** fac.c
        return out

    def f_value(self, n: int):
        """f(n) as (Fraction multiplier, PowerProduct), honouring the n = 0 convention."""
        if n == 0:
            return Fraction(1 if self.f0 is None else self.f0), ONE
        pp = ONE
        for fac in self.factors:
            pp = pp * fac.value(n)
        q = Fraction(1) if self.qp is None else Fraction(self.qp(n))
        return q, pp

    def scaled_f_value(self, n: int):
        """f(n) / M^n as (Fraction, PowerProduct)."""
        if n == 0:
            return self.f_value(0)
        pp = ONE
        for fac in self.factors:
            pp = pp * fac.normalized_value(n)
        q = Fraction(1) if self.qp is None else Fraction(self.qp(n))
        return q, pp


def radius(series) -> Interval:
    """Radius of convergence R / M of a PerturbedSeries (or a BMWSpec)."""
    if isinstance(series, BMWSpec):
        return _bmw_radius(series)
    ess = essential_part(series.base, reference_place(series.base.field))
    return _radius_interval(ess.M, series.M)


# -- coefficients ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactCoefficient:
    """scalar * radical with scalar in the base field and radical = prod p^e."""
    scalar: object
    radical: PowerProduct

    def __float__(self):
        return float(self.scalar) * float(self.radical)


@dataclass(frozen=True)
class TrackedFloat:
    value: complex
    error: float

    def __float__(self):
        return float(self.value.real)


def _radical_split(pp: PowerProduct):
    return pp.rational, PowerProduct(Fraction(1), pp.radical)


def _simplify(x):
    if isinstance(x, AlgebraicNumber) and x.is_rational():
        return x.coords[0]
    return x


def _check_single_prime(radicals) -> None:
    primes = {p for r in radicals for p, _ in r.radical}
    if len(primes) > 1:
        raise UnsupportedExactForm(f"radicals over several primes {sorted(primes)} share no Q(p^(1/D))")


def coefficients(series, N: int, mode: str = "exact", scaled: bool = False):
    """The first N coefficients f(n) a_n (n = 0..N-1) of a PerturbedSeries, or
    c_1..c_N of a BMWSpec.  ``scaled`` divides by M^n first."""
    if N < 1:
        raise ValueError("N must be positive")
    if isinstance(series, BMWSpec):
        vals = [bmw_coefficient(series, n) for n in range(1, N + 1)]
        if mode == "float":
            return [TrackedFloat(complex(float(v)), abs(float(v)) * 1e-15) for v in vals]
        return vals
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    radicals = set()
    for n in range(N):
        a = term(series.base, n)
        if mode == "float":
            out.append(_float_coefficient(series, n, a, scaled))
            continue
        q, pp = series.scaled_f_value(n) if scaled else series.f_value(n)
        r, rad = _radical_split(pp)
        scalar = _simplify(a * (q * r)) if not isinstance(a, Fraction) else a * q * r
        if rad == ONE:
            out.append(scalar)
        else:
            radicals.add(rad)
            out.append(ExactCoefficient(scalar, rad))
    if radicals:
        _check_single_prime(radicals)
    return out


def _float_coefficient(series, n, a, scaled):
    if isinstance(a, Fraction):
        av = complex(float(a))
    elif a.is_rational():
        av = complex(float(a.coords[0]))
    else:
        z = a.field.embed(a, 0, 30)
        av = complex(float(z.real), float(z.imag))
    if n == 0:
        fv = float(series.f0 if series.f0 is not None else 1)
    else:
        logf = 0.0
        zero = False
        for fac in series.factors:
            un = term(fac.u, n)
            if un == 0:
                zero = True
                break
            logf += float(fac.c) * (-float(valuation(un, fac.w))) * math.log(fac.w.p)
        fv = 0.0 if zero else math.exp(logf - (n * series.M.log() if scaled else 0.0))
        if series.qp is not None:
            fv *= float(series.qp(n))
    val = av * fv
    return TrackedFloat(val, abs(val) * (n + 4) * 4e-16)


# -- rational reconstruction of the quasi-polynomial case -------------------------------------

def _grouped_scaled(series, N: int):
    """Scaled coefficients split by radical: {radical: [scalar_n]}."""
    groups = {}
    for n in range(N):
        a = term(series.base, n)
        q, pp = series.scaled_f_value(n)
        r, rad = _radical_split(pp)
        s = a * (q * r)
        s = _simplify(s) if isinstance(s, AlgebraicNumber) else Fraction(s)
        groups.setdefault(rad, [0] * N)[n] = s
    zero = Fraction(0)
    for rad, seq in groups.items():
        groups[rad] = [zero if (isinstance(x, int) and x == 0) else x for x in seq]
    _check_single_prime([r for r in groups if r != ONE])
    return groups


def _reconstruct(series, max_order: int, fit: int, fresh: int):
    groups = _grouped_scaled(series, fit + fresh)
    comps = []
    for rad in sorted(groups, key=lambda r: (r.radical, r.rational)):
        seq = groups[rad]
        rf = rationality_test(seq[:fit], max_order)
        if rf is None:
            return None, {"radical": repr(rad), "reason": "no recurrence of bounded order"}
        if rf.series(fit + fresh) != seq:
            raise VerificationFailure("rational witness fails on fresh coefficients",
                                      witness={"radical": repr(rad)})
        comps.append((rad, rf))
    return RationalWitness(series.M, tuple(comps)), None


def _factor_status(fac: PAdicFactorSpec, precision: int, depth: int):
    W, L, secs = decompose_with_budget(fac, precision)
    reports = [zeros_in_Zp(g, depth) for g in secs]
    statuses = [r.status for r in reports]
    if "ZEROS" in statuses:
        status = "ZEROS"
    elif "UNKNOWN" in statuses:
        status = "UNKNOWN"
    else:
        status = "NO_ZEROS"
    return status, L, reports


def classify_main(series: PerturbedSeries, depth: int = 1, precision: int = 20,
                  fresh: int = 20, max_terms: int = 4000) -> DichotomyVerdict:
    """Rational iff the perturbation f is a quasi-polynomial."""
    _check_stable(series.base)
    rad = radius(series)
    diag = {"factors": []}
    zero_hits = []
    unknown = []
    for j, fac in enumerate(series.factors):
        status, L, reports = _factor_status(fac, precision, depth)
        diag["factors"].append({"place": fac.w.selector, "p": fac.w.p, "c": str(fac.c),
                                "L": L, "status": status,
                                "sections": [r.status for r in reports]})
        if status == "ZEROS":
            for b, r in enumerate(reports):
                if r.zeros:
                    z = r.zeros[0]
                    zero_hits.append({"factor": j, "place": fac.w.selector, "section": b, "L": L,
                                      "zero_residue": z.residue, "known_mod_p_power": z.exponent,
                                      "exact_integer_zero": z.exact})
                    break
        elif status == "UNKNOWN":
            unknown.append(j)
    if zero_hits:
        primes = [series.factors[h["factor"]].w.p for h in zero_hits]
        clash = len(set(primes)) < len(primes)
        qp_zero = series.qp is not None and any(not _poly.trim(list(pl)) for pl in series.qp.polys)
        if clash or qp_zero:
            diag["reason"] = ("factors at one prime both have zeros and may cancel" if clash
                              else "the quasi-polynomial multiplier vanishes on a class")
            return DichotomyVerdict(UNDECIDED, rad, None, diag)
        return DichotomyVerdict(NATURAL_BOUNDARY, rad, zero_hits[0], diag)
    if unknown:
        diag["reason"] = f"zero search undecided for factors {unknown}"
        return DichotomyVerdict(UNDECIDED, rad, None, diag)
    # every factor is quasi-constant after scaling: bound the order and rebuild
    d, T = 1, 0
    for fac in series.factors:
        cert = aqc_certificate(fac, depth)
        d = d * cert.modulus // math.gcd(d, cert.modulus)
        T = max(T, max(cert.thresholds.values(), default=0))
    deg = 0
    if series.qp is not None:
        d = d * series.qp.d // math.gcd(d, series.qp.d)
        T = max(T, series.qp.threshold)
        deg = max(len(_poly.trim(list(pl))) for pl in series.qp.polys) - 1
    r = sum(len(poly) for poly, _ in series.base.terms)
    max_order = T + r * d * (max(deg, 0) + 1) + 1
    fit = max_order * 2 + 8
    if fit + fresh > max_terms:
        diag["reason"] = f"reconstruction needs {fit + fresh} terms, budget {max_terms}"
        return DichotomyVerdict(UNDECIDED, rad, None, diag)
    witness, why = _reconstruct(series, max_order, fit, fresh)
    if witness is None:
        raise VerificationFailure("quasi-constant perturbation but no rational reconstruction",
                                  witness=why)
    diag.update({"modulus": d, "threshold": T, "order_bound": max_order, "fit_terms": fit,
                 "fresh_terms": fresh})
    return DichotomyVerdict(RATIONAL, rad, witness, diag)


def classify_rw(a: PolyExpSeq, u: PolyExpSeq, S, c, **kw) -> DichotomyVerdict:
    """sum_n prod_{v in S} |u_n|_v^{c_v} a_n x^n."""
    if len(S) != len(c):
        raise ValueError("S and c must have the same length")
    _check_stable(a)
    factors = []
    for v, cv in zip(S, c):
        try:
            factors.append(PAdicFactorSpec.create(u, v, cv))
        except NotStable as exc:
            raise StabilityError(f"u is not {v.selector}-stable",
                                 witness={"place": v.selector, "class": exc.witness}) from exc
    return classify_main(PerturbedSeries(a, tuple(factors)), **kw)


# -- products of |xi^n - 1| ---------------------------------------------------------------------

@dataclass(frozen=True)
class BMWCurve:
    xi: AlgebraicNumber
    S: tuple  # NonArch places of xi.field (selector strings are resolved)

    def __post_init__(self):
        S = tuple(place_from_selector(self.xi.field, v) if isinstance(v, str) else v for v in self.S)
        object.__setattr__(self, "S", S)

    @property
    def field(self):
        return self.xi.field


@dataclass(frozen=True)
class BMWSpec:
    """c_n = prod_j c_{j,n}, c_{j,n} = prod_{v in M_inf and S_j} |xi_j^n - 1|_v^{delta_v}."""
    curves: tuple

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        if not self.curves:
            raise ValueError("need at least one curve")
        for cv in self.curves:
            if cv.xi.is_zero() or is_root_of_unity(cv.xi) is not None:
                raise RootOfUnityInput(f"{cv.xi} is zero or a root of unity", witness=cv.xi)

    @staticmethod
    def single(xi: AlgebraicNumber, S=()) -> "BMWSpec":
        return BMWSpec((BMWCurve(xi, tuple(S)),))


def c_inf(curve: BMWCurve, n: int) -> Fraction:
    """prod over archimedean places of |xi^n - 1|_v^{delta_v} = |Norm(xi^n - 1)|."""
    return abs((curve.xi ** n - 1).norm())


def c_zero(curve: BMWCurve, n: int) -> Fraction:
    """prod over v in S of |xi^n - 1|_v^{delta_v}."""
    x = curve.xi ** n - 1
    if x.is_zero():
        return Fraction(0)
    out = Fraction(1)
    for v in curve.S:
        e = v.delta * valuation(x, v)  # an integer: f_v times the prime-ideal valuation
        out *= Fraction(v.p) ** (-int(e))
    return out


def bmw_coefficient(spec: BMWSpec, n: int) -> Fraction:
    out = Fraction(1)
    for cv in spec.curves:
        out *= c_inf(cv, n) * c_zero(cv, n)
    return out


def _monic_mahler(xi: AlgebraicNumber) -> RealAlgebraic:
    mp_ = _poly.primitive_int(xi.minpoly())
    k = (len(xi.charpoly()) - 1) // (len(mp_) - 1)
    m = mahler_measure(mp_).scale(Fraction(1, abs(mp_[-1])))
    return m.pow(k) if k > 1 else m


def bmw_M(spec: BMWSpec) -> PowerProduct:
    out = ONE
    for cv in spec.curves:
        for v in cv.S:
            e = v.delta * valuation(cv.xi, v)
            if e < 0:
                out = out * PowerProduct(Fraction(v.p) ** int(-e))
    return out


def _bmw_radius(spec: BMWSpec) -> Interval:
    R_inv = None
    for cv in spec.curves:
        m = _monic_mahler(cv.xi)
        R_inv = m if R_inv is None else R_inv * m
    return _radius_interval(R_inv, bmw_M(spec))


def _scaled_root_poly(P, lam: Fraction):
    """Monic polynomial whose roots are lam times those of the monic P."""
    d = len(P) - 1
    return [P[i] * lam ** (d - i) for i in range(d + 1)]


def _product_root_poly(P, Q):
    """Monic polynomial whose roots are all products of a root of P and one of Q."""
    y, z = sympy.symbols("y z")
    Pz = sum(sympy.Rational(c.numerator, c.denominator) * z ** i for i, c in enumerate(P))
    dq = len(Q) - 1
    Qyz = sum(sympy.Rational(c.numerator, c.denominator) * y ** i * z ** (dq - i) for i, c in enumerate(Q))
    res = sympy.Poly(sympy.resultant(Pz, Qyz, z), y)
    cs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(res.all_coeffs())]
    lead = cs[-1]
    return [c / lead for c in cs]


def _curve_signed_roots(cv: BMWCurve):
    """[(P_k, eps_k)] with c_{n} = sum_k eps_k * (sum of n-th powers of the roots of P_k)
    for n >= 1 (the rational-case integer form)."""
    f = [Fraction(c) for c in cv.xi.charpoly()]
    d = len(f) - 1
    x = sympy.symbols("x")
    fx = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f)], x)
    below_m1 = 0
    inside = 0
    for rt in sympy.real_roots(fx):
        if rt < -1:
            below_m1 += 1
        elif -1 < rt < 1:
            inside += 1
    sigma1 = -1 if below_m1 % 2 else 1
    sigma0 = -1 if inside % 2 else 1
    T = Fraction(1)
    for v in cv.S:
        e = v.delta * valuation(cv.xi, v)
        if e < 0:
            T *= Fraction(v.p) ** int(-e)
    lam = sigma1 * T
    out = []
    for k in range(d + 1):
        Pk = [Fraction(-1), Fraction(1)] if k == 0 else _poly.subset_product_poly(f, k)
        out.append((_scaled_root_poly([Fraction(c) for c in Pk], lam), sigma0 * (-1) ** (d - k)))
    return out


def bmw_integer_form(spec: BMWSpec):
    """Signed root polynomials of c_n over all curves (valid in the rational case)."""
    acc = None
    for cv in spec.curves:
        part = _curve_signed_roots(cv)
        if acc is None:
            acc = part
        else:
            acc = [(_product_root_poly(P, Q), e * f) for P, e in acc for Q, f in part]
    return acc


def bmw_predicate(spec: BMWSpec):
    """(j, place) pairs with |xi_j|_v = 1 for some v in S_j."""
    hits = []
    for j, cv in enumerate(spec.curves):
        for v in cv.S:
            if valuation(cv.xi, v) == 0:
                hits.append((j, v.selector))
    return hits


def zeta_from_coefficients(c) -> list:
    """Z_0..Z_N of exp(sum_{n>=1} c_n x^n / n) for c = [c_1, ..., c_N]."""
    a = [Fraction(0)] + [Fraction(cn) / n for n, cn in enumerate(c, start=1)]
    return series_exp(a, len(c))


def _rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    return _poly.trim(_poly.mul(list(a.num), list(b.den))) == _poly.trim(_poly.mul(list(b.num), list(a.den)))


def classify_bmw(spec: BMWSpec, evidence_lengths=(50, 100, 200)) -> DichotomyVerdict:
    """Exact criterion: natural boundary iff |xi_j|_v = 1 for some v in S_j."""
    rad = _bmw_radius(spec)
    hits = bmw_predicate(spec)
    if hits:
        j, sel = hits[0]
        N = max(evidence_lengths)
        cs = [bmw_coefficient(spec, n) for n in range(1, N + 1)]
        ranks = hankel_rank_profile(cs, list(evidence_lengths))
        increasing = all(ranks[a] < ranks[b] for a, b in zip(evidence_lengths, evidence_lengths[1:]))
        log.info("classify_bmw: Hankel ranks %s (strictly increasing: %s)", ranks, increasing)
        return DichotomyVerdict(NATURAL_BOUNDARY, rad,
                                {"curve": j, "place": sel, "abs_value": "1"},
                                {"hankel_ranks": ranks, "rank_increasing": increasing})
    form = bmw_integer_form(spec)
    Z_int = rf_from_roots([(P, -e) for P, e in form])
    order = max(sum(len(P) - 1 for P, _ in form), 1)  # bounds both F and Z
    n_check = max(4 * order, 2 * order + 8)
    cs = [bmw_coefficient(spec, n) for n in range(1, n_check + 1)]
    F_seq = [Fraction(0)] + cs
    Z_seq = zeta_from_coefficients(cs)
    F_rf = rationality_test(F_seq, 2 * order + 2)
    Z_rf = rationality_test(Z_seq, 2 * order + 2)
    if F_rf is None or Z_rf is None:
        raise VerificationFailure("rational case but the truncations show no short recurrence")
    if not _rf_equal(Z_rf, Z_int):
        raise VerificationFailure("integer-form zeta disagrees with the reconstruction")
    return DichotomyVerdict(RATIONAL, rad, {"F": F_rf, "Z": Z_rf},
                            {"integer_form": [([str(c) for c in P], e) for P, e in form],
                             "check_terms": n_check})


# -- the Step-1 identity -------------------------------------------------------------------------

def _cyclotomic(d: int):
    x = sympy.symbols("x")
    cs = sympy.Poly(sympy.cyclotomic_poly(d, x), x).all_coeffs()
    return [int(c) for c in reversed(cs)]


@dataclass
class Step1Report:
    d: int
    bad_classes: list
    N: int
    vanishing_ok: bool
    nonvanishing_bad: list  # indices n in a bad class with A_n != 0
    rank_profile: dict
    rank: int
    stabilized: bool
    coefficients: list = dc_field(repr=False, default_factory=list)


def step1_identity_check(series: PerturbedSeries, bad_classes, d: int, N: int,
                         rank_checkpoints=None) -> Step1Report:
    """A(x) = sum_J (-1)^|J| zeta^{-m_J} F(zeta^|J| x), zeta = exp(2 pi i / d), J over the bad classes."""
    if d < 1:
        raise ValueError("d must be positive")
    bad = sorted(set(bad_classes))
    if any(not 0 <= m < d for m in bad):
        raise ValueError("bad classes must lie in 0..d-1")
    K = nf_create(tuple(_cyclotomic(d)))
    zeta = K.gen() if d > 1 else K.one()
    if d == 2:
        zeta = K(-1)
    F = coefficients(series, N, "exact")
    for c in F:
        if isinstance(c, ExactCoefficient):
            raise UnsupportedExactForm("Step-1 check needs rational coefficients")
        if isinstance(c, AlgebraicNumber) and not c.is_rational():
            raise UnsupportedExactForm("Step-1 check needs a rational base")
    F = [K(Fraction(c) if not isinstance(c, AlgebraicNumber) else c.coords[0]) for c in F]
    A = [K.zero() for _ in range(N)]
    b = len(bad)
    for mask in range(1 << b):
        J = [bad[i] for i in range(b) if mask >> i & 1]
        sign = -1 if len(J) % 2 else 1
        zJ = zeta ** len(J)
        pref = zeta ** ((-sum(J)) % d) * sign
        zn = K.one()
        for n in range(N):
            A[n] = A[n] + pref * zn * F[n]
            zn = zn * zJ
    nonvanishing = [n for n in range(N) if n % d in bad and not A[n].is_zero()]
    checkpoints = rank_checkpoints or sorted({max(N // 4, 1), max(N // 2, 1), N})
    prof = _exact_profile(A, checkpoints)
    rank = prof[N]
    half = prof[checkpoints[-2]] if len(checkpoints) > 1 else rank
    stabilized = half == rank and N >= 2 * rank + 2
    return Step1Report(d, bad, N, not nonvanishing, nonvanishing, prof, rank, stabilized, A)


def _exact_profile(seq, checkpoints):
    from .rational import berlekamp_massey
    _, _, prof = berlekamp_massey(list(seq), profile=True)
    return {n: prof[n - 1] for n in checkpoints}


# -- Pade evidence ---------------------------------------------------------------------------

@dataclass
class PadeOrder:
    L: int
    M: int
    poles: list
    condition: float
    skipped: bool
    effective_M: int = None  # smaller than M when the system was degenerate
    reduced: bool = False


@dataclass
class PadeTable:
    scale: float
    orders: list

    def count_in_annulus(self, lo: float, hi: float) -> dict:
        return {(o.L, o.M): sum(1 for z in o.poles if lo <= abs(z) <= hi)
                for o in self.orders if not o.skipped}


def _root_test_scale(c: np.ndarray) -> float:
    n = np.arange(len(c))
    mask = (np.abs(c) > 0) & (n > len(c) // 2)
    if not mask.any():
        return 1.0
    rates = np.log(np.abs(c[mask])) / n[mask]
    return float(np.exp(-np.max(rates)))


def _pade_system(cs, L, M):
    A = np.zeros((M, M))
    for i in range(1, M + 1):
        for j in range(1, M + 1):
            k = L + i - j
            A[i - 1, j - 1] = cs[k] if k >= 0 else 0.0
    rhs = -np.array([cs[L + i] for i in range(1, M + 1)])
    return A, rhs


def pade_boundary_scan(coeffs, orders, scale: float = None, cond_max: float = 1e12) -> PadeTable:
    """Poles of [L/M] Pade approximants; the coefficients are rescaled by
    scale^n before solving so the normal equations stay well conditioned.

    A degenerate system is retried with smaller denominator degree (flagged
    ``reduced``); an order with no usable degree is ``skipped``."""
    c = np.array([float(x) for x in coeffs], dtype=float)
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    if scale is None:
        scale = _root_test_scale(c)
    n = np.arange(len(c))
    cs = c * np.power(scale, n)
    out = []
    for L, M in orders:
        if L + M + 1 > len(cs):
            out.append(PadeOrder(L, M, [], math.inf, True))
            continue
        first_cond = None
        for Me in range(M, 0, -1):
            A, rhs = _pade_system(cs, L, Me)
            cond = float(np.linalg.cond(A))
            if first_cond is None:
                first_cond = cond
            if math.isfinite(cond) and cond <= cond_max:
                break
        else:
            log.info("pade [%d/%d] skipped, condition %.3g", L, M, first_cond)
            out.append(PadeOrder(L, M, [], first_cond, True))
            continue
        if Me < M:
            log.info("pade [%d/%d] degenerate, using denominator degree %d", L, M, Me)
        q = np.linalg.solve(A, rhs)
        den = np.concatenate([[1.0], q])
        while len(den) > 1 and abs(den[-1]) < 1e-14 * np.max(np.abs(den)):
            den = den[:-1]
        roots = np.roots(den[::-1]) if len(den) > 1 else np.array([])
        poles = sorted((complex(z) * scale for z in roots), key=lambda z: (abs(z), z.real, z.imag))
        out.append(PadeOrder(L, M, poles, cond, False, Me, Me < M))
    return PadeTable(scale, out)
