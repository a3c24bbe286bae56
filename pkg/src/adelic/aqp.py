"""Quasi-polynomials and almost-quasi-constant certificates for |u_n|_w^c.

The certificate construction follows the classical route: normalise so the
essential roots are w-units, split n = L m + b so that every normalised root
raised to L is close enough to 1 for the p-adic logarithm, write each section
as an analytic function g_b(m) on Z_p, locate its zeros by residue-class
subdivision (Strassmann bounds the count, Hensel certifies existence), and
read off classes on which |g_b| is constant via an ultrametric Lipschitz
bound.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import _poly
from .errors import (AllCoefficientsIndistinguishableFromZero, InconsistentOverlap,
                     NotNormalized, NotStable, PrecisionLoss)
from .lrs import ZERO, PolyExpSeq, essential_part, is_v_stable, term
from .numfield import AlgebraicNumber
from .places import (LocalElement, NonArch, embed_local, local_constant, local_log_exp,
                     valuation, vp_int)
from .powerproduct import ONE, PowerProduct


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# -- quasi-polynomials ------------------------------------------------------------

@dataclass(frozen=True)
class QuasiPolynomial:
    """f(n) = polys[n mod d](n) for n >= threshold."""
    d: int
    polys: tuple  # one coefficient tuple per class, low degree first
    threshold: int = 0

    def __post_init__(self):
        if self.d < 1 or len(self.polys) != self.d:
            raise ValueError("need one polynomial per residue class")

    @staticmethod
    def constant(values, threshold: int = 0) -> "QuasiPolynomial":
        return QuasiPolynomial(len(values), tuple((v,) for v in values), threshold)

    def __call__(self, n: int):
        if n < self.threshold:
            raise ValueError(f"n = {n} is below the validity threshold {self.threshold}")
        return _poly.evaluate(list(self.polys[n % self.d]), n)

    @property
    def is_constant(self) -> bool:
        return all(len(_poly.trim(list(p))) <= 1 for p in self.polys)


# -- factor specs -------------------------------------------------------------------

@dataclass(frozen=True)
class PAdicFactorSpec:
    """f(n) = |u_n|_w^c with u w-stable; normalised data attached when
    ``normalized`` is true."""
    u: PolyExpSeq
    w: NonArch
    c: Fraction
    normalized: bool = False
    alpha1: AlgebraicNumber = None
    M: PowerProduct = None  # |alpha1|_w = max_i |alpha_i|_w
    essential: PolyExpSeq = None  # essential part divided termwise by alpha1^n
    tail: tuple = ()  # non-essential normalised terms (poly, beta)

    @staticmethod
    def create(u: PolyExpSeq, w: NonArch, c=1, normalize: bool = True) -> "PAdicFactorSpec":
        if u is ZERO:
            raise NotStable("the zero sequence has no perturbation factor")
        verdict = is_v_stable(u, w)
        if not verdict.stable:
            raise NotStable(f"sequence is not {w.selector}-stable", witness=verdict.witness)
        spec = PAdicFactorSpec(u, w, Fraction(c))
        return normalize_spec(spec) if normalize else spec

    def value(self, n: int) -> PowerProduct:
        """f(n) = |u_n|_w^c exactly (0 when u_n = 0 and c > 0)."""
        un = term(self.u, n)
        if un == 0:
            return PowerProduct(Fraction(0)) ** self.c
        return PowerProduct.prime_power(self.w.p, -valuation(un, self.w)) ** self.c

    def normalized_value(self, n: int) -> PowerProduct:
        """f(n) / M^(n c)."""
        return self.value(n) / (self.M ** (n * self.c))


def normalize_spec(spec: PAdicFactorSpec) -> PAdicFactorSpec:
    ess = essential_part(spec.u, spec.w)
    alpha1 = ess.roots[0]
    terms = []
    tail = []
    ess_idx = set(ess.indices)
    for i, (poly, root) in enumerate(spec.u.terms):
        beta = root / alpha1
        if i in ess_idx:
            terms.append((poly, beta))
        else:
            tail.append((poly, beta))
    essential = PolyExpSeq.make(spec.u.field, terms)
    return PAdicFactorSpec(spec.u, spec.w, spec.c, True, alpha1, ess.M, essential, tuple(tail))


# -- local power series -----------------------------------------------------------

@dataclass
class LocalSeries:
    """g(x) = sum c_n x^n over K_w.

    ``coeffs`` are known to their own precision; every coefficient with index
    >= len(coeffs) has valuation >= ``tail_valuation`` (None: exactly zero).
    ``exact_eval(m)``, when given, returns g(m) as an exact field element for
    integers m >= 0."""
    place: NonArch
    coeffs: list
    precision: int
    tail_valuation: Fraction = None
    exact_eval: object = None
    exact_coeffs: bool = False

    @staticmethod
    def from_coefficients(place: NonArch, coeffs, precision: int = 20) -> "LocalSeries":
        """A polynomial with exact (rational or field) coefficients."""
        field = place.field
        els = [embed_local(field(c), place, precision) for c in coeffs]

        def ev(m, _c=[field(c) for c in coeffs]):
            return _poly.evaluate(_c, m)

        return LocalSeries(place, els, precision, None, ev, True)

    @property
    def p(self):
        return self.place.p

    def _coeff_val(self, c: LocalElement):
        return c.valuation()

    def _floor_val(self) -> Fraction:
        """Valuation floor beyond which coefficients are indistinguishable."""
        bounds = [Fraction(self.precision)]
        if self.tail_valuation is not None:
            bounds.append(Fraction(self.tail_valuation))
        return min(bounds)

    def coefficient_valuations(self):
        """Per-index valuation or None (zero to precision or exactly zero)."""
        return [self._coeff_val(c) for c in self.coeffs]

    def gauss_valuation(self):
        """min_n v(c_n), or None when undetermined."""
        vals = [v for v in self.coefficient_valuations() if v is not None]
        floor = self._floor_val() if not self.exact_coeffs else None
        if not vals:
            return None
        m = min(vals)
        if floor is not None and m >= floor:
            return None
        return m

    def lipschitz_valuation(self):
        """v(Lip) for Lip = max_{n>=1} |c_n|; None when Lip is exactly 0.

        When undetermined, returns a conservative lower bound (a larger
        Lipschitz constant)."""
        vals = [v for v in self.coefficient_valuations()[1:] if v is not None]
        if self.exact_coeffs:
            return min(vals) if vals else None
        floor = self._floor_val()
        return min(vals + [floor])

    def value_at(self, x: int) -> LocalElement:
        w = self.place
        acc = local_constant(w, 0, self.precision)
        xp = 1
        for c in self.coeffs:
            acc = acc + c * xp if xp else acc
            xp *= x
        if self.tail_valuation is not None:
            cap = math.floor(self.tail_valuation)
            if acc.precision > cap:
                acc = LocalElement.make(w, acc.shift, acc.coords, max(cap - acc.shift, 0))
        return acc

    def exact_value_valuation(self, x: int):
        """Exact valuation of g(x) if available (None for an exact zero)."""
        if self.exact_eval is None:
            raise ValueError("no exact evaluator")
        val = self.exact_eval(x)
        if val == 0:
            return None
        return valuation(val, self.place)

    def derivative_at(self, x: int) -> LocalElement:
        w = self.place
        acc = local_constant(w, 0, self.precision)
        xp = 1
        for n in range(1, len(self.coeffs)):
            if xp:
                acc = acc + self.coeffs[n] * (n * xp)
            xp *= x
        if self.tail_valuation is not None:
            cap = math.floor(self.tail_valuation)
            if acc.precision > cap:
                acc = LocalElement.make(w, acc.shift, acc.coords, max(cap - acc.shift, 0))
        return acc


def strassmann_bound(g: LocalSeries) -> int:
    """Largest index attaining max |c_n|; bounds the zeros in the closed unit ball."""
    vals = g.coefficient_valuations()
    known = [v for v in vals if v is not None]
    if not known:
        raise AllCoefficientsIndistinguishableFromZero("raise the working precision")
    vmin = min(known)
    if not g.exact_coeffs and vmin >= g._floor_val():
        raise AllCoefficientsIndistinguishableFromZero("raise the working precision")
    return max(i for i, v in enumerate(vals) if v == vmin)


# -- zeros in Z_p -----------------------------------------------------------------

_EXACT = 10 ** 9  # exponent recorded for exact integer zeros


@dataclass
class ZeroApprox:
    residue: int
    exponent: int  # residue is known modulo p^exponent
    exact: bool  # residue is itself an exact integer zero
    refinements: list = dc_field(default_factory=list)  # (residue mod p^j) for j = 1..


@dataclass
class ZeroReport:
    status: str  # "NO_ZEROS" | "ZEROS" | "UNKNOWN"
    zeros: list
    depth: int
    zero_classes: list  # residues mod p^depth containing a certified zero
    unresolved: list  # residues mod p^depth with undecided status
    strassmann: int
    constant_classes: dict  # (residue, exponent) -> exact valuation of |g| on the class

    @property
    def bad_classes(self):
        return sorted(set(self.zero_classes) | set(self.unresolved))


def _value_valuation(g: LocalSeries, c: int):
    """(valuation or None, is_exact_zero).  None means >= the precision floor."""
    if g.exact_eval is not None:
        v = g.exact_value_valuation(c)
        return v, v is None
    el = g.value_at(c)
    return el.valuation(), False


def _hensel_zero(g: LocalSeries, c: int, j: int):
    """Certify a zero of g in c + p^j Z_p (degree-one completions only).
    Returns the exponent h with the zero = c mod p^h, or None."""
    if len(g.place.local_factor(1)) != 2:
        return None
    gauss = g.gauss_valuation()
    if gauss is None:
        return None
    gv, exact_zero = _value_valuation(g, c)
    if exact_zero:
        return math.inf
    if gv is None:
        gv = g._floor_val()
    dv = g.derivative_at(c).valuation()
    if dv is None:
        return None
    # Hensel for a series of Gauss norm p^-gauss: |g(c)| |g|_gauss < |g'(c)|^2
    if gv + gauss > 2 * dv and gv - dv >= j:
        return gv - dv
    return None


def newton_refine(g: LocalSeries, x: int, steps: int = 6):
    """Newton iterates of a simple zero near x in Z_p (degree-one completions).
    Returns the list of (iterate, exponent of certainty)."""
    p = g.p
    out = []
    for _ in range(steps):
        gx = g.value_at(x)
        dx = g.derivative_at(x)
        vg, vd = gx.valuation(), dx.valuation()
        if vd is None:
            break
        if vg is None:
            out.append((x % p ** gx.precision, gx.precision - vd))
            break
        prec = min(gx.precision, dx.precision) - vd
        if prec <= 0:
            break
        m = p ** max(prec, 1)
        qshift = gx.shift - dx.shift
        num = gx.coords[0] * pow(dx.coords[0], -1, m)
        step = num * p ** qshift if qshift >= 0 else None
        if step is None:
            break
        x = (x - step) % (p ** max(prec + qshift, 1))
        out.append((x, int(min(prec + qshift, g.precision))))
    return out


def zeros_in_Zp(g: LocalSeries, depth: int, extra_depth: int = 24) -> ZeroReport:
    """Residue-class search for zeros of g on Z_p down to p^depth.

    A class c + p^j Z_p is discarded once |g(c)| > Lip p^-j (then |g| is
    constant on it); zeros are certified by an exact integer zero or by
    Hensel's lemma, and once as many zeros are certified as the Strassmann
    bound allows, every other class is zero-free."""
    p = g.p
    try:
        N = strassmann_bound(g)
    except AllCoefficientsIndistinguishableFromZero:
        N = None
    lipv = g.lipschitz_valuation()
    constant = {}
    zeros = []  # ZeroApprox
    zero_classes = set()
    pending = []
    stack = [(c, 1) for c in reversed(range(p))]

    def known_zero(c, j):
        return any(j <= z.exponent and (z.residue - c) % p ** j == 0 for z in zeros)

    while stack:
        c, j = stack.pop()
        gv, exact_zero = _value_valuation(g, c)
        if not exact_zero and gv is not None and (lipv is None or gv < lipv + j):
            constant[(c, j)] = gv
            continue
        has_zero = known_zero(c, j)
        if not has_zero and exact_zero:
            zeros.append(ZeroApprox(c, _EXACT, True))
            has_zero = True
        elif not has_zero:
            h = _hensel_zero(g, c, j)
            if h is not None:
                z = ZeroApprox(c, int(math.floor(h)), False)
                for x, e in newton_refine(g, c):
                    if e > z.exponent:
                        z.residue, z.exponent = x, e
                # Hensel balls that meet describe the same zero
                same = [o for o in zeros
                        if (o.residue - z.residue) % p ** min(o.exponent, z.exponent) == 0]
                if same:
                    o = same[0]
                    if z.exponent > o.exponent and not o.exact:
                        o.residue, o.exponent = z.residue, z.exponent
                else:
                    zeros.append(z)
                has_zero = True
        if has_zero and j >= depth:
            zero_classes.add(c % p ** depth)
            continue
        if j < depth + extra_depth:
            stack.extend((c + a * p ** j, j + 1) for a in reversed(range(p)))
        else:
            pending.append((c, j))
    all_known = N is not None and len(zeros) == N
    unresolved = set()
    for c, j in pending:
        if all_known:
            # zero-free by the Strassmann count, but |g| not yet constant here
            unresolved.add(c % p ** depth)
        else:
            unresolved.add(c % p ** depth)
    unresolved -= zero_classes
    for z in zeros:
        top = min(z.exponent, depth + 4)
        z.refinements = [z.residue % p ** i for i in range(1, max(top, 1) + 1)]
    zeros.sort(key=lambda z: z.residue)
    if unresolved and not all_known:
        status = "UNKNOWN"
    elif zeros:
        status = "ZEROS"
    else:
        status = "NO_ZEROS"
    return ZeroReport(status, zeros, depth, sorted(zero_classes), sorted(unresolved),
                      N if N is not None else -1, constant)


# -- Skolem decomposition ----------------------------------------------------------

def _residue_order(beta: AlgebraicNumber, w: NonArch) -> int:
    q = w.p ** w.f - 1
    divisors = sorted(d for d in range(1, q + 1) if q % d == 0)
    for d in divisors:
        x = beta ** d - 1
        if x.is_zero() or valuation(x, w) > 0:
            return d
    raise ArithmeticError("residue order not found")


def skolem_L(roots, w: NonArch) -> int:
    """Least L (of the form residue order times a p-power per root, combined by
    lcm) with v(beta^L - 1) > 1/(p-1) for every root."""
    p = w.p
    L = 1
    for beta in roots:
        L0 = _residue_order(beta, w)
        t = 0
        while True:
            x = beta ** (L0 * p ** t) - 1
            if x.is_zero() or valuation(x, w) > Fraction(1, p - 1):
                break
            t += 1
        L = _lcm(L, L0 * p ** t)
    return L


def _exp_terms(lam: LocalElement, count: int):
    """[lam^k / k! for k < count]."""
    out = [local_constant(lam.place, 1, lam.precision)]
    cur = out[0]
    for k in range(1, count):
        cur = (cur * lam).divide_exact_int(k)
        out.append(cur)
    return out


def skolem_decompose(spec: PAdicFactorSpec, precision: int = 20):
    """(L, [g_0, ..., g_{L-1}]) with u~_{Lm+b} = g_b(m) for the normalised
    essential part u~."""
    if not spec.normalized:
        raise NotNormalized("normalise the factor spec first")
    w = spec.w
    p = w.p
    ess = spec.essential
    roots = [r for _, r in ess.terms]
    L = skolem_L(roots, w)
    thr = Fraction(1, p - 1)
    lams = []
    for beta in roots:
        x = beta ** L
        if x == 1:
            lams.append(None)
            continue
        v1 = valuation(x - 1, w)
        wl = precision + math.ceil(v1) + 4
        lam = local_log_exp(embed_local(x, w, wl), "log")
        lams.append((lam, v1))
    all_exact = all(l is None for l in lams)
    series = []
    for b in range(L):
        # P_i(L m + b) beta_i^b as polynomials in m
        qs = []
        for (poly, beta) in ess.terms:
            shifted = _poly.compose_linear(list(poly), L, b)
            bb = beta ** b
            qs.append([c * bb for c in shifted])
        if all_exact:
            coeffs = []
            for q in qs:
                coeffs = _poly.add(coeffs, q)
            g = LocalSeries.from_coefficients(w, coeffs or [0], precision)
        else:
            g = _analytic_section(w, qs, lams, precision, thr)
        series.append(g)
        g.exact_eval = (lambda m, b=b: term(ess, L * m + b))
    return L, series


def _analytic_section(w, qs, lams, precision, thr):
    slope_min = min((v - thr) for lv in lams if lv is not None for v in [lv[1]])
    vq = []
    for q in qs:
        vals = [valuation(c, w) for c in q if not c.is_zero()]
        vq.append(min(vals) if vals else Fraction(precision))
    # index bound: for n >= count every term has valuation >= precision
    count = 1
    base = min(vq) + thr
    maxdeg = max(len(q) for q in qs)
    while base + (count - maxdeg) * slope_min < precision:
        count += 1
    count = max(count, maxdeg) + 1
    tail = min(vq) + thr + (count - maxdeg) * slope_min
    coeffs = [local_constant(w, 0, precision) for _ in range(count)]
    for q, lv in zip(qs, lams):
        qe = [embed_local(c, w, precision + 4) for c in q]
        if lv is None:
            for j, c in enumerate(qe):
                coeffs[j] = coeffs[j] + c
            continue
        lam, _ = lv
        ex = _exp_terms(lam, count)
        for j, c in enumerate(qe):
            for n in range(j, count):
                coeffs[n] = coeffs[n] + c * ex[n - j]
    coeffs = [_cap(c, precision) for c in coeffs]
    return LocalSeries(w, coeffs, precision, Fraction(tail))


def _cap(x: LocalElement, precision: int) -> LocalElement:
    if x.precision <= precision:
        return x
    return LocalElement.make(x.place, x.shift, x.coords, max(precision - x.shift, 0))


# -- certificates ---------------------------------------------------------------------

@dataclass
class AQCCertificate:
    depth: int
    modulus: int
    good: dict  # class -> PowerProduct (value of f(n) / M^(n c))
    bad: list
    thresholds: dict  # class -> least n in the class from which the value holds
    L: int = 1
    t: int = 0
    provenance: dict = dc_field(default_factory=dict)
    warnings: list = dc_field(default_factory=list)

    @property
    def good_fraction(self) -> Fraction:
        return Fraction(len(self.good), self.modulus)

    def value(self, n: int):
        j = n % self.modulus
        if j not in self.good or n < self.thresholds[j]:
            return None
        return self.good[j]

    def to_json(self):
        return {
            "depth": self.depth,
            "modulus": self.modulus,
            "good": [{"class": j, "value": self.good[j].to_json()} for j in sorted(self.good)],
            "bad": sorted(self.bad),
            "thresholds": {str(j): self.thresholds[j] for j in sorted(self.thresholds)},
        }


def _tail_threshold(spec: PAdicFactorSpec, V: PowerProduct) -> int:
    """Least n0 with max_i C_i rho_i^n < V for all n >= n0 (V = |u~^ess| on a class)."""
    w = spec.w
    n0 = 0
    pv = V.as_prime_power()
    v = -pv[1] if pv[0] is not None else Fraction(0)
    for poly, beta in spec.tail:
        gamma = min(valuation(c, w) for c in poly if not c.is_zero())  # C = p^-gamma
        r = valuation(beta, w)  # rho = p^-r, r > 0
        bound = (v - gamma) / r
        need = math.floor(bound) + 1
        n0 = max(n0, need)
    return n0


def _first_in_class(j: int, d: int, n0: int) -> int:
    if j >= n0:
        return j
    k = -(-(n0 - j) // d)
    return j + k * d


def _section_certificate(g: LocalSeries, depth: int, extra: int):
    """(t_k, good residues mod p^t_k -> exact valuation, zero report) for one section."""
    p = g.p
    rep = zeros_in_Zp(g, depth, extra)
    lipv = g.lipschitz_valuation()
    bad_k = set(rep.bad_classes)
    # ell_k: min |g| on U_k, from the constant classes (refined where needed)
    ell_v = None
    for (c, j), gv in rep.constant_classes.items():
        if j >= depth and (c % p ** depth) in bad_k:
            continue
        ell_v = gv if ell_v is None else max(ell_v, gv)
    if ell_v is None:
        t = depth
    elif lipv is None:
        t = depth
    else:
        # ell > Lip p^-t  <=>  ell_v < lipv + t
        t = max(depth, math.floor(ell_v - lipv) + 1)
    return t, rep, bad_k


def decompose_with_budget(spec: PAdicFactorSpec, precision: int, budget: int = 400):
    """skolem_decompose, doubling the working precision until every section
    has a decidable Strassmann bound.  Returns (precision, L, sections)."""
    if not spec.normalized:
        spec = normalize_spec(spec)
    W = precision
    while True:
        try:
            L, series = skolem_decompose(spec, W)
            for g in series:
                strassmann_bound(g)
            return W, L, series
        except (AllCoefficientsIndistinguishableFromZero, PrecisionLoss):
            W *= 2
            if W > budget:
                raise


def aqc_certificate(spec: PAdicFactorSpec, depth: int, precision: int = None,
                    budget: int = 400, jobs: int = 1) -> AQCCertificate:
    """Depth-k certificate that f(n)/M^(nc) is almost quasi-constant."""
    if not spec.normalized:
        spec = normalize_spec(spec)
    w = spec.w
    p = w.p
    W, L, series = decompose_with_budget(spec, precision or max(2 * depth + 8, 16), budget)
    warnings = []

    def per_section(g):
        return _section_certificate(g, depth, 24)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(per_section, series))
    else:
        results = [per_section(g) for g in series]
    t = max(r[0] for r in results)
    pt = p ** t
    d = L * pt
    good = {}
    bad = []
    thresholds = {}
    ess = spec.essential
    for b, (tb, rep, bad_k) in enumerate(results):
        if rep.status == "UNKNOWN":
            warnings.append(f"section {b}: undecided classes {rep.unresolved[:8]} marked bad")
        for jp in range(pt):
            cls = L * jp + b
            if jp % p ** depth in bad_k:
                bad.append(cls)
                continue
            val = term(ess, cls)
            raw = PowerProduct.prime_power(p, -valuation(val, w))
            good[cls] = raw ** spec.c
            n0 = _tail_threshold(spec, raw)
            thresholds[cls] = _first_in_class(cls, d, n0)
    prov = {
        "precision": W,
        "strassmann": [r[1].strassmann for r in results],
        "zeros": [[(z.residue, z.exponent, z.exact) for z in r[1].zeros] for r in results],
        "lipschitz_valuation": [series[b].lipschitz_valuation() for b in range(L)],
        "section_t": [r[0] for r in results],
        "alpha1": spec.alpha1,
        "M": spec.M,
    }
    return AQCCertificate(depth, d, good, sorted(bad), thresholds, L, t, prov, warnings)


@dataclass
class VerificationReport:
    checked: int
    mismatches: list  # (n, recorded, actual)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_certificate(cert: AQCCertificate, spec: PAdicFactorSpec, samples: int,
                       oracle=None, stop_at_first: bool = False) -> VerificationReport:
    """Check ``samples`` points n >= threshold in every good class.

    ``oracle(n)`` may supply the independent value of f(n)/M^(nc); by default
    it is computed from the exact term and valuation."""
    if not spec.normalized:
        spec = normalize_spec(spec)
    if oracle is None:
        oracle = spec.normalized_value
    checked = 0
    mismatches = []
    for j in sorted(cert.good):
        n = cert.thresholds[j]
        for _ in range(samples):
            actual = oracle(n)
            checked += 1
            if actual != cert.good[j]:
                mismatches.append((n, cert.good[j], actual))
                if stop_at_first:
                    return VerificationReport(checked, mismatches)
            n += cert.modulus
    return VerificationReport(checked, mismatches)


# -- gluing ---------------------------------------------------------------------------

def section_assemble(parts, L: int):
    """Glue per-class functions f_b(m) = f(L m + b) into one function of n.

    All-QuasiPolynomial input gives a QuasiPolynomial; otherwise parts must be
    constant-valued (AQCCertificate, constant QuasiPolynomial) and the result is
    an AQCCertificate on modulus L * lcm(part moduli)."""
    if len(parts) != L:
        raise InconsistentOverlap(f"expected {L} parts, got {len(parts)}")
    if L == 1:
        return parts[0]
    if all(isinstance(q, QuasiPolynomial) for q in parts):
        dd = 1
        for q in parts:
            dd = _lcm(dd, q.d)
        D = L * dd
        polys = []
        for cls in range(D):
            b = cls % L
            q = parts[b]
            j = (cls - b) // L
            pm = list(q.polys[j % q.d])
            # m = (n - b) / L
            polys.append(tuple(_poly.compose_linear(pm, Fraction(1, L), Fraction(-b, L))) or (0,))
        thr = max(L * q.threshold for q in parts)
        return QuasiPolynomial(D, tuple(polys), thr)
    dd = 1
    for q in parts:
        if isinstance(q, QuasiPolynomial):
            if not q.is_constant:
                raise InconsistentOverlap("non-constant quasi-polynomial pieces cannot be glued into a certificate")
            dd = _lcm(dd, q.d)
        elif isinstance(q, AQCCertificate):
            dd = _lcm(dd, q.modulus)
        else:
            raise TypeError(f"unsupported part {type(q).__name__}")
    D = L * dd
    good, bad, thresholds = {}, [], {}
    for cls in range(D):
        b = cls % L
        j = (cls - b) // L
        q = parts[b]
        if isinstance(q, QuasiPolynomial):
            c = q.polys[j % q.d]
            val = c[0] if c else 0
            good[cls] = val if isinstance(val, PowerProduct) else PowerProduct(Fraction(val))
            m0 = _first_in_class(j, dd, q.threshold)
        else:
            jj = j % q.modulus
            if jj not in q.good:
                bad.append(cls)
                continue
            good[cls] = q.good[jj]
            m0 = _first_in_class(j, dd, q.thresholds[jj])
        thresholds[cls] = L * m0 + b
    depth = max((q.depth for q in parts if isinstance(q, AQCCertificate)), default=0)
    return AQCCertificate(depth, D, good, bad, thresholds, L)


# -- the f_s family -------------------------------------------------------------------

def fs_counterexample(s, n: int):
    """f_s(n) = s_k for the least k with n = 2^(k-1) - 1 mod 2^k."""
    if not s or s[0] != 1:
        raise ValueError("s_1 must be 1")
    if any(x == 0 for x in s):
        raise ValueError("entries of s must be nonzero")
    if n < 0:
        raise ValueError("n must be nonnegative")
    k = 1
    m = n
    while m & 1:
        m >>= 1
        k += 1
    if k > len(s):
        raise IndexError(f"f_s({n}) needs s_{k}, only {len(s)} values supplied")
    return s[k - 1]


# -- empirical (P2) / (P3b) checks ------------------------------------------------------

def p2_check(values, eps_schedule=(0.5, 0.25, 0.1), start: int = 1):
    """For each eps, the least n0 such that |log f(n)| <= eps n for all sampled
    n >= n0 (values: list of PowerProduct indexed from 0).  Returns {eps: n0}."""
    out = {}
    N = len(values)
    for eps in eps_schedule:
        n0 = start
        for n in range(start, N):
            v = values[n]
            if v.is_zero or abs(v.log()) > eps * n:
                n0 = n + 1
        out[eps] = n0
    return out


def bad_fraction_chain(spec: PAdicFactorSpec, depths) -> list:
    """Bad-class fractions of certificates along a chain of depths."""
    return [Fraction(len(c.bad), c.modulus) for c in (aqc_certificate(spec, k) for k in depths)]
