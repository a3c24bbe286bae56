"""Polynomial-exponential sequences u_n = sum_i P_i(n) alpha_i^n over a number field.

The zero sequence is the distinguished value :data:`ZERO`; every operation that
cancels completely returns it instead of an empty term list.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import _poly
from .errors import BOutOfRange, FieldMismatch, RootOfUnityInput, ZeroSequenceError
from .numfield import AlgebraicNumber, NumberField, abs_squared, is_root_of_unity, poly_str
from .places import Arch, NonArch, Place, abs_value, valuation
from .powerproduct import PowerProduct
from .realalg import RealAlgebraic


class _Zero:
    """The zero sequence."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Zero"

    def __bool__(self):
        return False


ZERO = _Zero()


def _coerce_poly(field: NumberField, poly):
    return tuple(_poly.trim([field(c) for c in poly]))


@dataclass(frozen=True)
class PolyExpSeq:
    field: NumberField
    terms: tuple  # ((poly, root), ...), poly a tuple of AlgebraicNumber

    @staticmethod
    def make(field: NumberField, terms):
        """Canonical form: merge equal roots, drop zero polynomials, sort."""
        acc = {}
        for poly, root in terms:
            root = field(root)
            if root.is_zero():
                raise ValueError("zero root")
            poly = list(_coerce_poly(field, poly))
            if root in acc:
                acc[root] = _poly.add(acc[root], poly)
            else:
                acc[root] = poly
        items = [(tuple(p), r) for r, p in acc.items() if _poly.trim(p)]
        if not items:
            return ZERO
        items.sort(key=lambda t: t[1].coords)
        return PolyExpSeq(field, tuple(items))

    @staticmethod
    def from_pairs(field: NumberField, pairs):
        """Convenience: pairs of (coefficient or coefficient list, root)."""
        out = []
        for c, r in pairs:
            out.append((c if isinstance(c, (list, tuple)) else [c], r))
        return PolyExpSeq.make(field, out)

    @property
    def roots(self):
        return [r for _, r in self.terms]

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = []
        for poly, root in self.terms:
            coeffs = [c.coords[0] if c.is_rational() else c for c in poly]
            pstr = poly_str(coeffs, "n") if all(isinstance(c, Fraction) for c in coeffs) else str(list(poly))
            parts.append(f"({pstr})*({root})^n")
        return " + ".join(parts)


def _check_nonzero(seq):
    if seq is ZERO:
        raise ZeroSequenceError("operation undefined on the zero sequence")


def _same_field(a, b):
    if a is not ZERO and b is not ZERO and a.field != b.field:
        raise FieldMismatch("sequences over different fields")


def term(seq, n: int):
    """Exact value u_n."""
    if seq is ZERO:
        return Fraction(0)
    total = seq.field.zero()
    for poly, root in seq.terms:
        total = total + _poly.evaluate(list(poly), n) * root ** n
    return total


def seq_add(a, b):
    _same_field(a, b)
    if a is ZERO:
        return b
    if b is ZERO:
        return a
    return PolyExpSeq.make(a.field, list(a.terms) + list(b.terms))


def seq_neg(a):
    if a is ZERO:
        return ZERO
    return PolyExpSeq.make(a.field, [([-c for c in p], r) for p, r in a.terms])


def seq_mul(a, b):
    _same_field(a, b)
    if a is ZERO or b is ZERO:
        return ZERO
    out = []
    for (p1, r1), (p2, r2) in itertools.product(a.terms, b.terms):
        out.append((_poly.mul(list(p1), list(p2)), r1 * r2))
    return PolyExpSeq.make(a.field, out)


def section(seq, a: int, b: int):
    """m -> u_{a m + b}."""
    if a < 1 or b < 0:
        raise ValueError("need a >= 1 and b >= 0")
    if seq is ZERO:
        return ZERO
    out = []
    for poly, root in seq.terms:
        shifted = _poly.compose_linear(list(poly), a, b)
        rb = root ** b
        out.append(([c * rb for c in shifted], root ** a))
    return PolyExpSeq.make(seq.field, out)


# -- places and comparisons ---------------------------------------------------

def _abs_key(root: AlgebraicNumber, w: Place):
    """An exactly comparable stand-in for |root|_w."""
    if isinstance(w, NonArch):
        return -valuation(root, w)
    return abs_squared(root, w.index)


def _cmp(x, y) -> int:
    if isinstance(x, RealAlgebraic):
        return x.compare(y)
    return (x > y) - (x < y)


@dataclass(frozen=True)
class EssentialPart:
    parent: object
    place: Place
    M: object  # PowerProduct or RealAlgebraic
    indices: tuple
    sequence: object

    @property
    def roots(self):
        return [self.parent.terms[i][1] for i in self.indices]


def essential_part(seq, w: Place) -> EssentialPart:
    """Sub-sum over the roots of maximal |.|_w."""
    _check_nonzero(seq)
    keys = [_abs_key(r, w) for _, r in seq.terms]
    best = [0]
    for i in range(1, len(keys)):
        c = _cmp(keys[i], keys[best[0]])
        if c > 0:
            best = [i]
        elif c == 0:
            best.append(i)
    idx = tuple(best)
    M = abs_value(seq.terms[idx[0]][1], w)
    sub = PolyExpSeq.make(seq.field, [seq.terms[i] for i in idx])
    return EssentialPart(seq, w, M, idx, sub)


def is_nondegenerate(seq) -> bool:
    _check_nonzero(seq)
    roots = seq.roots
    for i, j in itertools.combinations(range(len(roots)), 2):
        if is_root_of_unity(roots[i] / roots[j]) is not None:
            return False
    return True


def torsion_lcm(roots) -> int:
    """lcm of the orders of the roots of unity among the ratios of ``roots``."""
    L = 1
    for i, j in itertools.combinations(range(len(roots)), 2):
        N = is_root_of_unity(roots[i] / roots[j])
        if N is not None:
            L = L * N // math.gcd(L, N)
    return L


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    L: int
    witness: object  # class b (int) when unstable, else None
    sections: dict  # b -> section of the essential part (ZERO or PolyExpSeq)
    essential: EssentialPart

    def normalized_section_coefficients(self, reference=None) -> dict:
        """For sections that are constant multiples of rho^(Lm+b), return the
        constant: b -> c with u_{v,Lm+b} = c * rho^(Lm+b).

        ``reference`` defaults to the first rational essential root, or the
        first essential root when none is rational."""
        roots = self.essential.roots
        if reference is None:
            rational = [r for r in roots if r.is_rational()]
            reference = rational[0] if rational else roots[0]
        out = {}
        target = reference ** self.L
        for b, sec in self.sections.items():
            if sec is ZERO:
                out[b] = 0
                continue
            if len(sec.terms) != 1 or len(sec.terms[0][0]) != 1 or sec.terms[0][1] != target:
                raise ValueError(f"section {b} is not a constant multiple of the reference power")
            out[b] = sec.terms[0][0][0] / reference ** b
        return out


def is_v_stable(seq, w: Place) -> StabilityVerdict:
    ess = essential_part(seq, w)
    L = torsion_lcm(ess.roots)
    sections = {b: section(ess.sequence, L, b) for b in range(L)}
    witness = next((b for b in range(L) if sections[b] is ZERO), None)
    return StabilityVerdict(witness is None, L, witness, sections, ess)


def is_v_stable_bruteforce(seq, w: Place, L: int | None = None) -> bool:
    """Check section(essential, a, b) != Zero for all a <= 2L, b < a."""
    ess = essential_part(seq, w)
    if L is None:
        L = torsion_lcm(ess.roots)
    for a in range(1, 2 * L + 1):
        for b in range(a):
            if section(ess.sequence, a, b) is ZERO:
                return False
    return True


# -- growth -------------------------------------------------------------------

@dataclass
class GrowthReport:
    failures: list
    n_range: tuple
    threshold: int  # first n after which the range shows no failure
    recurrent: bool  # failures persist into the last quarter of the range

    @property
    def confined(self) -> bool:
        return not self.recurrent


def _B_value(B, w):
    if isinstance(B, PowerProduct):
        return B
    return PowerProduct(Fraction(B))


def growth_check(seq, w: Place, B, n_range=(0, 200)) -> GrowthReport:
    """Table of n in ``n_range`` (inclusive) with |u_n|_w < B^n."""
    ess = essential_part(seq, w)
    Bp = _B_value(B, w)
    if Bp.sign() <= 0:
        raise BOutOfRange("B must be positive")
    if isinstance(ess.M, PowerProduct):
        if Bp.compare(ess.M) >= 0:
            raise BOutOfRange(f"B = {B} is not below M = {ess.M}")
    else:
        if not Bp.is_rational:
            raise BOutOfRange("archimedean B must be rational")
        if ess.M.compare(Bp.rational) <= 0:
            raise BOutOfRange(f"B = {B} is not below M")
    lo, hi = n_range
    failures = []
    for n in range(lo, hi + 1):
        u = term(seq, n)
        if not isinstance(u, AlgebraicNumber) or u.is_zero():
            failures.append(n)
            continue
        Bn = Bp ** n
        if isinstance(w, NonArch):
            ok = abs_value(u, w).compare(Bn) >= 0
        elif u.is_rational():
            ok = abs(u.coords[0]) >= Bn.rational
        else:
            ok = abs_squared(u, w.index).compare(Bn.rational ** 2) >= 0
        if not ok:
            failures.append(n)
    threshold = (failures[-1] + 1) if failures else lo
    recurrent = bool(failures) and failures[-1] >= hi - (hi - lo) // 4
    return GrowthReport(failures, (lo, hi), threshold, recurrent)


def from_xi_product(xi) -> PolyExpSeq:
    """Expand prod_i (xi_i^n - 1)."""
    if not xi:
        raise ValueError("need at least one xi")
    field = xi[0].field
    for x in xi:
        if x.is_zero() or is_root_of_unity(x) is not None:
            raise RootOfUnityInput(f"{x} is zero or a root of unity", witness=x)
    m = len(xi)
    out = []
    for mask in range(1 << m):
        root = field.one()
        k = 0
        for i in range(m):
            if mask >> i & 1:
                root = root * xi[i]
                k += 1
        out.append(([(-1) ** (m - k)], root))
    return PolyExpSeq.make(field, out)
