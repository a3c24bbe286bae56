"""Essential parts and v-stability on two small sequences.

Run:  python3 demos/stability_tour.py
"""
from fractions import Fraction

from adelic.lrs import PolyExpSeq, essential_part, is_v_stable, seq_mul, term
from adelic.numfield import nf_create, rationals
from adelic.places import place_from_selector

K = nf_create((1, 1, 1))  # Q(zeta), zeta^2 + zeta + 1 = 0
z = K.gen()

u = PolyExpSeq.make(K, [([K(1)], K(Fraction(1, 2))), ([K(1)], K(Fraction(-1, 2))),
                        ([K(1)], K(5)), ([K(2)], 5 * z), ([K(3)], 5 * z * z)])
print("u_n for n = 0..5:", [str(term(u, n)) for n in range(6)])

for sel in ("2:0", "inf:0"):
    w = place_from_selector(K, sel)
    v = is_v_stable(u, w)
    ess = essential_part(u, w)
    print(f"\nplace {sel}: essential roots {[str(r) for r in ess.roots]}, M = {ess.M!r}")
    if v.stable:
        print(f"  stable; the essential part on n = {v.L}m + b is c_b * 5^n with")
        for b, c in v.normalized_section_coefficients(K(5)).items():
            print(f"    b = {b}: c_b = {c}")
    else:
        print(f"  not stable: the essential part vanishes on n = {v.L}m + {v.witness}")

# Essential parts do not multiply when stability fails.
Q = rationals()
inf = place_from_selector(Q, "inf:0")
a = PolyExpSeq.make(Q, [([Q(1)], Q(2)), ([Q(1)], Q(-2)), ([Q(1)], Q(1))])
t = PolyExpSeq.make(Q, [([Q(1)], Q(2)), ([Q(-1)], Q(-2))])
print("\na = 2^n + (-2)^n + 1, t = 2^n - (-2)^n")
print("  ess(a) * ess(t) =", seq_mul(essential_part(a, inf).sequence, essential_part(t, inf).sequence))
print("  ess(a * t)      =", essential_part(seq_mul(a, t), inf).sequence)
