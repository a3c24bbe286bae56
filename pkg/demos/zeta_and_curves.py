"""Dynamical zeta functions and an elliptic-curve oracle.

Run:  python3 demos/zeta_and_curves.py
"""
from adelic.ecoracle import Curve, count_points, crosscheck_Nk, frobenius_spec, multiplication_zeta_spec, torsion_count
from adelic.numfield import rationals
from adelic.zeta import ZetaSpec, classify_zeta, zeta_coeffs

E = Curve(5, 1, 1)
print("y^2 = x^3 + x + 1 over F_5^k, k = 1..4:", [count_points(E, k) for k in range(1, 5)])
print("cross-check against prod (xi^k - 1):", crosscheck_Nk(E, 4).ok)

spec = frobenius_spec(E)
print("\nFrobenius zeta coefficients:", [str(z) for z in zeta_coeffs(spec, 6)])
v = classify_zeta(spec)
print("verdict:", v.kind, "Z(x) =", v.witness["Z"])

print("\n#E[5] over F_5^r, r = 1..4:", [torsion_count(E, 5, r) for r in range(1, 5)])
m6 = multiplication_zeta_spec(E, 6)
print("phi = [6]: r =", [str(x) for x in m6.r], "s =", m6.s, "->", classify_zeta(m6).kind)

Q = rationals()
v = classify_zeta(ZetaSpec((Q(6), Q(11)), 5, (1,), (-1,)))
print("\nxi = (6, 11), p = 5, r = (1), s = (-1):", v.kind, "radius", v.radius.to_json()["approx"])
