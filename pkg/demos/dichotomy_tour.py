"""Rational or natural boundary: exact verdicts and the numerical evidence.

Run:  python3 demos/dichotomy_tour.py
"""
from fractions import Fraction

from adelic.aqp import PAdicFactorSpec
from adelic.dichotomy import BMWSpec, PerturbedSeries, classify_bmw, classify_main, coefficients, pade_boundary_scan
from adelic.lrs import from_xi_product
from adelic.numfield import rationals
from adelic.places import place_from_selector
from adelic.rational import hankel_rank_profile

Q = rationals()
W3 = place_from_selector(Q, "3:0")

# sum |2^n - 1|_3 (2^n - 1) x^n: the 3-adic factor has a zero, so no continuation past |x| = 1/2
u = from_xi_product([Q(2)])
v = classify_main(PerturbedSeries(u, (PAdicFactorSpec.create(u, W3),)))
print("sum |2^n-1|_3 (2^n-1) x^n ->", v.kind, "radius", v.radius.to_json()["approx"], v.witness)

# the same with 3^n - 1, whose 3-adic size never changes
t = from_xi_product([Q(3)])
v = classify_main(PerturbedSeries(t, (PAdicFactorSpec.create(t, W3),)))
print("sum |3^n-1|_3 (3^n-1) x^n ->", v.kind, "witness", v.witness)

for xi in (2, 3):
    spec = BMWSpec.single(Q(xi), ["3:0"])
    v = classify_bmw(spec)
    print(f"\nBMW xi = {xi}, S = {{3}}: {v.kind}, radius {v.radius.to_json()['approx']}")
    if "Z" in v.witness:
        print("  Z(x) =", v.witness["Z"])

spec = BMWSpec.single(Q(2), ["3:0"])
c = [Fraction(0)] + coefficients(spec, 399)
print("\nHankel ranks at 50/100/200/400:", hankel_rank_profile(c, [50, 100, 200, 400]))
orders = [(k, k) for k in range(2, 13, 2)]
tab = pade_boundary_scan([float(x) for x in c], orders)
print("Pade poles with 0.45 <= |x| <= 0.55:", tab.count_in_annulus(0.45, 0.55))
